// Copyright 2026 The physcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHYSCORR_ORCHESTRATOR_HPP
#define PHYSCORR_ORCHESTRATOR_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "physcorr/model_client.hpp"
#include "physcorr/prompt.hpp"

namespace physcorr {

struct DecideConfig {
    std::size_t history = 20; // transcript entries re-sent with each query
    int retries = 2;          // re-queries after an unparseable reply
};

inline constexpr const char* kFormatReminder =
    "Format reminder: reply with exactly one command such as '# Pick ; cooking pot &' using an item from the "
    "available actions, followed by your reasoning.";

/// Result of one decision. `entry` is ready to append to the transcript; a
/// missing `action` means hold in place.
struct DecisionOutcome {
    std::optional<SemanticAction> action;
    std::string label;
    TranscriptEntry entry;
    int retries_used = 0;
    double latency = 0.0;
    bool model_unavailable = false;
};

/// Queries the model with the system prompt, the last `history` transcript
/// entries and the user prompt. Unparseable replies are retried with a format
/// reminder; transport failures and exhausted retries yield a hold with a
/// failed entry.
DecisionOutcome decide(ModelClient& client, const PromptBundle& bundle, std::span<const TranscriptEntry> transcript,
                       const Scene& scene, const DecideConfig& cfg = {});

/// One semantic state of the recall benchmark.
struct RecallState {
    PromptState prompt;
    Pose ee_pose;
};

struct RecallScenario {
    Scene scene;
    DictionaryConfig dictionary;
    RecallState target;                // the correctable state
    SemanticAction corrected;          // what the human pushes the robot to
    std::vector<RecallState> fillers;  // cycled between correction and re-test
};

struct RecallRow {
    int n = 0;
    int trials = 0;
    int successes = 0;
    int errors = 0; // trials where the model was unavailable (scored as failures)

    double rate() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

/// For each n: correct the target state, run n filler interactions, present
/// the target again and score whether the model repeats the correction.
std::vector<RecallRow> recallExperiment(const ModelClient& prototype, const RecallScenario& scenario,
                                        std::span<const int> n_values, int trials, const DecideConfig& cfg = {});

} // namespace physcorr

#endif // PHYSCORR_ORCHESTRATOR_HPP

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

#ifndef PHYSCORR_RECALL_HPP
#define PHYSCORR_RECALL_HPP

#include <filesystem>
#include <iosfwd>
#include <span>

#include "json.hpp"

#include "physcorr/orchestrator.hpp"

namespace physcorr {

/// Recall benchmark file: {"scene": [...objects], "target": state, "corrected":
/// {"verb", "object"}, "fillers": [state, ...]} where a state is {"held",
/// "ee", "human_approach", "planned"}.
RecallScenario parseRecallScenario(const nlohmann::json& doc);
RecallScenario loadRecallScenario(const std::filesystem::path& path);

/// Kitchen with a cooking pot, a gallon of water, the stove and the counter.
/// The robot holds the pot; the human corrects a counter placement to the stove.
RecallScenario defaultRecallScenario();

/// Mock policies for the default scenario. A negative `max_gap` recalls a
/// correction at any distance; otherwise corrections more than `max_gap`
/// entries old are forgotten.
nlohmann::json recallPolicy(int max_gap);

/// Rows as CSV: n,success_rate,successes,trials,errors[,reference].
void writeRecallCsv(std::ostream& out, std::span<const RecallRow> rows, bool with_reference);

/// Reference success rates reported for a live model at n = 0, 5, 10, 15.
std::optional<double> liveReferenceRate(int n);

} // namespace physcorr

#endif // PHYSCORR_RECALL_HPP

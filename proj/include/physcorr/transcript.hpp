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

#ifndef PHYSCORR_TRANSCRIPT_HPP
#define PHYSCORR_TRANSCRIPT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "physcorr/scene.hpp"

namespace physcorr {

enum class ResultKind { Pending, Succeeded, Failed };

struct ExecutionResult {
    ResultKind kind = ResultKind::Pending;
    std::string reason;

    static ExecutionResult succeeded() { return {ResultKind::Succeeded, {}}; }
    static ExecutionResult failed(std::string why) { return {ResultKind::Failed, std::move(why)}; }
    bool operator==(const ExecutionResult&) const = default;
};

std::string_view resultName(ResultKind kind);

struct TranscriptEntry {
    std::size_t step = 0;
    std::string user_prompt;
    std::optional<SemanticAction> proposed;
    std::string proposed_label;
    std::string raw_response;
    std::string reasoning;
    ExecutionResult result;
    std::optional<SemanticAction> correction;
    std::string correction_label;
    std::string correction_text;
};

/// "the human corrected the robot's action by pushing it to: '<label>'"
std::string correctionSentence(const std::string& label);

/// Append-only interaction history.
class Transcript {
public:
    const std::vector<TranscriptEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    std::size_t nextStep() const { return entries_.size(); }

    /// Assigns the step index and appends.
    const TranscriptEntry& append(TranscriptEntry entry);

    /// Last `k` entries; never copies or mutates the stored history.
    std::span<const TranscriptEntry> recent(std::size_t k) const;

    void setLatestResult(ExecutionResult result);

    /// Annotates the latest entry. A second correction in the same step
    /// replaces the first; both sentences stay in correction_text.
    void recordCorrection(const SemanticAction& corrected, const std::string& label);

private:
    std::vector<TranscriptEntry> entries_;
};

} // namespace physcorr

#endif // PHYSCORR_TRANSCRIPT_HPP

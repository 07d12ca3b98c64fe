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

#include "physcorr/transcript.hpp"

#include <stdexcept>

namespace physcorr {

std::string_view resultName(ResultKind kind)
{
    switch (kind) {
    case ResultKind::Pending: return "pending";
    case ResultKind::Succeeded: return "succeeded";
    case ResultKind::Failed: return "failed";
    }
    return "pending";
}

std::string correctionSentence(const std::string& label)
{
    return "the human corrected the robot's action by pushing it to: '" + label + "'";
}

const TranscriptEntry& Transcript::append(TranscriptEntry entry)
{
    entry.step = entries_.size();
    entries_.push_back(std::move(entry));
    return entries_.back();
}

std::span<const TranscriptEntry> Transcript::recent(std::size_t k) const
{
    const std::size_t n = std::min(k, entries_.size());
    return std::span<const TranscriptEntry>(entries_).last(n);
}

void Transcript::setLatestResult(ExecutionResult result)
{
    if (entries_.empty()) {
        throw std::logic_error("transcript: no entry to attach a result to");
    }
    entries_.back().result = std::move(result);
}

void Transcript::recordCorrection(const SemanticAction& corrected, const std::string& label)
{
    if (entries_.empty()) {
        throw std::logic_error("transcript: correction with no interaction to attach it to");
    }
    TranscriptEntry& e = entries_.back();
    const std::string sentence = correctionSentence(label);
    e.correction_text = e.correction_text.empty() ? sentence : e.correction_text + "; then " + sentence;
    e.correction = corrected;
    e.correction_label = label;
}

} // namespace physcorr

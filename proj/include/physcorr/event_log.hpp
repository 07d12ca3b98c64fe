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

#ifndef PHYSCORR_EVENT_LOG_HPP
#define PHYSCORR_EVENT_LOG_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace physcorr {

/// Record kinds. `init` and `state_sample`, `particle_sample`, `llm_result`,
/// `action_complete`, `human_event` extend the core set.
namespace event {
inline constexpr const char* kInit = "init";
inline constexpr const char* kLlmQuery = "llm_query";
inline constexpr const char* kLlmAction = "llm_action";
inline constexpr const char* kLlmResult = "llm_result";
inline constexpr const char* kCorrectionStart = "correction_start";
inline constexpr const char* kCorrectionEnd = "correction_end";
inline constexpr const char* kSemanticCorrection = "semantic_correction";
inline constexpr const char* kPick = "pick";
inline constexpr const char* kPlace = "place";
inline constexpr const char* kActionComplete = "action_complete";
inline constexpr const char* kHumanEvent = "human_event";
inline constexpr const char* kConfidenceSample = "confidence_sample";
inline constexpr const char* kEstimateSample = "estimate_sample";
inline constexpr const char* kWrenchSample = "wrench_sample";
inline constexpr const char* kStateSample = "state_sample";
inline constexpr const char* kParticleSample = "particle_sample";
} // namespace event

struct EventRecord {
    std::uint64_t tick = 0;
    std::string kind;
    nlohmann::json payload = nlohmann::json::object();

    bool operator==(const EventRecord&) const = default;
};

/// One JSON object per line: {"kind": ..., "payload": {...}, "tick": N}.
std::string serializeRecord(const EventRecord& record);
/// Throws std::runtime_error on malformed lines.
EventRecord parseRecord(const std::string& line);

class EventLog {
public:
    using Listener = std::function<void(const EventRecord&)>;

    /// Appends; ticks must not decrease.
    void append(EventRecord record);
    const std::vector<EventRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    void clear() { records_.clear(); }

    void setListener(Listener listener) { listener_ = std::move(listener); }

    void write(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static EventLog load(const std::filesystem::path& path);
    static EventLog read(std::istream& in);

private:
    std::vector<EventRecord> records_;
    Listener listener_;
};

} // namespace physcorr

#endif // PHYSCORR_EVENT_LOG_HPP

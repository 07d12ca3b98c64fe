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

#ifndef PHYSCORR_WIRE_HPP
#define PHYSCORR_WIRE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "physcorr/controller.hpp"

namespace physcorr {

enum class WireType {
    StateSnapshot,
    ParticleCloud,
    TranscriptDelta,
    Event,
    ApplyWrench,
    SetPause,
    Reset,
    Error,
};

std::string_view wireTypeName(WireType type);
std::optional<WireType> parseWireType(std::string_view name);

/// One frame: {"type": ..., "seq": N, "payload": {...}}.
struct WireMessage {
    WireType type = WireType::Event;
    std::uint64_t seq = 0;
    nlohmann::json payload = nlohmann::json::object();

    bool operator==(const WireMessage&) const = default;
};

class WireError : public std::runtime_error {
public:
    explicit WireError(const std::string& what) : std::runtime_error(what) {}
};

std::string serializeWire(const WireMessage& message);

/// Parses and validates a frame, including the payload schema of the
/// client-to-server types. Throws WireError.
WireMessage parseWire(std::string_view text);

/// Payload of apply_wrench, {"force": [3], "torque": [3]}; torque optional.
Wrench wrenchFromPayload(const nlohmann::json& payload);
nlohmann::json wrenchPayload(const Wrench& wrench);

WireMessage errorMessage(const std::string& reason, std::optional<std::uint64_t> in_reply_to = std::nullopt);

} // namespace physcorr

#endif // PHYSCORR_WIRE_HPP

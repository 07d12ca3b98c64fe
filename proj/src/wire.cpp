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

#include "physcorr/wire.hpp"

#include <cmath>

namespace physcorr {

using nlohmann::json;

namespace {

constexpr std::pair<WireType, std::string_view> kNames[] = {
    {WireType::StateSnapshot, "state_snapshot"},
    {WireType::ParticleCloud, "particle_cloud"},
    {WireType::TranscriptDelta, "transcript_delta"},
    {WireType::Event, "event"},
    {WireType::ApplyWrench, "apply_wrench"},
    {WireType::SetPause, "set_pause"},
    {WireType::Reset, "reset"},
    {WireType::Error, "error"},
};

Eigen::Vector3d vector3(const json& j, const char* field)
{
    if (!j.is_array() || j.size() != 3) {
        throw WireError(std::string(field) + ": expected a 3-vector");
    }
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_number()) {
            throw WireError(std::string(field) + ": expected numbers");
        }
        v[i] = j[static_cast<std::size_t>(i)].get<double>();
        if (!std::isfinite(v[i])) {
            throw WireError(std::string(field) + ": must be finite");
        }
    }
    return v;
}

} // namespace

std::string_view wireTypeName(WireType type)
{
    for (const auto& [t, name] : kNames) {
        if (t == type) {
            return name;
        }
    }
    return "event";
}

std::optional<WireType> parseWireType(std::string_view name)
{
    for (const auto& [t, n] : kNames) {
        if (n == name) {
            return t;
        }
    }
    return std::nullopt;
}

std::string serializeWire(const WireMessage& message)
{
    return json{{"type", std::string(wireTypeName(message.type))}, {"seq", message.seq}, {"payload", message.payload}}
        .dump();
}

Wrench wrenchFromPayload(const nlohmann::json& payload)
{
    if (!payload.is_object() || !payload.contains("force")) {
        throw WireError("apply_wrench: payload needs a force");
    }
    Wrench w;
    w.force = vector3(payload.at("force"), "force");
    if (payload.contains("torque")) {
        w.torque = vector3(payload.at("torque"), "torque");
    }
    return w;
}

nlohmann::json wrenchPayload(const Wrench& wrench)
{
    return {{"force", {wrench.force.x(), wrench.force.y(), wrench.force.z()}},
            {"torque", {wrench.torque.x(), wrench.torque.y(), wrench.torque.z()}}};
}

WireMessage parseWire(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw WireError(std::string("not JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw WireError("frame must be an object");
    }
    if (!j.contains("type") || !j.at("type").is_string()) {
        throw WireError("missing type");
    }
    const std::optional<WireType> type = parseWireType(j.at("type").get<std::string>());
    if (!type) {
        throw WireError("unknown type '" + j.at("type").get<std::string>() + "'");
    }
    if (!j.contains("seq") || !j.at("seq").is_number_unsigned()) {
        throw WireError("seq must be a non-negative integer");
    }
    WireMessage m;
    m.type = *type;
    m.seq = j.at("seq").get<std::uint64_t>();
    m.payload = j.value("payload", json::object());
    if (!m.payload.is_object()) {
        throw WireError("payload must be an object");
    }
    switch (m.type) {
    case WireType::ApplyWrench:
        (void)wrenchFromPayload(m.payload);
        break;
    case WireType::SetPause:
        if (!m.payload.contains("paused") || !m.payload.at("paused").is_boolean()) {
            throw WireError("set_pause: payload needs a boolean 'paused'");
        }
        break;
    default:
        break;
    }
    return m;
}

WireMessage errorMessage(const std::string& reason, std::optional<std::uint64_t> in_reply_to)
{
    WireMessage m;
    m.type = WireType::Error;
    m.payload = {{"reason", reason}};
    if (in_reply_to) {
        m.payload["in_reply_to"] = *in_reply_to;
    }
    return m;
}

} // namespace physcorr

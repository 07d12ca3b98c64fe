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

#include "physcorr/snapshot.hpp"

#include <cmath>

namespace physcorr {

using nlohmann::json;

namespace {

json pose7(const json& pose)
{
    const json& p = pose.at("position");
    const json& q = pose.at("orientation");
    return json::array({p[0], p[1], p[2], q[0], q[1], q[2], q[3]});
}

bool discrete(const std::string& kind)
{
    return kind == event::kLlmQuery || kind == event::kLlmAction || kind == event::kLlmResult ||
           kind == event::kCorrectionStart || kind == event::kCorrectionEnd ||
           kind == event::kSemanticCorrection || kind == event::kPick || kind == event::kPlace ||
           kind == event::kActionComplete || kind == event::kHumanEvent || kind == event::kInit;
}

} // namespace

void SnapshotBuilder::reset()
{
    dt_ = 0.005;
    last_tick_ = 0;
    snapshots_ = 0;
    transcript_ = json::array();
}

WireMessage SnapshotBuilder::upsert(std::size_t step)
{
    return {WireType::TranscriptDelta, 0, {{"reset", false}, {"entries", json::array({transcript_.at(step)})}}};
}

WireMessage SnapshotBuilder::transcriptResync() const
{
    return {WireType::TranscriptDelta, 0, {{"reset", true}, {"entries", transcript_}}};
}

std::vector<WireMessage> SnapshotBuilder::consume(const EventRecord& record)
{
    std::vector<WireMessage> out;
    last_tick_ = record.tick;
    const json& p = record.payload;

    if (record.kind == event::kInit) {
        reset();
        dt_ = p.value("dt", 0.005);
        last_tick_ = record.tick;
        out.push_back(transcriptResync());
    }

    if (record.kind == event::kStateSample) {
        // snapshot k is due at tick ceil(k / (rate dt))
        const double ticks_per_snapshot = 1.0 / (rate_ * dt_);
        const auto due = static_cast<std::uint64_t>(std::ceil(static_cast<double>(snapshots_) * ticks_per_snapshot - 1e-9));
        if (record.tick >= due) {
            json objects = json::array();
            for (const json& o : p.at("objects")) {
                objects.push_back({{"id", o.at("id")}, {"pose", pose7(o.at("pose"))}});
            }
            const json& tw = p.at("twist");
            const json& lin = tw.at("linear");
            const json& ang = tw.at("angular");
            out.push_back({WireType::StateSnapshot,
                           0,
                           {{"tick", record.tick},
                            {"t", p.at("t")},
                            {"ee_pose", pose7(p.at("pose"))},
                            {"ee_twist", json::array({lin[0], lin[1], lin[2], ang[0], ang[1], ang[2]})},
                            {"held", p.at("held")},
                            {"objects", objects},
                            {"c_lin", p.at("c_lin")},
                            {"c_rot", p.at("c_rot")},
                            {"resample_rate", p.at("resample_rate")},
                            {"action", p.at("action")},
                            {"attractor", pose7(p.at("attractor"))},
                            {"in_flight_llm", p.at("in_flight_llm")},
                            {"human_approach", p.value("human_approach", json(nullptr))}}});
            // skip snapshot slots that fell between two samples
            while (static_cast<std::uint64_t>(std::ceil(static_cast<double>(snapshots_) * ticks_per_snapshot - 1e-9)) <=
                   record.tick) {
                ++snapshots_;
            }
        }
        return out;
    }

    if (record.kind == event::kParticleSample) {
        json cloud = json::array();
        for (const json& q : p.at("particles")) {
            cloud.push_back({{"position", json::array({q[0], q[1], q[2]})}, {"weight", q[3]}});
        }
        out.push_back({WireType::ParticleCloud, 0, {{"tick", record.tick}, {"particles", cloud}}});
        return out;
    }

    if (record.kind == event::kLlmAction) {
        const std::size_t step = p.at("step").get<std::size_t>();
        transcript_.push_back({{"step", step},
                               {"prompt", p.value("prompt", "")},
                               {"action", p.at("action")},
                               {"label", p.value("label", "")},
                               {"reasoning", p.value("reasoning", "")},
                               {"result", "pending"},
                               {"reason", ""},
                               {"correction", nullptr},
                               {"correction_label", ""},
                               {"correction_text", ""}});
        out.push_back(upsert(transcript_.size() - 1));
    } else if (record.kind == event::kLlmResult) {
        transcript_.push_back({{"step", p.at("step")},
                               {"prompt", p.value("prompt", "")},
                               {"action", p.value("proposed", json(nullptr))},
                               {"label", ""},
                               {"reasoning", ""},
                               {"result", p.value("result", "failed")},
                               {"reason", p.value("reason", "")},
                               {"correction", nullptr},
                               {"correction_label", ""},
                               {"correction_text", ""}});
        out.push_back(upsert(transcript_.size() - 1));
    } else if (record.kind == event::kActionComplete && !transcript_.empty()) {
        transcript_.back()["result"] = "succeeded";
        out.push_back(upsert(transcript_.size() - 1));
    } else if (record.kind == event::kSemanticCorrection && !transcript_.empty()) {
        json& e = transcript_.back();
        const std::string sentence = p.value("sentence", "");
        const std::string previous = e.at("correction_text").get<std::string>();
        e["correction"] = p.at("action");
        e["correction_label"] = p.value("label", "");
        e["correction_text"] = previous.empty() ? sentence : previous + "; then " + sentence;
        out.push_back(upsert(transcript_.size() - 1));
    }

    if (discrete(record.kind)) {
        out.push_back({WireType::Event, 0, {{"tick", record.tick}, {"kind", record.kind}, {"data", p}}});
    }
    return out;
}

} // namespace physcorr

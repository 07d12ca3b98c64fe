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

#include "physcorr/recall.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "physcorr/scenario.hpp"

namespace physcorr {

using nlohmann::json;

namespace {

RecallState stateFromJson(const json& j, const std::string& field)
{
    if (!j.is_object()) {
        throw ScenarioInvalid(field, "expected an object");
    }
    RecallState s;
    if (j.contains("held")) {
        s.prompt.held = heldFromJson(j.at("held"), field + ".held");
    }
    if (j.contains("ee")) {
        s.ee_pose = poseFromJson(j.at("ee"), field + ".ee");
    }
    if (j.contains("human_approach") && !j.at("human_approach").is_null()) {
        s.prompt.human_approach = j.at("human_approach").get<std::string>();
    }
    if (j.contains("planned") && !j.at("planned").is_null()) {
        s.prompt.planned = actionFromJson(j.at("planned"), field + ".planned");
    }
    return s;
}

void checkIds(const Scene& scene, const RecallState& s, const std::string& field)
{
    for (const auto& id : {s.prompt.held.robot, s.prompt.held.human, s.prompt.human_approach}) {
        if (id && scene.find(*id) == nullptr) {
            throw ScenarioInvalid(field, "unknown object id '" + *id + "'");
        }
    }
}

const char* kDefaultRecall = R"({
  "scene": [
    {"id": "gallon", "label": "gallon of water", "category": "A", "position": [0.55, -0.30, 0.10]},
    {"id": "pot", "label": "cooking pot", "category": "A", "position": [0.50, 0.00, 0.10]},
    {"id": "beans", "label": "beans", "category": "C", "position": [0.70, 0.35, 0.12], "atop": "counter"},
    {"id": "counter", "label": "on the counter", "category": "B", "position": [0.70, 0.30, 0.10]},
    {"id": "stove", "label": "on the stove", "category": "B", "position": [0.30, 0.40, 0.10]}
  ],
  "target": {"held": {"robot": "pot"}, "ee": {"position": [0.50, 0.00, 0.27]}},
  "corrected": {"verb": "place", "object": "stove"},
  "fillers": [
    {"held": {}, "ee": {"position": [0.30, 0.40, 0.25]}, "human_approach": "beans"},
    {"held": {"robot": "gallon"}, "ee": {"position": [0.55, -0.30, 0.12]}},
    {"held": {"robot": "gallon"}, "ee": {"position": [0.30, 0.40, 0.25]}, "human_approach": "stove"},
    {"held": {}, "ee": {"position": [0.70, 0.30, 0.25]}, "human_approach": "counter"},
    {"held": {"human": "pot"}, "ee": {"position": [0.50, 0.00, 0.25]}, "human_approach": "stove"}
  ]
})";

} // namespace

RecallScenario parseRecallScenario(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw ScenarioInvalid("recall", "expected an object");
    }
    for (const char* key : {"scene", "target", "corrected"}) {
        if (!doc.contains(key)) {
            throw ScenarioInvalid(key, "required");
        }
    }
    RecallScenario r;
    r.scene = sceneFromJson(doc.at("scene"), "scene");
    r.target = stateFromJson(doc.at("target"), "target");
    checkIds(r.scene, r.target, "target");
    r.corrected = actionFromJson(doc.at("corrected"), "corrected");
    if (r.scene.find(r.corrected.object_id) == nullptr) {
        throw ScenarioInvalid("corrected.object", "unknown object id '" + r.corrected.object_id + "'");
    }
    if (doc.contains("fillers")) {
        const json& list = doc.at("fillers");
        if (!list.is_array()) {
            throw ScenarioInvalid("fillers", "expected a list");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string field = "fillers[" + std::to_string(i) + "]";
            r.fillers.push_back(stateFromJson(list[i], field));
            checkIds(r.scene, r.fillers.back(), field);
        }
    }
    const ActionDictionary dict = buildDictionary(r.scene, r.target.prompt.held, r.target.ee_pose, r.dictionary);
    if (!dict.contains(r.corrected)) {
        throw ScenarioInvalid("corrected", "not an available action in the target state");
    }
    return r;
}

RecallScenario loadRecallScenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ScenarioInvalid("recall", "cannot open '" + path.string() + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ScenarioInvalid("recall", std::string("malformed file: ") + e.what());
    }
    return parseRecallScenario(doc);
}

RecallScenario defaultRecallScenario()
{
    return parseRecallScenario(json::parse(kDefaultRecall));
}

nlohmann::json recallPolicy(int max_gap)
{
    const json target = json::array({"The robot is currently holding \"cooking pot\"",
                                     "The human is approaching \"Nothing\""});
    json recall{{"state", target}};
    if (max_gap >= 0) {
        recall["max_gap"] = max_gap;
    }
    return {{"fallback", "# Move ; on the counter &\nNothing urgent to do."},
            {"rules", json::array({
                          {{"match", target},
                           {"recall", recall},
                           {"respond", "# {verb} ; {label} &\nThe human corrected this before."}},
                          {{"match", target}, {"respond", "# Place ; on the counter &\nKeeps the pot within reach."}},
                      })}};
}

void writeRecallCsv(std::ostream& out, std::span<const RecallRow> rows, bool with_reference)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::fixed << std::setprecision(2);
    out << "n,success_rate,successes,trials,errors" << (with_reference ? ",reference" : "") << '\n';
    for (const RecallRow& r : rows) {
        out << r.n << ',' << r.rate() << ',' << r.successes << ',' << r.trials << ',' << r.errors;
        if (with_reference) {
            out << ',';
            if (const auto ref = liveReferenceRate(r.n)) {
                out << *ref;
            }
        }
        out << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

std::optional<double> liveReferenceRate(int n)
{
    switch (n) {
    case 0: return 1.0;
    case 5: return 0.85;
    case 10: return 0.85;
    case 15: return 0.80;
    default: return std::nullopt;
    }
}

} // namespace physcorr

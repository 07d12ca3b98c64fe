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

#include "physcorr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>

namespace physcorr {

using nlohmann::json;

nlohmann::json toJson(const Eigen::Vector3d& v)
{
    return json::array({v.x(), v.y(), v.z()});
}

nlohmann::json toJson(const Eigen::Quaterniond& q)
{
    return json::array({q.w(), q.x(), q.y(), q.z()});
}

nlohmann::json toJson(const Pose& p)
{
    return {{"position", toJson(p.position())}, {"orientation", toJson(p.orientation())}};
}

nlohmann::json toJson(const SemanticAction& a)
{
    return {{"verb", std::string(verbName(a.verb))}, {"object", a.object_id}};
}

namespace {

double number(const json& j, const std::string& field)
{
    if (!j.is_number()) {
        throw ScenarioInvalid(field, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ScenarioInvalid(field, "must be finite");
    }
    return v;
}

std::string text(const json& j, const std::string& field)
{
    if (!j.is_string()) {
        throw ScenarioInvalid(field, "expected a string");
    }
    return j.get<std::string>();
}

const json& object(const json& j, const std::string& field)
{
    if (!j.is_object()) {
        throw ScenarioInvalid(field, "expected an object");
    }
    return j;
}

const json& array(const json& j, const std::string& field)
{
    if (!j.is_array()) {
        throw ScenarioInvalid(field, "expected a list");
    }
    return j;
}

void allowKeys(const json& j, const std::string& field, std::initializer_list<const char*> keys)
{
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            throw ScenarioInvalid(field.empty() ? key : field + "." + key, "unknown key");
        }
    }
}

template <typename T>
void readNumber(const json& j, const char* key, const std::string& field, T& out)
{
    if (!j.contains(key)) {
        return;
    }
    const double v = number(j.at(key), field + "." + key);
    if constexpr (std::is_integral_v<T>) {
        if (v < 0 || std::floor(v) != v) {
            throw ScenarioInvalid(field + "." + key, "expected a non-negative integer");
        }
    }
    out = static_cast<T>(v);
}

void readRange(const json& j, const char* key, const std::string& field, NoiseRange& out)
{
    if (!j.contains(key)) {
        return;
    }
    const json& r = array(j.at(key), field + "." + key);
    if (r.size() != 2) {
        throw ScenarioInvalid(field + "." + key, "expected [low, high]");
    }
    out.low = number(r[0], field + "." + key + "[0]");
    out.high = number(r[1], field + "." + key + "[1]");
}

std::optional<std::string> optionalId(const json& j, const char* key, const std::string& field)
{
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return text(j.at(key), field + "." + key);
}

Trigger triggerFromJson(const json& j, const std::string& field)
{
    Trigger t;
    readNumber(j, "start", field, t.start);
    if (j.contains("after")) {
        t.after_action = actionFromJson(j.at("after"), field + ".after");
    }
    return t;
}

DynamicsRanges rangesFromJson(const json& j, const std::string& field, DynamicsRanges r)
{
    object(j, field);
    allowKeys(j, field, {"cart_low", "cart_high", "rot_low", "rot_high"});
    readNumber(j, "cart_low", field, r.cart_low);
    readNumber(j, "cart_high", field, r.cart_high);
    readNumber(j, "rot_low", field, r.rot_low);
    readNumber(j, "rot_high", field, r.rot_high);
    return r;
}

void readController(const json& j, ControllerConfig& c)
{
    const std::string f = "controller";
    object(j, f);
    allowKeys(j, f,
              {"d_lin_high", "d_lin_low", "d_rot_high", "d_rot_low", "window", "error_scale_lin", "error_scale_rot",
               "ascent_lin", "ascent_rot", "force_cap", "torque_cap", "dt"});
    readNumber(j, "d_lin_high", f, c.d_lin_high);
    readNumber(j, "d_lin_low", f, c.d_lin_low);
    readNumber(j, "d_rot_high", f, c.d_rot_high);
    readNumber(j, "d_rot_low", f, c.d_rot_low);
    readNumber(j, "window", f, c.window);
    readNumber(j, "error_scale_lin", f, c.error_scale_lin);
    readNumber(j, "error_scale_rot", f, c.error_scale_rot);
    readNumber(j, "ascent_lin", f, c.ascent_lin);
    readNumber(j, "ascent_rot", f, c.ascent_rot);
    readNumber(j, "force_cap", f, c.force_cap);
    readNumber(j, "torque_cap", f, c.torque_cap);
    readNumber(j, "dt", f, c.dt);
}

void readEstimator(const json& j, EstimatorConfig& e)
{
    const std::string f = "estimator";
    object(j, f);
    allowKeys(j, f, {"particles", "noise_lin", "noise_rot", "noise_goal_rot", "rotation_weight", "likelihood_gain", "ranges", "rate",
                     "parallel"});
    readNumber(j, "particles", f, e.particles);
    readRange(j, "noise_lin", f, e.noise_lin);
    readRange(j, "noise_rot", f, e.noise_rot);
    readRange(j, "noise_goal_rot", f, e.noise_goal_rot);
    readNumber(j, "rotation_weight", f, e.rotation_weight);
    readNumber(j, "likelihood_gain", f, e.likelihood_gain);
    if (j.contains("ranges")) {
        e.ranges = rangesFromJson(j.at("ranges"), f + ".ranges", e.ranges);
    }
    readNumber(j, "rate", f, e.rate);
    if (j.contains("parallel")) {
        if (!j.at("parallel").is_boolean()) {
            throw ScenarioInvalid(f + ".parallel", "expected true or false");
        }
        e.parallel = j.at("parallel").get<bool>();
    }
}

void readDictionary(const json& j, DictionaryConfig& d)
{
    const std::string f = "dictionary";
    object(j, f);
    allowKeys(j, f, {"grasp_offset", "hover_offset", "tilt_angle_deg", "upright", "match_threshold",
                     "match_rotation_weight", "max_linear_speed", "max_angular_speed"});
    readNumber(j, "grasp_offset", f, d.grasp_offset);
    readNumber(j, "hover_offset", f, d.hover_offset);
    readNumber(j, "tilt_angle_deg", f, d.tilt_angle_deg);
    if (j.contains("upright")) {
        d.upright = quatFromJson(j.at("upright"), f + ".upright");
    }
    readNumber(j, "match_threshold", f, d.match_threshold);
    readNumber(j, "match_rotation_weight", f, d.match_rotation_weight);
    readNumber(j, "max_linear_speed", f, d.cap.linear);
    readNumber(j, "max_angular_speed", f, d.cap.angular);
}

void readApproach(const json& j, ApproachConfig& a)
{
    const std::string f = "approach";
    object(j, f);
    allowKeys(j, f, {"distance_sigma", "mass_threshold", "min_speed", "hold_time", "stay"});
    readNumber(j, "distance_sigma", f, a.distance_sigma);
    readNumber(j, "mass_threshold", f, a.mass_threshold);
    readNumber(j, "min_speed", f, a.min_speed);
    readNumber(j, "hold_time", f, a.hold_time);
    readNumber(j, "stay", f, a.stay);
}

void readRun(const json& j, RunConfig& r)
{
    const std::string f = "run";
    object(j, f);
    allowKeys(j, f, {"control_rate", "estimator_divider", "arrival_position", "arrival_rotation", "arrival_speed",
                     "c_low", "c_high", "cocarry_floor", "max_linear_speed", "max_angular_speed", "mass", "inertia",
                     "state_sample_rate", "particle_sample_rate", "logged_particles"});
    readNumber(j, "control_rate", f, r.control_rate);
    readNumber(j, "estimator_divider", f, r.estimator_divider);
    readNumber(j, "arrival_position", f, r.arrival_position);
    readNumber(j, "arrival_rotation", f, r.arrival_rotation);
    readNumber(j, "arrival_speed", f, r.arrival_speed);
    readNumber(j, "c_low", f, r.c_low);
    readNumber(j, "c_high", f, r.c_high);
    readNumber(j, "cocarry_floor", f, r.cocarry_floor);
    readNumber(j, "max_linear_speed", f, r.max_linear_speed);
    readNumber(j, "max_angular_speed", f, r.max_angular_speed);
    readNumber(j, "mass", f, r.mass);
    readNumber(j, "inertia", f, r.inertia);
    readNumber(j, "state_sample_rate", f, r.state_sample_rate);
    readNumber(j, "particle_sample_rate", f, r.particle_sample_rate);
    readNumber(j, "logged_particles", f, r.logged_particles);
}

void readHuman(const json& j, HumanModel& h, Eigen::Vector3d& hand_start)
{
    const std::string f = "human";
    object(j, f);
    allowKeys(j, f, {"mode", "wrenches", "pulls", "hand", "hand_start", "events", "force_cap", "torque_cap"});
    if (j.contains("mode")) {
        const std::string mode = text(j.at("mode"), f + ".mode");
        if (mode == "scripted") {
            h.mode = HumanMode::Scripted;
        } else if (mode == "virtual") {
            h.mode = HumanMode::Virtual;
        } else if (mode == "interactive") {
            h.mode = HumanMode::Interactive;
        } else {
            throw ScenarioInvalid(f + ".mode", "expected scripted, virtual or interactive");
        }
    }
    readNumber(j, "force_cap", f, h.force_cap);
    readNumber(j, "torque_cap", f, h.torque_cap);
    if (j.contains("hand_start")) {
        hand_start = vec3FromJson(j.at("hand_start"), f + ".hand_start");
    }
    if (j.contains("wrenches")) {
        const json& list = array(j.at("wrenches"), f + ".wrenches");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string g = f + ".wrenches[" + std::to_string(i) + "]";
            const json& w = object(list[i], g);
            allowKeys(w, g, {"start", "after", "duration", "force", "torque"});
            WrenchSegment seg;
            seg.trigger = triggerFromJson(w, g);
            readNumber(w, "duration", g, seg.duration);
            if (w.contains("force")) {
                seg.wrench.force = vec3FromJson(w.at("force"), g + ".force");
            }
            if (w.contains("torque")) {
                seg.wrench.torque = vec3FromJson(w.at("torque"), g + ".torque");
            }
            h.wrenches.push_back(seg);
        }
    }
    if (j.contains("pulls")) {
        const json& list = array(j.at("pulls"), f + ".pulls");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string g = f + ".pulls[" + std::to_string(i) + "]";
            const json& p = object(list[i], g);
            allowKeys(p, g, {"start", "after", "duration", "target", "target_position", "stiffness", "max_force",
                             "damping"});
            PullSegment seg;
            seg.trigger = triggerFromJson(p, g);
            readNumber(p, "duration", g, seg.duration);
            if (p.contains("target")) {
                seg.target_action = actionFromJson(p.at("target"), g + ".target");
            }
            if (p.contains("target_position")) {
                seg.target_position = vec3FromJson(p.at("target_position"), g + ".target_position");
            }
            readNumber(p, "stiffness", g, seg.stiffness);
            readNumber(p, "max_force", g, seg.max_force);
            readNumber(p, "damping", g, seg.damping);
            h.pulls.push_back(seg);
        }
    }
    if (j.contains("hand")) {
        const json& list = array(j.at("hand"), f + ".hand");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string g = f + ".hand[" + std::to_string(i) + "]";
            const json& w = object(list[i], g);
            allowKeys(w, g, {"t", "position"});
            HandWaypoint wp;
            readNumber(w, "t", g, wp.t);
            if (!w.contains("position")) {
                throw ScenarioInvalid(g + ".position", "required");
            }
            wp.position = vec3FromJson(w.at("position"), g + ".position");
            h.hand.push_back(wp);
        }
    }
    if (j.contains("events")) {
        const json& list = array(j.at("events"), f + ".events");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string g = f + ".events[" + std::to_string(i) + "]";
            const json& e = object(list[i], g);
            allowKeys(e, g, {"t", "kind", "object", "location"});
            HumanEvent ev;
            readNumber(e, "t", g, ev.t);
            const std::string kind = e.contains("kind") ? text(e.at("kind"), g + ".kind") : "";
            if (kind == "pick") {
                ev.kind = HumanEvent::Kind::Pick;
            } else if (kind == "place") {
                ev.kind = HumanEvent::Kind::Place;
            } else {
                throw ScenarioInvalid(g + ".kind", "expected pick or place");
            }
            if (!e.contains("object")) {
                throw ScenarioInvalid(g + ".object", "required");
            }
            ev.object = text(e.at("object"), g + ".object");
            ev.location = optionalId(e, "location", g);
            h.events.push_back(ev);
        }
    }
}

void readLlm(const json& j, LlmSpec& l, const std::filesystem::path& base_dir)
{
    const std::string f = "llm";
    object(j, f);
    allowKeys(j, f, {"client", "policy", "policy_file", "endpoint", "model", "token_env", "timeout", "temperature",
                     "history", "retries", "min_query_interval"});
    if (j.contains("client")) {
        const std::string c = text(j.at("client"), f + ".client");
        if (c == "mock") {
            l.client = ClientKind::Mock;
        } else if (c == "live") {
            l.client = ClientKind::Live;
        } else {
            throw ScenarioInvalid(f + ".client", "expected mock or live");
        }
    }
    if (j.contains("policy") && j.contains("policy_file")) {
        throw ScenarioInvalid(f + ".policy", "give either policy or policy_file, not both");
    }
    if (j.contains("policy")) {
        l.policy = object(j.at("policy"), f + ".policy");
    }
    if (j.contains("policy_file")) {
        const std::filesystem::path p = base_dir / text(j.at("policy_file"), f + ".policy_file");
        std::ifstream in(p);
        if (!in) {
            throw ScenarioInvalid(f + ".policy_file", "cannot open '" + p.string() + "'");
        }
        try {
            in >> l.policy;
        } catch (const json::exception& e) {
            throw ScenarioInvalid(f + ".policy_file", e.what());
        }
    }
    if (j.contains("endpoint")) {
        l.http.endpoint = text(j.at("endpoint"), f + ".endpoint");
    }
    if (j.contains("model")) {
        l.http.model = text(j.at("model"), f + ".model");
    }
    if (j.contains("token_env")) {
        l.http.token_env = text(j.at("token_env"), f + ".token_env");
    }
    readNumber(j, "timeout", f, l.http.timeout);
    readNumber(j, "temperature", f, l.http.temperature);
    readNumber(j, "history", f, l.decide.history);
    readNumber(j, "retries", f, l.decide.retries);
    readNumber(j, "min_query_interval", f, l.min_query_interval);
}

bool overlapping(std::vector<std::pair<double, double>> spans)
{
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i) {
        if (spans[i].first < spans[i - 1].second) {
            return true;
        }
    }
    return false;
}

} // namespace

Eigen::Vector3d vec3FromJson(const nlohmann::json& j, const std::string& field)
{
    if (!j.is_array() || j.size() != 3) {
        throw ScenarioInvalid(field, "expected [x, y, z]");
    }
    return {number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]")};
}

Eigen::Quaterniond quatFromJson(const nlohmann::json& j, const std::string& field)
{
    if (!j.is_array() || j.size() != 4) {
        throw ScenarioInvalid(field, "expected [w, x, y, z]");
    }
    const Eigen::Quaterniond q(number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]"),
                               number(j[3], field + "[3]"));
    if (q.norm() < 1e-9) {
        throw ScenarioInvalid(field, "zero quaternion");
    }
    return q.normalized();
}

Pose poseFromJson(const nlohmann::json& j, const std::string& field)
{
    object(j, field);
    allowKeys(j, field, {"position", "orientation"});
    if (!j.contains("position")) {
        throw ScenarioInvalid(field + ".position", "required");
    }
    const Eigen::Quaterniond q =
        j.contains("orientation") ? quatFromJson(j.at("orientation"), field + ".orientation") : Eigen::Quaterniond::Identity();
    return Pose(vec3FromJson(j.at("position"), field + ".position"), q);
}

SemanticAction actionFromJson(const nlohmann::json& j, const std::string& field)
{
    object(j, field);
    allowKeys(j, field, {"verb", "object"});
    if (!j.contains("verb") || !j.contains("object")) {
        throw ScenarioInvalid(field, "expected {\"verb\": ..., \"object\": ...}");
    }
    const std::optional<Verb> verb = parseVerb(text(j.at("verb"), field + ".verb"));
    if (!verb) {
        throw ScenarioInvalid(field + ".verb", "unknown verb");
    }
    return {*verb, text(j.at("object"), field + ".object")};
}

Scene sceneFromJson(const nlohmann::json& j, const std::string& field)
{
    const json& list = array(j, field);
    std::vector<SceneObject> objects;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string g = field + "[" + std::to_string(i) + "]";
        const json& o = object(list[i], g);
        allowKeys(o, g, {"id", "label", "category", "position", "orientation", "atop"});
        SceneObject so;
        if (!o.contains("id")) {
            throw ScenarioInvalid(g + ".id", "required");
        }
        so.id = text(o.at("id"), g + ".id");
        so.label = o.contains("label") ? text(o.at("label"), g + ".label") : so.id;
        const std::optional<Category> cat =
            parseCategory(o.contains("category") ? text(o.at("category"), g + ".category") : std::string());
        if (!cat) {
            throw ScenarioInvalid(g + ".category", "expected A, B or C");
        }
        so.category = *cat;
        if (!o.contains("position")) {
            throw ScenarioInvalid(g + ".position", "required");
        }
        const Eigen::Quaterniond q =
            o.contains("orientation") ? quatFromJson(o.at("orientation"), g + ".orientation") : Eigen::Quaterniond::Identity();
        so.pose = Pose(vec3FromJson(o.at("position"), g + ".position"), q);
        so.atop = optionalId(o, "atop", g);
        objects.push_back(std::move(so));
    }
    Scene scene;
    scene.objects() = std::move(objects);
    try {
        scene.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioInvalid(field, e.what());
    }
    return scene;
}

HeldState heldFromJson(const nlohmann::json& j, const std::string& field)
{
    object(j, field);
    allowKeys(j, field, {"robot", "human"});
    return {optionalId(j, "robot", field), optionalId(j, "human", field)};
}

Scenario parseScenario(const nlohmann::json& doc, const std::filesystem::path& base_dir)
{
    object(doc, "scenario");
    allowKeys(doc, "", {"name", "seed", "duration", "scene", "human", "controller", "estimator", "dictionary",
                        "approach", "llm", "run"});
    Scenario s;
    if (doc.contains("name")) {
        s.name = text(doc.at("name"), "name");
    }
    readNumber(doc, "seed", "scenario", s.seed);
    readNumber(doc, "duration", "scenario", s.duration);
    if (!doc.contains("scene")) {
        throw ScenarioInvalid("scene", "required");
    }
    const json& scene = object(doc.at("scene"), "scene");
    allowKeys(scene, "scene", {"objects", "robot", "held"});
    if (!scene.contains("objects")) {
        throw ScenarioInvalid("scene.objects", "required");
    }
    s.scene = sceneFromJson(scene.at("objects"), "scene.objects");
    if (scene.contains("robot")) {
        s.robot_start = poseFromJson(scene.at("robot"), "scene.robot");
    }
    if (scene.contains("held")) {
        s.held = heldFromJson(scene.at("held"), "scene.held");
    }
    if (doc.contains("human")) {
        readHuman(doc.at("human"), s.human, s.hand_start);
    }
    if (doc.contains("controller")) {
        readController(doc.at("controller"), s.controller);
    }
    if (doc.contains("estimator")) {
        readEstimator(doc.at("estimator"), s.estimator);
    }
    if (doc.contains("dictionary")) {
        readDictionary(doc.at("dictionary"), s.dictionary);
    }
    if (doc.contains("approach")) {
        readApproach(doc.at("approach"), s.approach);
    }
    if (doc.contains("llm")) {
        readLlm(doc.at("llm"), s.llm, base_dir);
    }
    if (doc.contains("run")) {
        readRun(doc.at("run"), s.run);
    }
    s.validate();
    return s;
}

Scenario loadScenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ScenarioInvalid("scenario", "cannot open '" + path.string() + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ScenarioInvalid("scenario", std::string("malformed file: ") + e.what());
    }
    return parseScenario(doc, path.parent_path());
}

void Scenario::validate() const
{
    if (!(duration >= 0.0)) {
        throw ScenarioInvalid("duration", "must be non-negative");
    }
    if (scene.empty()) {
        throw ScenarioInvalid("scene.objects", "at least one object is required");
    }
    auto check = [](auto&& fn, const std::string& field) {
        try {
            fn();
        } catch (const std::invalid_argument& e) {
            throw ScenarioInvalid(field, e.what());
        }
    };
    check([&] { controller.validate(); }, "controller");
    check([&] { estimator.validate(); }, "estimator");
    check([&] { dictionary.ranges.validate(); }, "dictionary");
    if (std::abs(controller.dt * run.control_rate - 1.0) > 1e-9) {
        throw ScenarioInvalid("run.control_rate", "must equal 1 / controller.dt");
    }
    if (run.estimator_divider < 1) {
        throw ScenarioInvalid("run.estimator_divider", "must be at least 1");
    }
    if (std::abs(estimator.rate * run.estimator_divider - run.control_rate) > 1e-9) {
        throw ScenarioInvalid("estimator.rate", "must equal run.control_rate / run.estimator_divider");
    }
    if (!(run.c_low > 0.0 && run.c_low < run.c_high && run.c_high <= 1.0)) {
        throw ScenarioInvalid("run.c_low", "need 0 < c_low < c_high <= 1");
    }
    if (run.cocarry_floor < 0.0 || run.cocarry_floor > 1.0) {
        throw ScenarioInvalid("run.cocarry_floor", "must lie in [0, 1]");
    }
    if (run.mass <= 0.0 || run.inertia <= 0.0) {
        throw ScenarioInvalid("run.mass", "mass and inertia must be positive");
    }
    if (run.max_linear_speed <= 0.0 || run.max_angular_speed <= 0.0) {
        throw ScenarioInvalid("run.max_linear_speed", "speed caps must be positive");
    }
    if (run.state_sample_rate <= 0.0 || run.particle_sample_rate <= 0.0) {
        throw ScenarioInvalid("run.state_sample_rate", "sample rates must be positive");
    }
    if (human.force_cap < 0.0 || human.torque_cap < 0.0) {
        throw ScenarioInvalid("human.force_cap", "caps must be non-negative");
    }
    if (llm.min_query_interval < 0.0) {
        throw ScenarioInvalid("llm.min_query_interval", "must be non-negative");
    }
    if (llm.decide.retries < 0) {
        throw ScenarioInvalid("llm.retries", "must be non-negative");
    }

    auto requireId = [&](const std::optional<std::string>& id, const std::string& field) {
        if (id && scene.find(*id) == nullptr) {
            throw ScenarioInvalid(field, "unknown object id '" + *id + "'");
        }
    };
    requireId(held.robot, "scene.held.robot");
    requireId(held.human, "scene.held.human");
    if (held.robot && held.human && *held.robot == *held.human) {
        throw ScenarioInvalid("scene.held", "robot and human cannot hold the same object");
    }
    for (const auto& held_id : {held.robot, held.human}) {
        if (held_id && scene.find(*held_id)->category == Category::B) {
            throw ScenarioInvalid("scene.held", "locations cannot be held");
        }
    }

    auto checkTrigger = [&](const Trigger& t, const std::string& field) {
        if (t.start < 0.0) {
            throw ScenarioInvalid(field + ".start", "must be non-negative");
        }
        if (t.after_action) {
            requireId(t.after_action->object_id, field + ".after.object");
        }
    };
    std::vector<std::pair<double, double>> wrench_spans;
    for (std::size_t i = 0; i < human.wrenches.size(); ++i) {
        const WrenchSegment& w = human.wrenches[i];
        const std::string g = "human.wrenches[" + std::to_string(i) + "]";
        checkTrigger(w.trigger, g);
        if (w.duration < 0.0) {
            throw ScenarioInvalid(g + ".duration", "must be non-negative");
        }
        if (!w.trigger.after_action) {
            wrench_spans.emplace_back(w.trigger.start, w.trigger.start + w.duration);
        }
    }
    if (overlapping(wrench_spans)) {
        throw ScenarioInvalid("human.wrenches", "segments overlap");
    }
    std::vector<std::pair<double, double>> pull_spans;
    for (std::size_t i = 0; i < human.pulls.size(); ++i) {
        const PullSegment& p = human.pulls[i];
        const std::string g = "human.pulls[" + std::to_string(i) + "]";
        checkTrigger(p.trigger, g);
        if (p.duration < 0.0) {
            throw ScenarioInvalid(g + ".duration", "must be non-negative");
        }
        if (p.target_action.has_value() == p.target_position.has_value()) {
            throw ScenarioInvalid(g + ".target", "give exactly one of target or target_position");
        }
        if (p.target_action) {
            requireId(p.target_action->object_id, g + ".target.object");
        }
        if (p.stiffness < 0.0 || p.max_force < 0.0 || p.damping < 0.0) {
            throw ScenarioInvalid(g, "stiffness, max_force and damping must be non-negative");
        }
        if (!p.trigger.after_action) {
            pull_spans.emplace_back(p.trigger.start, p.trigger.start + p.duration);
        }
    }
    if (overlapping(pull_spans)) {
        throw ScenarioInvalid("human.pulls", "segments overlap");
    }
    for (std::size_t i = 1; i < human.hand.size(); ++i) {
        if (human.hand[i].t <= human.hand[i - 1].t) {
            throw ScenarioInvalid("human.hand[" + std::to_string(i) + "].t", "waypoint times must increase");
        }
    }
    for (std::size_t i = 0; i < human.events.size(); ++i) {
        const HumanEvent& e = human.events[i];
        const std::string g = "human.events[" + std::to_string(i) + "]";
        if (i > 0 && e.t < human.events[i - 1].t) {
            throw ScenarioInvalid(g + ".t", "event times must not decrease");
        }
        requireId(e.object, g + ".object");
        requireId(e.location, g + ".location");
        if (e.kind == HumanEvent::Kind::Place && !e.location) {
            throw ScenarioInvalid(g + ".location", "required for place");
        }
    }
    if (llm.client == ClientKind::Mock) {
        try {
            (void)MockClient::fromJson(llm.policy);
        } catch (const std::exception& e) {
            throw ScenarioInvalid("llm.policy", e.what());
        }
    }
}

std::unique_ptr<ModelClient> makeClient(const LlmSpec& spec)
{
    if (spec.client == ClientKind::Live) {
        return std::make_unique<HttpChatClient>(spec.http);
    }
    return std::make_unique<MockClient>(MockClient::fromJson(spec.policy));
}

} // namespace physcorr

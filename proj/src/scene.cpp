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

#include "physcorr/scene.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numbers>
#include <set>

namespace physcorr {

std::string_view verbName(Verb verb)
{
    switch (verb) {
    case Verb::Pick: return "pick";
    case Verb::Place: return "place";
    case Verb::CoCarry: return "co-carry";
    case Verb::Move: return "move";
    case Verb::Tilt: return "tilt";
    case Verb::Untilt: return "untilt";
    }
    return "move";
}

std::string verbTitle(Verb verb)
{
    std::string s(verbName(verb));
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string toLower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trimQuotes(std::string_view s)
{
    auto is_trim = [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '\'' || c == '"' || c == '`';
    };
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_trim(s[b])) {
        ++b;
    }
    while (e > b && is_trim(s[e - 1])) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

std::optional<Verb> parseVerb(std::string_view text)
{
    const std::string v = toLower(trimQuotes(text));
    if (v == "co carry" || v == "cocarry") {
        return Verb::CoCarry;
    }
    for (Verb verb : kAllVerbs) {
        if (v == verbName(verb)) {
            return verb;
        }
    }
    return std::nullopt;
}

std::string_view categoryName(Category c)
{
    switch (c) {
    case Category::A: return "A";
    case Category::B: return "B";
    case Category::C: return "C";
    }
    return "A";
}

std::optional<Category> parseCategory(std::string_view text)
{
    const std::string v = toLower(trimQuotes(text));
    if (v == "a") return Category::A;
    if (v == "b") return Category::B;
    if (v == "c") return Category::C;
    return std::nullopt;
}

Scene::Scene(std::vector<SceneObject> objects) : objects_(std::move(objects))
{
    validate();
}

void Scene::validate() const
{
    std::set<std::string> ids;
    std::set<std::string> labels;
    for (const SceneObject& o : objects_) {
        if (o.id.empty() || o.label.empty()) {
            throw std::invalid_argument("scene object needs a non-empty id and label");
        }
        if (!ids.insert(o.id).second) {
            throw std::invalid_argument("duplicate scene object id '" + o.id + "'");
        }
        if (!labels.insert(toLower(o.label)).second) {
            throw std::invalid_argument("duplicate scene object label '" + o.label + "'");
        }
    }
    for (const SceneObject& o : objects_) {
        if (o.category == Category::C) {
            if (!o.atop) {
                throw std::invalid_argument("category-C object '" + o.id + "' must sit atop an item or location");
            }
            const SceneObject* parent = find(*o.atop);
            if (parent == nullptr || parent->category == Category::C) {
                throw std::invalid_argument("category-C object '" + o.id +
                                            "' must sit atop a category-A item or a location");
            }
        } else if (o.atop && find(*o.atop) == nullptr) {
            throw std::invalid_argument("object '" + o.id + "' sits atop unknown id '" + *o.atop + "'");
        }
    }
}

const SceneObject* Scene::find(std::string_view id) const
{
    for (const SceneObject& o : objects_) {
        if (o.id == id) {
            return &o;
        }
    }
    return nullptr;
}

SceneObject* Scene::find(std::string_view id)
{
    for (SceneObject& o : objects_) {
        if (o.id == id) {
            return &o;
        }
    }
    return nullptr;
}

const SceneObject* Scene::findByLabel(std::string_view label) const
{
    const std::string needle = toLower(trimQuotes(label));
    for (const SceneObject& o : objects_) {
        if (toLower(o.label) == needle) {
            return &o;
        }
    }
    return nullptr;
}

std::string Scene::labelOf(std::string_view id) const
{
    const SceneObject* o = find(id);
    return o != nullptr ? o->label : std::string(id);
}

const DictionaryEntry* ActionDictionary::find(const SemanticAction& action) const
{
    for (const DictionaryEntry& e : entries_) {
        if (e.semantic == action) {
            return &e;
        }
    }
    return nullptr;
}

std::vector<DSAction> ActionDictionary::validActions() const
{
    std::vector<DSAction> out;
    out.reserve(entries_.size());
    for (const DictionaryEntry& e : entries_) {
        out.push_back(e.ds);
    }
    return out;
}

Pose heldObjectPose(const Pose& ee_pose, const DictionaryConfig& cfg)
{
    return Pose(ee_pose.position() - Eigen::Vector3d(0.0, 0.0, cfg.grasp_offset), ee_pose.orientation());
}

namespace {

Pose above(const SceneObject& o, double offset, const Eigen::Quaterniond& orientation)
{
    return Pose(o.pose.position() + Eigen::Vector3d(0.0, 0.0, offset), orientation);
}

std::optional<Pose> attractorFor(Verb verb, const SceneObject& o, const HeldState& held,
                                 const Pose& ee, const DictionaryConfig& cfg)
{
    const bool robot_empty = !held.robot.has_value();
    const bool human_has = held.human && *held.human == o.id;
    const bool robot_has = held.robot && *held.robot == o.id;
    switch (verb) {
    case Verb::Pick:
        if (robot_empty && o.category == Category::A && !human_has) {
            return above(o, cfg.grasp_offset, cfg.upright);
        }
        return std::nullopt;
    case Verb::Place:
        if (!robot_empty && o.category == Category::B) {
            return above(o, cfg.grasp_offset, cfg.upright);
        }
        return std::nullopt;
    case Verb::CoCarry:
        if (robot_empty && human_has && o.category == Category::A) {
            return ee;
        }
        return std::nullopt;
    case Verb::Move:
        return above(o, cfg.hover_offset, cfg.upright);
    case Verb::Tilt:
        if (robot_has) {
            const double angle = cfg.tilt_angle_deg * std::numbers::pi / 180.0;
            return Pose(ee.position(), cfg.upright * Eigen::Quaterniond(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX())));
        }
        return std::nullopt;
    case Verb::Untilt:
        if (robot_has) {
            return Pose(ee.position(), cfg.upright);
        }
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

ActionDictionary buildDictionary(const Scene& scene, const HeldState& held, const Pose& ee_pose,
                                 const DictionaryConfig& cfg)
{
    if (scene.empty()) {
        throw std::invalid_argument("buildDictionary: scene is empty");
    }
    std::vector<const SceneObject*> order;
    for (const SceneObject& o : scene.objects()) {
        order.push_back(&o);
    }
    std::sort(order.begin(), order.end(), [](const SceneObject* a, const SceneObject* b) { return a->id < b->id; });

    const Vector6d dynamics = cfg.ranges.midpoint();
    std::vector<DictionaryEntry> entries;
    for (const SceneObject* o : order) {
        for (Verb verb : kAllVerbs) {
            const std::optional<Pose> attractor = attractorFor(verb, *o, held, ee_pose, cfg);
            if (!attractor) {
                continue;
            }
            // keep the snapshot bijective: a coincident attractor stays with the first entry
            const bool duplicate = std::any_of(entries.begin(), entries.end(), [&](const DictionaryEntry& e) {
                return attractorDistance(e.ds.attractor(), *attractor, cfg.match_rotation_weight) < 1e-9;
            });
            if (duplicate) {
                continue;
            }
            entries.push_back({SemanticAction{verb, o->id}, o->label, DSAction(*attractor, dynamics, cfg.cap),
                               verb == Verb::CoCarry});
        }
    }
    return ActionDictionary(std::move(entries));
}

const DSAction& semanticToDs(const ActionDictionary& dict, const SemanticAction& action)
{
    const DictionaryEntry* e = dict.find(action);
    if (e == nullptr) {
        throw UnknownAction("action '" + std::string(verbName(action.verb)) + " " + action.object_id +
                            "' is not available in the current scene");
    }
    return e->ds;
}

double attractorDistance(const Pose& a, const Pose& b, double rotation_weight)
{
    return (a.position() - b.position()).norm() +
           rotation_weight * rotationAngle(a.orientation(), b.orientation());
}

std::optional<SemanticAction> dsToSemantic(const ActionDictionary& dict, const DSAction& estimate,
                                           double threshold, double rotation_weight)
{
    if (dict.empty()) {
        throw std::invalid_argument("dsToSemantic: dictionary is empty");
    }
    double best = std::numeric_limits<double>::infinity();
    const DictionaryEntry* best_entry = nullptr;
    for (const DictionaryEntry& e : dict.entries()) {
        const double d = attractorDistance(e.ds.attractor(), estimate.attractor(), rotation_weight);
        if (d < best) {
            best = d;
            best_entry = &e;
        }
    }
    if (best_entry == nullptr || best > threshold) {
        return std::nullopt;
    }
    return best_entry->semantic;
}

} // namespace physcorr

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

#ifndef PHYSCORR_SCENE_HPP
#define PHYSCORR_SCENE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "physcorr/ds_action.hpp"

namespace physcorr {

/// A: mountable item, B: environment location, C: unmounted food item.
enum class Category { A, B, C };

enum class Verb { Pick, Place, CoCarry, Move, Tilt, Untilt };

inline constexpr Verb kAllVerbs[] = {Verb::Pick, Verb::Place, Verb::CoCarry,
                                     Verb::Move, Verb::Tilt,  Verb::Untilt};

std::string_view verbName(Verb verb);
/// "Pick", "Co-carry", ...
std::string verbTitle(Verb verb);
/// Case-insensitive; accepts "co-carry", "cocarry" and "co carry".
std::optional<Verb> parseVerb(std::string_view text);

std::string_view categoryName(Category c);
std::optional<Category> parseCategory(std::string_view text);

struct SceneObject {
    std::string id;
    std::string label;
    Category category = Category::A;
    Pose pose;
    std::optional<std::string> atop;
};

struct HeldState {
    std::optional<std::string> robot;
    std::optional<std::string> human;

    bool operator==(const HeldState&) const = default;
};

struct SemanticAction {
    Verb verb = Verb::Move;
    std::string object_id;

    bool operator==(const SemanticAction&) const = default;
};

class Scene {
public:
    Scene() = default;
    explicit Scene(std::vector<SceneObject> objects);

    /// Throws std::invalid_argument on duplicate ids or labels, or a
    /// category-C item without a valid `atop`.
    void validate() const;

    const std::vector<SceneObject>& objects() const { return objects_; }
    std::vector<SceneObject>& objects() { return objects_; }
    bool empty() const { return objects_.empty(); }

    const SceneObject* find(std::string_view id) const;
    SceneObject* find(std::string_view id);
    /// Case-insensitive label lookup; surrounding quotes and spaces ignored.
    const SceneObject* findByLabel(std::string_view label) const;
    std::string labelOf(std::string_view id) const;

private:
    std::vector<SceneObject> objects_;
};

struct DictionaryConfig {
    double grasp_offset = 0.02; // m above the object for pick/place
    double hover_offset = 0.15; // m above the object for move
    double tilt_angle_deg = 20.0;
    Eigen::Quaterniond upright = Eigen::Quaterniond::Identity();
    DynamicsRanges ranges;
    SpeedCap cap;
    double match_threshold = 0.12;   // m-equivalent
    double match_rotation_weight = 0.5; // m per rad
};

struct DictionaryEntry {
    SemanticAction semantic;
    std::string label;
    DSAction ds;
    bool compliant = false;
};

class UnknownAction : public std::runtime_error {
public:
    explicit UnknownAction(const std::string& what) : std::runtime_error(what) {}
};

/// Bidirectional semantic <-> DS lookup for one scene snapshot, ordered by
/// object id then verb.
class ActionDictionary {
public:
    ActionDictionary() = default;
    explicit ActionDictionary(std::vector<DictionaryEntry> entries) : entries_(std::move(entries)) {}

    const std::vector<DictionaryEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    const DictionaryEntry* find(const SemanticAction& action) const;
    bool contains(const SemanticAction& action) const { return find(action) != nullptr; }
    std::vector<DSAction> validActions() const;

private:
    std::vector<DictionaryEntry> entries_;
};

/// Generates every valid verb/object pair with its DS action. The end-effector
/// pose anchors tilt, untilt and co-carry entries.
ActionDictionary buildDictionary(const Scene& scene, const HeldState& held, const Pose& ee_pose,
                                 const DictionaryConfig& cfg = {});

/// Exact lookup; throws UnknownAction when the pair is not in the snapshot.
const DSAction& semanticToDs(const ActionDictionary& dict, const SemanticAction& action);

/// Position distance plus weighted rotation angle between two attractors.
double attractorDistance(const Pose& a, const Pose& b, double rotation_weight);

/// Nearest entry to an estimated DS action; nullopt when nothing is within
/// `threshold`. Ties go to the lowest entry index.
std::optional<SemanticAction> dsToSemantic(const ActionDictionary& dict, const DSAction& estimate,
                                           double threshold, double rotation_weight = 0.5);

/// Where a held object sits relative to the end effector.
Pose heldObjectPose(const Pose& ee_pose, const DictionaryConfig& cfg);

std::string toLower(std::string_view s);
std::string trimQuotes(std::string_view s);

} // namespace physcorr

#endif // PHYSCORR_SCENE_HPP

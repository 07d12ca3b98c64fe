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

#ifndef PHYSCORR_SCENARIO_HPP
#define PHYSCORR_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "physcorr/approach.hpp"
#include "physcorr/controller.hpp"
#include "physcorr/intent_estimator.hpp"
#include "physcorr/model_client.hpp"
#include "physcorr/orchestrator.hpp"
#include "physcorr/scene.hpp"

namespace physcorr {

class ScenarioInvalid : public std::runtime_error {
public:
    ScenarioInvalid(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field)
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Start condition of a human segment: a fixed time, or a delay after an
/// action is first commanded by the model.
struct Trigger {
    double start = 0.0; // s; absolute, or delay after `after_action`
    std::optional<SemanticAction> after_action;
};

struct WrenchSegment {
    Trigger trigger;
    double duration = 0.0;
    Wrench wrench;
};

/// Proportional pull toward a target: force = clamp(k (p_target - p), F_max) - b v.
struct PullSegment {
    Trigger trigger;
    double duration = 0.0;
    std::optional<SemanticAction> target_action; // resolved against the dictionary at onset
    std::optional<Eigen::Vector3d> target_position;
    double stiffness = 50.0; // N/m
    double max_force = 20.0; // N
    double damping = 0.0;    // N s/m
};

struct HandWaypoint {
    double t = 0.0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

struct HumanEvent {
    enum class Kind { Pick, Place };
    double t = 0.0;
    Kind kind = Kind::Pick;
    std::string object;
    std::optional<std::string> location; // place target (category B id)
};

enum class HumanMode { Scripted, Virtual, Interactive };

struct HumanModel {
    HumanMode mode = HumanMode::Scripted;
    std::vector<WrenchSegment> wrenches;
    std::vector<PullSegment> pulls;
    std::vector<HandWaypoint> hand; // piecewise-linear hand track
    std::vector<HumanEvent> events;
    double force_cap = 30.0;  // N, clamp on any human force
    double torque_cap = 5.0;  // N*m
};

enum class ClientKind { Mock, Live };

struct LlmSpec {
    ClientKind client = ClientKind::Mock;
    nlohmann::json policy = nlohmann::json::object(); // mock policy (inline or loaded from policy_file)
    HttpClientConfig http;
    DecideConfig decide;
    double min_query_interval = 1.0; // s between consecutive queries
};

struct RunConfig {
    double control_rate = 200.0;    // Hz
    int estimator_divider = 10;     // control ticks per estimator tick
    double arrival_position = 0.02; // m
    double arrival_rotation = 0.05; // rad
    double arrival_speed = 0.02;    // m/s
    double c_low = 0.5;
    double c_high = 0.9;
    double cocarry_floor = 0.2;
    double max_linear_speed = 2.0;  // m/s
    double max_angular_speed = 4.0; // rad/s
    double mass = 1.0;              // kg
    double inertia = 0.1;           // kg m^2
    double state_sample_rate = 40.0;    // Hz
    double particle_sample_rate = 10.0; // Hz
    std::size_t logged_particles = 100;
};

struct Scenario {
    std::string name = "scenario";
    std::uint64_t seed = 0;
    double duration = 10.0; // s
    Scene scene;
    Pose robot_start;
    HeldState held;
    Eigen::Vector3d hand_start = Eigen::Vector3d(2.0, 0.0, 1.0);
    HumanModel human;
    ControllerConfig controller;
    EstimatorConfig estimator;
    DictionaryConfig dictionary;
    ApproachConfig approach;
    LlmSpec llm;
    RunConfig run;

    /// Throws ScenarioInvalid naming the offending field.
    void validate() const;
};

Scenario parseScenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Scenario loadScenario(const std::filesystem::path& path);

/// Builds the model client named by the scenario.
std::unique_ptr<ModelClient> makeClient(const LlmSpec& spec);

// JSON helpers shared with the recall loader and the wire protocol.
nlohmann::json toJson(const Eigen::Vector3d& v);
nlohmann::json toJson(const Eigen::Quaterniond& q); // [w, x, y, z]
nlohmann::json toJson(const Pose& p);               // {"position": [...], "orientation": [...]}
Eigen::Vector3d vec3FromJson(const nlohmann::json& j, const std::string& field);
Eigen::Quaterniond quatFromJson(const nlohmann::json& j, const std::string& field);
Pose poseFromJson(const nlohmann::json& j, const std::string& field);
Scene sceneFromJson(const nlohmann::json& j, const std::string& field);
HeldState heldFromJson(const nlohmann::json& j, const std::string& field);
SemanticAction actionFromJson(const nlohmann::json& j, const std::string& field);
nlohmann::json toJson(const SemanticAction& a);

} // namespace physcorr

#endif // PHYSCORR_SCENARIO_HPP

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

#ifndef PHYSCORR_SIMULATION_HPP
#define PHYSCORR_SIMULATION_HPP

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "physcorr/approach.hpp"
#include "physcorr/controller.hpp"
#include "physcorr/correction.hpp"
#include "physcorr/event_log.hpp"
#include "physcorr/intent_estimator.hpp"
#include "physcorr/orchestrator.hpp"
#include "physcorr/plant.hpp"
#include "physcorr/scenario.hpp"
#include "physcorr/transcript.hpp"

namespace physcorr {

/// Fixed-step world: 200 Hz control, estimator every `estimator_divider`
/// control ticks. Not thread-safe; a session serializes access.
class Simulation {
public:
    /// Uses the scenario's client when `client` is null.
    explicit Simulation(Scenario scenario, std::unique_ptr<ModelClient> client = nullptr);
    ~Simulation();

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// One control tick (preceded by an estimator tick when due).
    void step();
    void run();
    bool finished() const { return tick_ >= total_ticks_; }
    /// Restarts from the scenario seed with a fresh log.
    void reset();

    /// Interactive human input, held until replaced; clamped to the human caps.
    void setExternalWrench(const Wrench& wrench);

    std::uint64_t tick() const { return tick_; }
    std::uint64_t totalTicks() const { return total_ticks_; }
    double time() const { return static_cast<double>(tick_) * dt_; }
    double dt() const { return dt_; }

    const Scenario& scenario() const { return scenario_; }
    const PlantState& plant() const { return plant_; }
    const ConfidenceState& confidence() const { return conf_; }
    const BeliefState& belief() const { return *belief_; }
    const DSAction& estimate() const { return estimate_; }
    double resampleRate() const { return resample_rate_; }
    const Scene& scene() const { return scene_; }
    const HeldState& held() const { return held_; }
    const ActionDictionary& dictionary() const { return dict_; }
    const Transcript& transcript() const { return transcript_; }
    const std::optional<SemanticAction>& currentAction() const { return current_action_; }
    bool inFlight() const { return pending_.has_value(); }
    bool correctionOpen() const { return detector_.open(); }
    const Wrench& humanWrench() const { return last_human_; }
    const Wrench& commandWrench() const { return last_command_; }

    EventLog& log() { return log_; }
    const EventLog& log() const { return log_; }

private:
    struct PendingDecision {
        std::uint64_t ready_tick = 0;
        std::optional<DecisionOutcome> outcome; // set for synchronous clients
        std::future<DecisionOutcome> future;    // set for live clients
    };

    void initialize();
    void estimatorTick();
    void controlTick();

    void deliver(DecisionOutcome outcome);
    void query();
    void completeCurrent();
    bool arrived() const;

    Wrench computeHumanWrench(double t);
    void applyHumanEvents(double t);
    Eigen::Vector3d handPosition(double t) const;
    Eigen::Vector3d handVelocity(double t) const;

    void moveObject(const std::string& id, const Pose& pose);
    void syncHeldObjects();
    std::optional<double> triggerTime(const Trigger& trigger) const;

    void emit(const char* kind, nlohmann::json payload);
    nlohmann::json statePayload() const;
    nlohmann::json particlePayload() const;

    Scenario scenario_;
    std::unique_ptr<ModelClient> client_;
    double dt_ = 0.005;
    std::uint64_t total_ticks_ = 0;
    std::uint64_t tick_ = 0;
    std::uint64_t state_every_ = 1;
    std::uint64_t particles_every_ = 1;

    PlantState plant_;
    ConfidenceState conf_;
    std::unique_ptr<BeliefState> belief_;
    DSAction estimate_;
    double resample_rate_ = 0.0;
    Scene scene_;
    HeldState held_;
    ActionDictionary dict_;
    ApproachTracker approach_;
    CorrectionDetector detector_;
    Transcript transcript_;
    std::string system_prompt_;

    std::optional<SemanticAction> current_action_;
    bool completed_ = true;
    bool cocarry_ = false;
    bool started_ = false;
    std::optional<SemanticAction> planned_;
    std::optional<SemanticAction> last_action_;
    ExecutionResult last_result_;
    std::optional<SemanticAction> last_correction_;
    std::optional<std::string> human_approach_;
    std::optional<PendingDecision> pending_;
    double next_query_time_ = 0.0;
    std::map<std::string, double> command_times_; // "verb object" -> first command time
    std::map<std::size_t, Eigen::Vector3d> pull_targets_;
    std::size_t next_human_event_ = 0;

    Wrench external_;
    Wrench last_human_;
    Wrench last_command_;
    bool contact_since_estimate_ = false;

    EventLog log_;
};

/// Runs a scenario to completion and returns its log.
EventLog runScenario(const Scenario& scenario);

} // namespace physcorr

#endif // PHYSCORR_SIMULATION_HPP

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

#include "physcorr/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace physcorr {

using nlohmann::json;

namespace {

std::string actionKey(const SemanticAction& a)
{
    return std::string(verbName(a.verb)) + " " + a.object_id;
}

json wrenchJson(const Wrench& w)
{
    return {{"force", toJson(w.force)}, {"torque", toJson(w.torque)}};
}

json optionalId(const std::optional<std::string>& id)
{
    return id ? json(*id) : json(nullptr);
}

json optionalAction(const std::optional<SemanticAction>& a)
{
    return a ? toJson(*a) : json(nullptr);
}

Wrench clampWrench(const Wrench& w, double force_cap, double torque_cap)
{
    return {clampNorm(w.force, force_cap), clampNorm(w.torque, torque_cap)};
}

std::uint64_t ticksPer(double control_rate, double rate)
{
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(control_rate / rate)));
}

} // namespace

Simulation::Simulation(Scenario scenario, std::unique_ptr<ModelClient> client)
    : scenario_(std::move(scenario)), client_(std::move(client)), conf_(scenario_.controller),
      detector_({scenario_.run.c_low, scenario_.run.c_high, scenario_.dictionary.match_threshold,
                 scenario_.dictionary.match_rotation_weight})
{
    scenario_.validate();
    if (!client_) {
        client_ = makeClient(scenario_.llm);
    }
    initialize();
}

Simulation::~Simulation()
{
    if (pending_ && pending_->future.valid()) {
        pending_->future.wait();
    }
}

void Simulation::reset()
{
    if (pending_ && pending_->future.valid()) {
        pending_->future.wait();
    }
    client_ = client_->clone();
    initialize();
}

void Simulation::initialize()
{
    const Scenario& s = scenario_;
    dt_ = s.controller.dt;
    total_ticks_ = static_cast<std::uint64_t>(std::llround(s.duration / dt_));
    tick_ = 0;
    state_every_ = ticksPer(s.run.control_rate, s.run.state_sample_rate);
    particles_every_ = ticksPer(s.run.control_rate, s.run.particle_sample_rate);

    plant_ = PlantState{s.robot_start, Twist::zero(), s.run.mass, s.run.inertia};
    conf_ = ConfidenceState(s.controller);
    scene_ = s.scene;
    held_ = s.held;
    estimate_ = DSAction(s.robot_start, s.dictionary.ranges.midpoint(), s.dictionary.cap);
    belief_ = std::make_unique<BeliefState>(estimate_, s.estimator, s.seed);
    resample_rate_ = 0.0;
    approach_ = ApproachTracker(s.approach);
    detector_.reset();
    transcript_ = Transcript();
    system_prompt_ = buildSystemPrompt(scene_);

    current_action_.reset();
    completed_ = true;
    cocarry_ = false;
    started_ = false;
    planned_.reset();
    last_action_.reset();
    last_result_ = ExecutionResult();
    last_correction_.reset();
    human_approach_.reset();
    pending_.reset();
    next_query_time_ = 0.0;
    command_times_.clear();
    pull_targets_.clear();
    next_human_event_ = 0;
    external_ = Wrench::zero();
    last_human_ = Wrench::zero();
    last_command_ = Wrench::zero();
    contact_since_estimate_ = false;

    syncHeldObjects();
    dict_ = buildDictionary(scene_, held_, plant_.pose, s.dictionary);

    log_.clear();
    json objects = json::array();
    for (const SceneObject& o : scene_.objects()) {
        objects.push_back({{"id", o.id},
                           {"label", o.label},
                           {"category", std::string(categoryName(o.category))},
                           {"pose", toJson(o.pose)},
                           {"atop", optionalId(o.atop)}});
    }
    emit(event::kInit, {{"scenario", s.name},
                        {"seed", s.seed},
                        {"dt", dt_},
                        {"estimator_divider", s.run.estimator_divider},
                        {"duration", s.duration},
                        {"total_ticks", total_ticks_},
                        {"robot", toJson(plant_.pose)},
                        {"held", {{"robot", optionalId(held_.robot)}, {"human", optionalId(held_.human)}}},
                        {"objects", objects},
                        {"particles", s.estimator.particles}});
}

void Simulation::emit(const char* kind, nlohmann::json payload)
{
    log_.append(EventRecord{tick_, kind, std::move(payload)});
}

void Simulation::setExternalWrench(const Wrench& wrench)
{
    external_ = clampWrench(wrench, scenario_.human.force_cap, scenario_.human.torque_cap);
}

void Simulation::run()
{
    while (!finished()) {
        step();
    }
}

void Simulation::step()
{
    if (finished()) {
        return;
    }
    if (tick_ % static_cast<std::uint64_t>(scenario_.run.estimator_divider) == 0) {
        estimatorTick();
    }
    if (tick_ % state_every_ == 0) {
        emit(event::kStateSample, statePayload());
    }
    controlTick();
    ++tick_;
}

// ---------------------------------------------------------------------------
// estimator rate

void Simulation::estimatorTick()
{
    const double t = time();
    const auto divider = static_cast<std::uint64_t>(scenario_.run.estimator_divider);
    const double dt_est = dt_ * static_cast<double>(divider);

    dict_ = buildDictionary(scene_, held_, plant_.pose, scenario_.dictionary);

    bool injected = false;
    if (pending_ && !detector_.open() && tick_ >= pending_->ready_tick) {
        if (pending_->outcome) {
            DecisionOutcome outcome = std::move(*pending_->outcome);
            pending_.reset();
            deliver(std::move(outcome));
            injected = current_action_.has_value() && !completed_;
        } else if (pending_->future.wait_for(std::chrono::seconds(0)) == std::future_status::ready) {
            DecisionOutcome outcome = pending_->future.get();
            pending_.reset();
            deliver(std::move(outcome));
            injected = current_action_.has_value() && !completed_;
        }
    }

    const double c = conf_.scalar();
    resample_rate_ = physcorr::resampleRate(c);
    std::size_t priors = 0;
    if (!injected) {
        belief_->predict(c, dt_est);
        belief_->updateWeights(plant_.pose, plant_.twist);
        estimate_ = belief_->estimate();
        priors = belief_->resample(c, dict_.validActions());
    }

    emit(event::kConfidenceSample, {{"c_lin", conf_.linear()},
                                    {"c_rot", conf_.rotational()},
                                    {"c", c},
                                    {"resample_rate", resample_rate_},
                                    {"priors", priors}});
    emit(event::kEstimateSample, {{"attractor", toJson(estimate_.attractor())},
                                  {"dynamics", std::vector<double>(estimate_.dynamics().data(),
                                                                   estimate_.dynamics().data() + 6)},
                                  {"nearest", [&]() -> json {
                                       const auto m = dsToSemantic(objectAnchored(dict_), estimate_,
                                                                   scenario_.dictionary.match_threshold,
                                                                   scenario_.dictionary.match_rotation_weight);
                                       return optionalAction(m);
                                   }()}});
    emit(event::kWrenchSample, {{"human", wrenchJson(last_human_)}, {"command", wrenchJson(last_command_)}});
    if (tick_ % particles_every_ == 0) {
        emit(event::kParticleSample, particlePayload());
    }

    const bool contact = contact_since_estimate_;
    contact_since_estimate_ = false;
    const CorrectionStep cs = detector_.update(c, contact, estimate_, objectAnchored(dict_), current_action_);
    if (cs.opened) {
        emit(event::kCorrectionStart, {{"c", c}, {"commanded", optionalAction(current_action_)}});
    }
    if (cs.closed) {
        emit(event::kCorrectionEnd, {{"c", c}, {"result", optionalAction(cs.correction)}});
    }
    if (cs.correction) {
        const SemanticAction& corrected = *cs.correction;
        const std::string label = scene_.labelOf(corrected.object_id);
        if (!transcript_.empty()) {
            transcript_.recordCorrection(corrected, label);
        }
        emit(event::kSemanticCorrection, {{"action", toJson(corrected)},
                                          {"label", label},
                                          {"step", transcript_.empty() ? json(nullptr) : json(transcript_.size() - 1)},
                                          {"sentence", correctionSentence(label)}});
        current_action_ = corrected;
        completed_ = false;
        last_correction_ = corrected;
        belief_->setCommandedAction(semanticToDs(dict_, corrected));
        estimate_ = belief_->estimate();
        if (pending_) {
            // a reply to a prompt the human has just overruled
            DecisionOutcome stale = pending_->outcome ? std::move(*pending_->outcome) : pending_->future.get();
            pending_.reset();
            stale.entry.result = ExecutionResult::failed("superseded by human correction");
            const TranscriptEntry& e = transcript_.append(stale.entry);
            emit(event::kLlmResult, {{"step", e.step},
                                     {"result", "failed"},
                                     {"reason", e.result.reason},
                                     {"prompt", e.user_prompt},
                                     {"proposed", optionalAction(e.proposed)},
                                     {"raw", e.raw_response}});
        }
    }

    human_approach_ = approach_.update(handPosition(t), handVelocity(t), scene_, dt_est);

    if (!pending_ && !detector_.open() && t + 1e-12 >= next_query_time_) {
        if (!started_ || (current_action_ && !completed_ && arrived())) {
            started_ = true;
            completeCurrent();
            query();
        } else if (completed_) {
            query();
        }
    }
}

bool Simulation::arrived() const
{
    const RunConfig& r = scenario_.run;
    if (conf_.scalar() < r.c_high) {
        return false;
    }
    const Pose& goal = estimate_.attractor();
    return (plant_.pose.position() - goal.position()).norm() < r.arrival_position &&
           rotationAngle(plant_.pose.orientation(), goal.orientation()) < r.arrival_rotation &&
           plant_.twist.linear.norm() < r.arrival_speed;
}

void Simulation::completeCurrent()
{
    if (!current_action_ || completed_) {
        return;
    }
    const SemanticAction a = *current_action_;
    completed_ = true;
    const double t = time();
    switch (a.verb) {
    case Verb::Pick:
        held_.robot = a.object_id;
        emit(event::kPick, {{"by", "robot"}, {"object", a.object_id}, {"t", t}});
        break;
    case Verb::CoCarry:
        held_.robot = a.object_id;
        held_.human.reset();
        cocarry_ = true;
        emit(event::kPick, {{"by", "robot"}, {"object", a.object_id}, {"cocarry", true}, {"t", t}});
        break;
    case Verb::Place:
        if (held_.robot) {
            const std::string obj = *held_.robot;
            moveObject(obj, heldObjectPose(plant_.pose, scenario_.dictionary));
            scene_.find(obj)->atop = a.object_id;
            held_.robot.reset();
            cocarry_ = false;
            emit(event::kPlace, {{"by", "robot"}, {"object", obj}, {"location", a.object_id}, {"t", t}});
        }
        break;
    case Verb::Move:
    case Verb::Tilt:
    case Verb::Untilt:
        break;
    }
    last_action_ = a;
    last_result_ = ExecutionResult::succeeded();
    if (!transcript_.empty()) {
        transcript_.setLatestResult(ExecutionResult::succeeded());
    }
    if (planned_ && *planned_ == a) {
        planned_.reset();
    }
    emit(event::kActionComplete, {{"action", toJson(a)}, {"label", scene_.labelOf(a.object_id)}, {"t", t}});
    dict_ = buildDictionary(scene_, held_, plant_.pose, scenario_.dictionary);
}

void Simulation::query()
{
    const double t = time();
    PromptState ps;
    ps.held = held_;
    ps.human_approach = human_approach_;
    ps.planned = planned_;
    ps.last_action = last_action_;
    ps.last_result = last_result_;
    ps.last_correction = last_correction_;
    last_correction_.reset();
    const PromptBundle bundle{system_prompt_, buildUserPrompt(scene_, ps, dict_)};
    emit(event::kLlmQuery, {{"step", transcript_.nextStep()}, {"prompt", bundle.user_prompt}, {"t", t}});

    const auto divider = static_cast<std::uint64_t>(scenario_.run.estimator_divider);
    PendingDecision pending;
    if (client_->deterministic()) {
        DecisionOutcome outcome = decide(*client_, bundle, transcript_.entries(), scene_, scenario_.llm.decide);
        const auto latency_ticks = static_cast<std::uint64_t>(std::ceil(outcome.latency / dt_ - 1e-9));
        const std::uint64_t earliest = tick_ + std::max<std::uint64_t>(latency_ticks, 1);
        pending.ready_tick = (earliest + divider - 1) / divider * divider;
        pending.outcome = std::move(outcome);
    } else {
        pending.ready_tick = tick_ + divider;
        std::vector<TranscriptEntry> history(transcript_.entries().begin(), transcript_.entries().end());
        pending.future = std::async(std::launch::async,
                                    [client = client_->clone(), bundle, history = std::move(history),
                                     scene = scene_, cfg = scenario_.llm.decide]() {
                                        return decide(*client, bundle, history, scene, cfg);
                                    });
    }
    pending_ = std::move(pending);
}

void Simulation::deliver(DecisionOutcome outcome)
{
    const double t = time();
    next_query_time_ = t + scenario_.llm.min_query_interval;
    TranscriptEntry entry = std::move(outcome.entry);
    if (outcome.action && !dict_.contains(*outcome.action)) {
        entry.result = ExecutionResult::failed("action not available");
    }
    const TranscriptEntry& e = transcript_.append(std::move(entry));
    if (e.result.kind == ResultKind::Failed) {
        last_action_ = outcome.action;
        last_result_ = e.result;
        emit(event::kLlmResult, {{"step", e.step},
                                 {"result", "failed"},
                                 {"reason", e.result.reason},
                                 {"proposed", optionalAction(outcome.action)},
                                 {"prompt", e.user_prompt},
                                 {"raw", e.raw_response},
                                 {"retries", outcome.retries_used}});
        return;
    }
    const SemanticAction& a = *outcome.action;
    current_action_ = a;
    completed_ = false;
    planned_ = a;
    belief_->setCommandedAction(semanticToDs(dict_, a));
    estimate_ = belief_->estimate();
    command_times_.try_emplace(actionKey(a), t);
    emit(event::kLlmAction, {{"step", e.step},
                             {"action", toJson(a)},
                             {"label", outcome.label},
                             {"prompt", e.user_prompt},
                             {"raw", e.raw_response},
                             {"reasoning", e.reasoning},
                             {"retries", outcome.retries_used},
                             {"t", t}});
}

// ---------------------------------------------------------------------------
// control rate

void Simulation::controlTick()
{
    const double t = time();
    applyHumanEvents(t);
    const Wrench human = computeHumanWrench(t);

    const Twist ref = referenceVelocity(estimate_, plant_.pose);
    conf_ = updateConfidence(conf_, plant_.twist, ref, dt_, scenario_.controller);
    double c_lin = conf_.linear();
    double c_rot = conf_.rotational();
    if (cocarry_) {
        c_lin = std::max(c_lin, scenario_.run.cocarry_floor);
        c_rot = std::max(c_rot, scenario_.run.cocarry_floor);
    }
    const Wrench command = controlWrench(c_lin, c_rot, plant_.twist, ref, scenario_.controller);

    plant_ = stepControl(plant_, command, human, dt_,
                         PlantLimits{scenario_.run.max_linear_speed, scenario_.run.max_angular_speed});
    syncHeldObjects();

    last_human_ = human;
    last_command_ = command;
    contact_since_estimate_ = contact_since_estimate_ || !human.isZero();
}

std::optional<double> Simulation::triggerTime(const Trigger& trigger) const
{
    if (!trigger.after_action) {
        return trigger.start;
    }
    const auto it = command_times_.find(actionKey(*trigger.after_action));
    if (it == command_times_.end()) {
        return std::nullopt;
    }
    return it->second + trigger.start;
}

Wrench Simulation::computeHumanWrench(double t)
{
    const HumanModel& h = scenario_.human;
    Wrench total = external_;
    for (const WrenchSegment& seg : h.wrenches) {
        const std::optional<double> start = triggerTime(seg.trigger);
        if (start && t + 1e-12 >= *start && t + 1e-12 < *start + seg.duration) {
            total = total + seg.wrench;
        }
    }
    for (std::size_t i = 0; i < h.pulls.size(); ++i) {
        const PullSegment& seg = h.pulls[i];
        const std::optional<double> start = triggerTime(seg.trigger);
        if (!start || t + 1e-12 < *start || t + 1e-12 >= *start + seg.duration) {
            continue;
        }
        auto it = pull_targets_.find(i);
        if (it == pull_targets_.end()) {
            Eigen::Vector3d target = Eigen::Vector3d::Zero();
            if (seg.target_position) {
                target = *seg.target_position;
            } else if (const DictionaryEntry* e = dict_.find(*seg.target_action)) {
                target = e->ds.attractor().position();
            } else {
                const SceneObject* o = scene_.find(seg.target_action->object_id);
                target = o->pose.position() + Eigen::Vector3d(0.0, 0.0, scenario_.dictionary.hover_offset);
            }
            it = pull_targets_.emplace(i, target).first;
        }
        const Eigen::Vector3d spring = clampNorm(seg.stiffness * (it->second - plant_.pose.position()), seg.max_force);
        total.force += spring - seg.damping * plant_.twist.linear;
    }
    return clampWrench(total, h.force_cap, h.torque_cap);
}

Eigen::Vector3d Simulation::handPosition(double t) const
{
    const std::vector<HandWaypoint>& w = scenario_.human.hand;
    if (w.empty()) {
        return scenario_.hand_start;
    }
    if (t <= w.front().t) {
        return w.front().position;
    }
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (t < w[i].t) {
            const double s = (t - w[i - 1].t) / (w[i].t - w[i - 1].t);
            return w[i - 1].position + s * (w[i].position - w[i - 1].position);
        }
    }
    return w.back().position;
}

Eigen::Vector3d Simulation::handVelocity(double t) const
{
    const std::vector<HandWaypoint>& w = scenario_.human.hand;
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (t >= w[i - 1].t && t < w[i].t) {
            return (w[i].position - w[i - 1].position) / (w[i].t - w[i - 1].t);
        }
    }
    return Eigen::Vector3d::Zero();
}

void Simulation::applyHumanEvents(double t)
{
    const std::vector<HumanEvent>& events = scenario_.human.events;
    while (next_human_event_ < events.size() && events[next_human_event_].t <= t + 1e-12) {
        const HumanEvent& ev = events[next_human_event_++];
        json payload{{"by", "human"}, {"object", ev.object}, {"t", t}};
        if (ev.kind == HumanEvent::Kind::Pick) {
            if ((held_.robot && *held_.robot == ev.object) || held_.human) {
                emit(event::kHumanEvent, {{"kind", "pick"}, {"object", ev.object}, {"ok", false}});
                continue;
            }
            held_.human = ev.object;
            scene_.find(ev.object)->atop.reset();
            emit(event::kPick, payload);
        } else {
            if (!held_.human || *held_.human != ev.object) {
                emit(event::kHumanEvent, {{"kind", "place"}, {"object", ev.object}, {"ok", false}});
                continue;
            }
            const SceneObject* loc = scene_.find(*ev.location);
            const double lift = loc->category == Category::B ? 0.0 : 0.05;
            moveObject(ev.object, Pose(loc->pose.position() + Eigen::Vector3d(0.0, 0.0, lift),
                                       scene_.find(ev.object)->pose.orientation()));
            scene_.find(ev.object)->atop = *ev.location;
            held_.human.reset();
            payload["location"] = *ev.location;
            emit(event::kPlace, payload);
        }
    }
}

void Simulation::moveObject(const std::string& id, const Pose& pose)
{
    SceneObject* o = scene_.find(id);
    const Eigen::Vector3d delta = pose.position() - o->pose.position();
    o->pose = pose;
    if (delta.isZero(0.0)) {
        return;
    }
    std::vector<std::string> children;
    for (const SceneObject& c : scene_.objects()) {
        if (c.atop && *c.atop == id && c.id != id) {
            children.push_back(c.id);
        }
    }
    for (const std::string& c : children) {
        const SceneObject* child = scene_.find(c);
        moveObject(c, Pose(child->pose.position() + delta, child->pose.orientation()));
    }
}

void Simulation::syncHeldObjects()
{
    if (held_.robot) {
        moveObject(*held_.robot, heldObjectPose(plant_.pose, scenario_.dictionary));
    }
    if (held_.human) {
        const SceneObject* o = scene_.find(*held_.human);
        moveObject(*held_.human, Pose(handPosition(time()), o->pose.orientation()));
    }
}

// ---------------------------------------------------------------------------
// records

nlohmann::json Simulation::statePayload() const
{
    json objects = json::array();
    for (const SceneObject& o : scene_.objects()) {
        objects.push_back({{"id", o.id}, {"pose", toJson(o.pose)}});
    }
    return {{"t", time()},
            {"pose", toJson(plant_.pose)},
            {"twist", {{"linear", toJson(plant_.twist.linear)}, {"angular", toJson(plant_.twist.angular)}}},
            {"held", {{"robot", optionalId(held_.robot)}, {"human", optionalId(held_.human)}}},
            {"objects", objects},
            {"c_lin", conf_.linear()},
            {"c_rot", conf_.rotational()},
            {"resample_rate", resample_rate_},
            {"action", optionalAction(current_action_)},
            {"attractor", toJson(estimate_.attractor())},
            {"in_flight_llm", pending_.has_value()},
            {"human_approach", optionalId(human_approach_)}};
}

nlohmann::json Simulation::particlePayload() const
{
    const std::span<const Particle> ps = belief_->particles();
    std::vector<std::size_t> order(ps.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min(order.size(), scenario_.run.logged_particles);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return ps[a].weight > ps[b].weight || (ps[a].weight == ps[b].weight && a < b);
                      });
    json cloud = json::array();
    for (std::size_t i = 0; i < keep; ++i) {
        const Particle& p = ps[order[i]];
        const Eigen::Vector3d& g = p.action.attractor().position();
        cloud.push_back(json::array({g.x(), g.y(), g.z(), p.weight}));
    }
    return {{"particles", cloud}};
}

EventLog runScenario(const Scenario& scenario)
{
    Simulation sim(scenario);
    sim.run();
    return std::move(sim.log());
}

} // namespace physcorr

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

// Acceptance report: one PASS/FAIL line per criterion.
//   physcorr_acceptance [--strict]
// Without --strict the exit status reflects only whether every criterion ran.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "physcorr/controller.hpp"
#include "physcorr/ds_action.hpp"
#include "physcorr/intent_estimator.hpp"
#include "physcorr/orchestrator.hpp"
#include "physcorr/plant.hpp"
#include "physcorr/prompt.hpp"
#include "physcorr/recall.hpp"
#include "physcorr/scenario.hpp"
#include "physcorr/simulation.hpp"
#include "test_support.hpp"

using namespace physcorr;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds(Clock::time_point since)
{
    return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string fmt(double v, int digits = 4)
{
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

SceneObject object(std::string id, std::string label, Category c, Eigen::Vector3d p)
{
    return {std::move(id), std::move(label), c, Pose(p, Eigen::Quaterniond::Identity()), std::nullopt};
}

Eigen::Vector3d vec(const json& j)
{
    return Eigen::Vector3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Verdict dsConvergence()
{
    const auto start = Clock::now();
    const ControllerConfig cfg;
    const WorkspaceBounds box;
    double worst_pos = 0.0;
    double worst_rot = 0.0;
    Rng rng(100);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Vector3d goal = box.sample(rng);
        const Eigen::Vector3d axis = box.sample(rng) - Eigen::Vector3d::Constant(0.5);
        const double angle = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
        const DSAction a(Pose(goal, Eigen::Quaterniond(Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitX()))),
                         DynamicsRanges{}.midpoint());
        PlantState plant;
        plant.pose = Pose(box.sample(rng), Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized())));
        ConfidenceState conf(cfg);
        for (int k = 0; k < 12000; ++k) {
            const Twist ref = referenceVelocity(a, plant.pose);
            conf = updateConfidence(conf, plant.twist, ref, cfg.dt, cfg);
            plant = stepControl(plant, controlWrench(conf, plant.twist, ref, cfg), Wrench::zero(), cfg.dt);
        }
        worst_pos = std::max(worst_pos, (plant.pose.position() - goal).norm());
        worst_rot = std::max(worst_rot, rotationAngle(plant.pose.orientation(), a.attractor().orientation()));
    }
    const double wall = seconds(start);
    return {worst_pos < 1e-3 && worst_rot < 1e-2 && wall < 30.0,
            "worst position error " + fmt(worst_pos) + " m, worst rotation error " + fmt(worst_rot) + " rad, " +
                fmt(wall, 3) + " s wall"};
}

Verdict gainSchedule()
{
    const ControllerConfig cfg;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    int cases = 0;
    bool exact = true;
    for (const double c : {0.0, 0.5, 1.0}) {
        for (int i = 0; i < 100; ++i) {
            Twist twist;
            Twist ref;
            twist.linear = Eigen::Vector3d(u(rng), u(rng), u(rng));
            twist.angular = Eigen::Vector3d(u(rng), u(rng), u(rng));
            ref.linear = Eigen::Vector3d(u(rng), u(rng), u(rng));
            ref.angular = Eigen::Vector3d(u(rng), u(rng), u(rng));
            const Wrench w = controlWrench(c, c, twist, ref, cfg);
            const Eigen::Vector3d f = -std::max(c * 85.0, 1.0) * (twist.linear - ref.linear);
            const Eigen::Vector3d t = -std::max(c * 13.0, 1.0) * (twist.angular - ref.angular);
            exact = exact && w.force == f && w.torque == t;
            ++cases;
        }
    }
    return {exact, std::to_string(cases) + " random cases at c in {0, 0.5, 1}, bitwise equal"};
}

struct EpisodeStats {
    double min_c_push = 1.0;
    bool identity = true;
    std::optional<double> estimate_hit;
    double closest = 1e9;
    std::optional<double> recovered;
    int corrections = 0;
    bool correction_to_stove = false;
    double wall = 0.0;
};

EpisodeStats correctionEpisode(const Scenario& sc)
{
    const auto start = Clock::now();
    const EventLog log = runScenario(sc);
    EpisodeStats s;
    s.wall = seconds(start);
    const PullSegment& pull = sc.human.pulls.at(0);
    const double onset = pull.trigger.start;
    const double release = pull.trigger.start + pull.duration;
    const ActionDictionary dict = buildDictionary(sc.scene, sc.held, sc.robot_start, sc.dictionary);
    const Eigen::Vector3d target = semanticToDs(dict, pull.target_action.value()).attractor().position();
    const double dt = 1.0 / sc.run.control_rate;
    for (const EventRecord& r : log.records()) {
        const double t = static_cast<double>(r.tick) * dt;
        if (r.kind == event::kConfidenceSample) {
            const double c_lin = r.payload["c_lin"].get<double>();
            const double c_rot = r.payload["c_rot"].get<double>();
            const double c = std::min(c_lin, c_rot);
            s.identity = s.identity && r.payload["resample_rate"].get<double>() == 1.0 - c;
            if (t >= onset && t <= release) {
                s.min_c_push = std::min(s.min_c_push, c);
            }
            if (t > release && t <= release + 4.0 && c >= 0.9 && !s.recovered) {
                s.recovered = t - release;
            }
        } else if (r.kind == event::kEstimateSample && t >= onset && t <= onset + 3.0) {
            const double e = (vec(r.payload["attractor"]["position"]) - target).norm();
            s.closest = std::min(s.closest, e);
            if (e <= 0.05 && !s.estimate_hit) {
                s.estimate_hit = t - onset;
            }
        } else if (r.kind == event::kSemanticCorrection) {
            ++s.corrections;
            const std::string verb = r.payload["action"]["verb"].get<std::string>();
            s.correction_to_stove =
                r.payload["action"]["object"] == "stove" && (verb == "move" || verb == "place");
        }
    }
    return s;
}

Verdict judge(const EpisodeStats& s)
{
    const bool pass = s.min_c_push < 0.5 && s.identity && s.estimate_hit && s.recovered && s.corrections == 1 &&
                      s.correction_to_stove && s.wall < 10.0;
    std::string d = "min c " + fmt(s.min_c_push, 3) + ", identity " + (s.identity ? "exact" : "broken") +
                    ", closest estimate " + fmt(s.closest, 3) + " m";
    d += s.estimate_hit ? " (hit at +" + fmt(*s.estimate_hit, 3) + " s)" : " (no hit)";
    d += s.recovered ? ", c >= 0.9 at +" + fmt(*s.recovered, 3) + " s" : ", no recovery";
    d += ", corrections " + std::to_string(s.corrections) + ", " + fmt(s.wall, 3) + " s wall";
    return {pass, d};
}

Scenario correctionScenario()
{
    return loadScenario(testing::sourceDir() / "scenarios" / "correction.json");
}

Verdict correction()
{
    return judge(correctionEpisode(correctionScenario()));
}

Verdict correctionSharpened()
{
    Scenario sc = correctionScenario();
    sc.estimator.likelihood_gain = 100.0;
    return judge(correctionEpisode(sc));
}

Verdict softmaxOracle()
{
    const SpeedCap wide{10.0, 10.0};
    auto at = [&](double x) {
        return DSAction(Pose(Eigen::Vector3d(x, 0, 0), Eigen::Quaterniond::Identity()), DynamicsRanges{}.midpoint(),
                        wide);
    };
    double worst = 0.0;
    for (const bool parallel : {false, true}) {
        EstimatorConfig cfg;
        cfg.particles = 3;
        cfg.parallel = parallel;
        BeliefState b(at(0.0), cfg, 1);
        // midpoint dynamics -0.5: observation errors 0, 1, 2 m/s for a still end effector at the origin
        b.setParticles({{at(0.0), 1.0 / 3}, {at(2.0), 1.0 / 3}, {at(4.0), 1.0 / 3}});
        b.updateWeights(Pose(Eigen::Vector3d::Zero(), Eigen::Quaterniond::Identity()), Twist::zero());
        double z = 0.0;
        for (const double e : {0.0, 1.0, 4.0}) {
            z += std::exp(-e);
        }
        const double oracle[] = {std::exp(-0.0) / z, std::exp(-1.0) / z, std::exp(-4.0) / z};
        for (std::size_t i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(b.particles()[i].weight - oracle[i]));
        }
    }
    return {worst <= 1e-12, "max deviation " + fmt(worst, 3) + " over serial and parallel kernels"};
}

Verdict dictionaryRoundTrip()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count(1, 5);
    std::size_t entries = 0;
    std::size_t failures = 0;
    std::size_t gating = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<SceneObject> objs;
        const int na = count(rng);
        const int nb = count(rng);
        for (int i = 0; i < na; ++i) {
            objs.push_back(object("a" + std::to_string(i), "item " + std::to_string(i), Category::A,
                                  {u(rng), u(rng), 0.1 * u(rng)}));
        }
        for (int i = 0; i < nb; ++i) {
            objs.push_back(object("b" + std::to_string(i), "spot " + std::to_string(i), Category::B,
                                  {u(rng), u(rng), 0.1 * u(rng)}));
        }
        const Scene scene(objs);
        HeldState held;
        if (u(rng) < 0.5) {
            held.robot = "a0";
        } else if (u(rng) < 0.3) {
            held.human = "a0";
        }
        const Pose ee(Eigen::Vector3d(u(rng), u(rng), 0.3),
                      Eigen::Quaterniond(Eigen::AngleAxisd(u(rng), Eigen::Vector3d::UnitZ())));
        const ActionDictionary d = buildDictionary(scene, held, ee);
        bool pick = false;
        bool place = false;
        for (const DictionaryEntry& e : d.entries()) {
            pick = pick || e.semantic.verb == Verb::Pick;
            place = place || e.semantic.verb == Verb::Place;
            const auto back = dsToSemantic(d, semanticToDs(d, e.semantic), 0.12);
            failures += !(back && *back == e.semantic);
            ++entries;
        }
        gating += pick && place;
    }
    return {failures == 0 && gating == 0, std::to_string(entries) + " entries, " + std::to_string(failures) +
                                              " round-trip failures, " + std::to_string(gating) +
                                              " gating violations"};
}

Verdict commandInjection()
{
    SceneObject beans = object("beans", "Beans", Category::C, {0.70, 0.35, 0.12});
    beans.atop = "counter";
    const Scene scene({object("pot", "cooking pot", Category::A, {0.45, 0.10, 0.10}),
                       object("counter", "on the counter", Category::B, {0.70, 0.30, 0.10}),
                       object("stove", "on the stove", Category::B, {0.70, -0.10, 0.10}), beans});
    const Pose ee(Eigen::Vector3d(0.5, 0.0, 0.3), Eigen::Quaterniond::Identity());
    const ActionDictionary dict = buildDictionary(scene, HeldState{}, ee);
    const PromptBundle bundle{buildSystemPrompt(scene), buildUserPrompt(scene, PromptState{}, dict)};
    MockClient client({}, "# Move ; on the stove &");
    const DecisionOutcome out = decide(client, bundle, {}, scene);
    if (!out.action) {
        return {false, "decide returned no action"};
    }
    const DSAction& cmd = semanticToDs(dict, *out.action);
    EstimatorConfig cfg;
    BeliefState b(semanticToDs(dict, SemanticAction{Verb::Pick, "pot"}), cfg, 3);
    b.resample(0.0, dict.validActions());
    b.setCommandedAction(cmd);
    std::size_t equal = 0;
    for (const Particle& p : b.particles()) {
        equal += p.action == cmd;
    }
    const bool estimate = b.estimate() == cmd;

    // and inside the running simulation, at the tick the command lands
    const Scenario sc = loadScenario(testing::sourceDir() / "scenarios" / "correction.json");
    const EventLog log = runScenario(sc);
    const ActionDictionary sim_dict = buildDictionary(sc.scene, sc.held, sc.robot_start, sc.dictionary);
    bool sim_exact = false;
    std::optional<EventRecord> command;
    for (const EventRecord& r : log.records()) {
        if (r.kind == event::kLlmAction && !command) {
            command = r;
        }
        if (command && r.kind == event::kEstimateSample && r.tick == command->tick) {
            const SemanticAction a = actionFromJson(command->payload.at("action"), "action");
            sim_exact = poseFromJson(r.payload.at("attractor"), "attractor") == semanticToDs(sim_dict, a).attractor();
        }
    }
    return {equal == b.particles().size() && estimate && sim_exact,
            std::to_string(equal) + "/" + std::to_string(b.particles().size()) + " particles equal the command, estimate " +
                (estimate ? "exact" : "differs") + ", simulation estimate at injection tick " +
                (sim_exact ? "exact" : "differs")};
}

Verdict recall()
{
    const RecallScenario sc = loadRecallScenario(testing::sourceDir() / "scenarios" / "recall.json");
    const auto policies = testing::sourceDir() / "scenarios" / "policies";
    const std::vector<int> ns{0, 5, 10, 15};
    const auto perfect = recallExperiment(MockClient::fromFile(policies / "perfect_recall.json"), sc, ns, 20);
    const auto forget = recallExperiment(MockClient::fromFile(policies / "forget_after_5.json"), sc, ns, 20);
    const double want_forget[] = {1.0, 0.0, 0.0, 0.0};
    bool ok = perfect.size() == 4 && forget.size() == 4;
    std::string d = "perfect";
    for (std::size_t i = 0; ok && i < 4; ++i) {
        ok = ok && perfect[i].rate() == 1.0;
        d += " " + fmt(100.0 * perfect[i].rate(), 3) + "%";
    }
    d += ", forget-after-5";
    for (std::size_t i = 0; ok && i < 4; ++i) {
        ok = ok && forget[i].rate() == want_forget[i];
        d += " " + fmt(100.0 * forget[i].rate(), 3) + "%";
    }
    return {ok, d};
}

Verdict determinism()
{
    const Scenario sc = loadScenario(testing::sourceDir() / "scenarios" / "cooking.json");
    std::ostringstream a;
    std::ostringstream b;
    const EventLog first = runScenario(sc);
    first.write(a);
    runScenario(sc).write(b);
    return {a.str() == b.str(), std::to_string(first.size()) + " records, " + std::to_string(a.str().size()) +
                                    " bytes, logs " + (a.str() == b.str() ? "identical" : "differ")};
}

Verdict ascent()
{
    const ControllerConfig cfg;
    ConfidenceState s(cfg, 0.0, 0.0);
    int hit_lin = -1;
    int hit_rot = -1;
    for (int k = 1; k <= 2000 && (hit_lin < 0 || hit_rot < 0); ++k) {
        s = updateConfidence(s, Twist::zero(), Twist::zero(), cfg.dt, cfg);
        if (hit_lin < 0 && s.linear() >= 1.0) {
            hit_lin = k;
        }
        if (hit_rot < 0 && s.rotational() >= 1.0) {
            hit_rot = k;
        }
    }
    const double want_lin = 1.0 / (0.41 * cfg.dt);
    const double want_rot = 1.0 / (0.49 * cfg.dt);
    const bool ok = std::abs(hit_lin - want_lin) <= 2.0 && std::abs(hit_rot - want_rot) <= 2.0;
    return {ok, "linear " + std::to_string(hit_lin) + " steps (1/rho = " + fmt(want_lin, 5) + "), rotational " +
                    std::to_string(hit_rot) + " steps (1/rho = " + fmt(want_rot, 5) + ")"};
}


// Belief commanded to A, observing a DS toward B 0.4 m away at c = 0.2.
Verdict estimatorConvergence(double gain)
{
    EstimatorConfig cfg;
    cfg.likelihood_gain = gain;
    auto at = [](double x, double y) {
        return DSAction(Pose(Eigen::Vector3d(x, y, 0.25), Eigen::Quaterniond::Identity()), DynamicsRanges{}.midpoint());
    };
    const std::vector<DSAction> priors{at(0.3, 0.0), at(0.7, 0.0), at(0.5, 0.4), at(0.5, -0.4)};
    const DSAction& truth = priors[1];
    BeliefState b(priors[0], cfg, 7);
    Pose x = priors[0].attractor();
    const double c = 0.2;
    const double dt = 0.05;
    double err = 1e9;
    std::optional<double> hit;
    for (int k = 1; k <= 60; ++k) {
        const Twist v = referenceVelocity(truth, x);
        b.predict(c, dt);
        b.updateWeights(x, v);
        err = (b.estimate().attractor().position() - truth.attractor().position()).norm();
        if (err < 0.05 && !hit) {
            hit = k * dt;
        }
        b.resample(c, priors);
        x.setPosition(x.position() + v.linear * dt);
    }
    return {hit.has_value(), "likelihood gain " + fmt(gain, 3) + ": error after 3 s " + fmt(err, 3) + " m" +
                                 (hit ? ", within 0.05 m at " + fmt(*hit, 3) + " s" : ", never within 0.05 m")};
}

} // namespace

int main(int argc, char** argv)
{
    const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
    struct Criterion {
        const char* name;
        std::function<Verdict()> run;
        bool informational;
    };
    const Criterion criteria[] = {
        {"ds-convergence", dsConvergence, false},
        {"gain-schedule", gainSchedule, false},
        {"correction-episode", correction, false},
        {"correction-episode-gain-100", correctionSharpened, true},
        {"pf-softmax-oracle", softmaxOracle, false},
        {"dictionary-round-trip", dictionaryRoundTrip, false},
        {"command-injection", commandInjection, false},
        {"recall-harness", recall, false},
        {"determinism", determinism, false},
        {"confidence-ascent", ascent, false},
        {"estimator-convergence", [] { return estimatorConvergence(1.0); }, false},
        {"estimator-convergence-gain-100", [] { return estimatorConvergence(100.0); }, true},
    };
    int failed = 0;
    int errors = 0;
    for (const Criterion& c : criteria) {
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
            ++errors;
        }
        const char* tag = c.informational ? (v.pass ? "INFO-PASS" : "INFO-FAIL") : (v.pass ? "PASS" : "FAIL");
        std::cout << std::left << std::setw(10) << tag << std::setw(34) << c.name << v.detail << std::endl;
        failed += !v.pass && !c.informational;
    }
    std::cout << "criteria failed: " << failed << std::endl;
    return errors > 0 || (strict && failed > 0) ? 1 : 0;
}

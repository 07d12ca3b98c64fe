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

#include <cmath>
#include <random>
#include <set>

#include "doctest.h"

#include "physcorr/approach.hpp"
#include "physcorr/correction.hpp"
#include "physcorr/scene.hpp"

using namespace physcorr;

namespace {

SceneObject object(std::string id, std::string label, Category c, Eigen::Vector3d p)
{
    return {std::move(id), std::move(label), c, Pose(p, Eigen::Quaterniond::Identity()), std::nullopt};
}

Scene kitchen()
{
    return Scene({object("pot", "cooking pot", Category::A, {0.45, 0.10, 0.10}),
                  object("counter", "on the counter", Category::B, {0.70, 0.30, 0.10}),
                  object("stove", "on the stove", Category::B, {0.70, -0.10, 0.10})});
}

std::set<std::pair<Verb, std::string>> pairs(const ActionDictionary& d)
{
    std::set<std::pair<Verb, std::string>> out;
    for (const DictionaryEntry& e : d.entries()) {
        out.insert({e.semantic.verb, e.semantic.object_id});
    }
    return out;
}

const Pose kEe(Eigen::Vector3d(0.5, 0.0, 0.3), Eigen::Quaterniond::Identity());

} // namespace

TEST_CASE("empty-handed dictionary")
{
    const ActionDictionary d = buildDictionary(kitchen(), {}, kEe);
    const std::set<std::pair<Verb, std::string>> expected{
        {Verb::Pick, "pot"}, {Verb::Move, "pot"}, {Verb::Move, "counter"}, {Verb::Move, "stove"}};
    CHECK(pairs(d) == expected);
}

TEST_CASE("holding the pot")
{
    HeldState held;
    held.robot = "pot";
    const ActionDictionary d = buildDictionary(kitchen(), held, kEe);
    const std::set<std::pair<Verb, std::string>> expected{{Verb::Place, "counter"}, {Verb::Place, "stove"},
                                                          {Verb::Tilt, "pot"},      {Verb::Untilt, "pot"},
                                                          {Verb::Move, "pot"},      {Verb::Move, "counter"},
                                                          {Verb::Move, "stove"}};
    CHECK(pairs(d) == expected);
    SUBCASE("tilt is 20 degrees off upright")
    {
        const DSAction& tilt = semanticToDs(d, {Verb::Tilt, "pot"});
        CHECK(rotationAngle(tilt.attractor().orientation(), Eigen::Quaterniond::Identity()) ==
              doctest::Approx(20.0 * M_PI / 180.0));
    }
    SUBCASE("pick is unavailable")
    {
        CHECK_THROWS_AS(semanticToDs(d, {Verb::Pick, "pot"}), UnknownAction);
    }
}

TEST_CASE("attractor offsets")
{
    const ActionDictionary d = buildDictionary(kitchen(), {}, kEe);
    CHECK((semanticToDs(d, {Verb::Pick, "pot"}).attractor().position() - Eigen::Vector3d(0.45, 0.10, 0.12)).norm() <
          1e-12);
    CHECK((semanticToDs(d, {Verb::Move, "stove"}).attractor().position() - Eigen::Vector3d(0.70, -0.10, 0.25))
              .norm() < 1e-12);
    CHECK(semanticToDs(d, {Verb::Move, "stove"}).dynamics() == DynamicsRanges{}.midpoint());
}

TEST_CASE("co-carry needs the human to hold the item")
{
    HeldState held;
    held.human = "pot";
    const ActionDictionary d = buildDictionary(kitchen(), held, kEe);
    const DictionaryEntry* e = d.find({Verb::CoCarry, "pot"});
    REQUIRE(e != nullptr);
    CHECK(e->compliant);
    CHECK(e->ds.attractor() == kEe);
    CHECK_FALSE(d.contains({Verb::Pick, "pot"}));
}

TEST_CASE("nearest-action matching")
{
    const ActionDictionary d = buildDictionary(kitchen(), HeldState{"pot", std::nullopt}, kEe);
    SUBCASE("exact entry")
    {
        const auto m = dsToSemantic(d, semanticToDs(d, {Verb::Place, "stove"}), 0.12);
        REQUIRE(m);
        CHECK(*m == SemanticAction{Verb::Place, "stove"});
    }
    SUBCASE("slightly nearer the stove")
    {
        const Eigen::Vector3d mid(0.70, 0.10 - 0.01, 0.12);
        const DSAction est(Pose(mid, Eigen::Quaterniond::Identity()), DynamicsRanges{}.midpoint());
        // brute-force oracle over all entries
        double best = 1e9;
        SemanticAction oracle;
        for (const DictionaryEntry& e : d.entries()) {
            const double dist = (e.ds.attractor().position() - mid).norm() +
                                0.5 * rotationAngle(e.ds.attractor().orientation(), Eigen::Quaterniond::Identity());
            if (dist < best) {
                best = dist;
                oracle = e.semantic;
            }
        }
        const auto m = dsToSemantic(d, est, 1.0);
        REQUIRE(m);
        CHECK(*m == oracle);
        CHECK(*m == SemanticAction{Verb::Place, "stove"});
    }
    SUBCASE("far from everything")
    {
        const DSAction est(Pose(Eigen::Vector3d(3, 3, 3), Eigen::Quaterniond::Identity()), DynamicsRanges{}.midpoint());
        CHECK_FALSE(dsToSemantic(d, est, 0.12).has_value());
    }
}

TEST_CASE("randomized round trip over 1000 scenes")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count(1, 5);
    int checked = 0;
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
        REQUIRE_FALSE(d.empty());
        bool pick = false;
        bool place = false;
        for (const DictionaryEntry& e : d.entries()) {
            pick = pick || e.semantic.verb == Verb::Pick;
            place = place || e.semantic.verb == Verb::Place;
            const auto back = dsToSemantic(d, semanticToDs(d, e.semantic), 0.12);
            REQUIRE(back);
            CHECK(*back == e.semantic);
            ++checked;
        }
        CHECK_FALSE((pick && place));
        const ActionDictionary again = buildDictionary(scene, held, ee);
        REQUIRE(again.size() == d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            CHECK(again.entries()[i].semantic == d.entries()[i].semantic);
            CHECK(again.entries()[i].ds == d.entries()[i].ds);
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("scene validation")
{
    CHECK_THROWS_AS(Scene({object("x", "a", Category::A, {0, 0, 0}), object("x", "b", Category::B, {1, 0, 0})}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Scene({object("beans", "beans", Category::C, {0, 0, 0})}), std::invalid_argument);
    CHECK_THROWS_AS(buildDictionary(Scene(), {}, kEe), std::invalid_argument);
}

TEST_CASE("label lookup ignores case and quotes")
{
    const Scene s = kitchen();
    REQUIRE(s.findByLabel("'On The Stove'") != nullptr);
    CHECK(s.findByLabel("\"cooking pot\"")->id == "pot");
    CHECK(s.findByLabel("sink") == nullptr);
    CHECK(parseVerb("Co Carry") == Verb::CoCarry);
    CHECK(parseVerb("circular") == std::nullopt);
}

TEST_CASE("correction matching skips end-effector anchored entries")
{
    HeldState held;
    held.robot = "pot";
    const ActionDictionary d = buildDictionary(kitchen(), held, kEe);
    const ActionDictionary anchored = objectAnchored(d);
    CHECK_FALSE(anchored.contains({Verb::Untilt, "pot"}));
    CHECK(anchored.contains({Verb::Place, "stove"}));
}

TEST_CASE("correction detector")
{
    const ActionDictionary d = buildDictionary(kitchen(), {}, kEe);
    const DSAction stove = semanticToDs(d, {Verb::Move, "stove"});
    const SemanticAction counter{Verb::Move, "counter"};
    CorrectionDetector det;
    CHECK_FALSE(det.update(0.3, false, stove, d, counter).opened);
    CHECK(det.update(0.3, true, stove, d, counter).opened);
    CHECK_FALSE(det.update(0.8, false, stove, d, counter).closed);
    const CorrectionStep close = det.update(0.95, false, stove, d, counter);
    CHECK(close.closed);
    REQUIRE(close.correction);
    CHECK(*close.correction == SemanticAction{Verb::Move, "stove"});
    SUBCASE("no correction when intent is unchanged")
    {
        det.update(0.3, true, stove, d, SemanticAction{Verb::Move, "stove"});
        const CorrectionStep same = det.update(0.95, false, stove, d, SemanticAction{Verb::Move, "stove"});
        CHECK(same.closed);
        CHECK_FALSE(same.correction);
    }
}

TEST_CASE("human approach")
{
    Scene s({object("beans", "Beans", Category::A, {0.5, 0.0, 0.1}),
             object("stove", "on the stove", Category::B, {0.0, 0.5, 0.1}),
             object("sink", "in the sink", Category::B, {-0.5, -0.3, 0.1})});
    const double dt = 0.05;
    SUBCASE("stationary hand")
    {
        ApproachTracker t;
        for (int k = 0; k < 20; ++k) {
            t.update(Eigen::Vector3d(0, 0, 0.1), Eigen::Vector3d::Zero(), s, dt);
        }
        CHECK_FALSE(t.current());
    }
    SUBCASE("moving straight at the beans")
    {
        ApproachTracker t;
        Eigen::Vector3d hand(0.0, 0.0, 0.1);
        const Eigen::Vector3d v(0.4, 0.0, 0.0);
        for (int k = 0; k < 10; ++k) {
            t.update(hand, v, s, dt);
            hand += v * dt;
        }
        REQUIRE(t.current());
        CHECK(*t.current() == "beans");
        // oracle: beans has the largest single-step likelihood
        const double lb = approachLikelihood(hand, v, Eigen::Vector3d(0.5, 0, 0.1), 0.5);
        const double ls = approachLikelihood(hand, v, Eigen::Vector3d(0, 0.5, 0.1), 0.5);
        CHECK(lb > ls);
        SUBCASE("ambiguous heading keeps the answer")
        {
            Scene twin({object("beans", "Beans", Category::A, {0.5, 0.5, 0.1}),
                        object("stove", "on the stove", Category::B, {0.5, -0.5, 0.1})});
            ApproachTracker t2;
            Eigen::Vector3d h(0, 0.5, 0.1);
            for (int k = 0; k < 10; ++k) {
                t2.update(h, Eigen::Vector3d(0.4, 0, 0), twin, dt);
                h += Eigen::Vector3d(0.02, 0, 0);
            }
            REQUIRE(t2.current());
            CHECK(*t2.current() == "beans");
            Eigen::Vector3d mid(0.0, 0.0, 0.1);
            for (int k = 0; k < 4; ++k) {
                t2.update(mid, Eigen::Vector3d(0.4, 0, 0), twin, dt);
            }
            CHECK(*t2.current() == "beans");
        }
    }
}

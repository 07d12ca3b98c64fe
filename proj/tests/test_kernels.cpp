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

#include "doctest.h"

#include "physcorr/particle_kernels.hpp"

using namespace physcorr;

namespace {

std::vector<Particle> cloud(std::size_t n)
{
    Rng rng(31);
    const WorkspaceBounds box;
    std::vector<Particle> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({sampleUniformAction(Pose(box.sample(rng), Eigen::Quaterniond::UnitRandom()), rng),
                       1.0 / static_cast<double>(n)});
    }
    return out;
}

} // namespace

TEST_CASE("parallel predict equals the serial reference")
{
    for (const std::size_t n : {1u, 7u, 300u, 3000u}) {
        auto a = cloud(n);
        auto b = a;
        const kernels::NoiseScales noise{4e-3, 8.5e-3, 4e-3, 8.5e-3};
        kernels::serial::predictParticles(a, noise, 0.05, DynamicsRanges{}, 42);
        kernels::predictParticles(b, noise, 0.05, DynamicsRanges{}, 42);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(a[i].action == b[i].action);
        }
    }
}

TEST_CASE("parallel errors equal the serial reference")
{
    const auto particles = cloud(3000);
    Twist observed;
    observed.linear = Eigen::Vector3d(0.1, -0.2, 0.05);
    observed.angular = Eigen::Vector3d(0.0, 0.3, -0.1);
    const Pose x(Eigen::Vector3d(0.4, 0.5, 0.3), Eigen::Quaterniond::Identity());
    std::vector<double> a(particles.size());
    std::vector<double> b(particles.size());
    kernels::serial::squaredErrors(particles, x, observed, 0.5, a);
    kernels::squaredErrors(particles, x, observed, 0.5, b);
    CHECK(a == b);
}

TEST_CASE("squared error stacks the weighted angular block")
{
    const DSAction at_x(Pose(), DynamicsRanges{}.midpoint());
    std::vector<Particle> one{{at_x, 1.0}};
    Twist observed;
    observed.linear = Eigen::Vector3d(0.3, 0, 0);
    observed.angular = Eigen::Vector3d(0, 0, 0.8);
    std::vector<double> out(1);
    kernels::squaredErrors(one, Pose(), observed, 0.5, out);
    CHECK(out[0] == doctest::Approx(0.09 + 0.16));
}

TEST_CASE("size mismatch is rejected")
{
    const auto particles = cloud(4);
    std::vector<double> out(3);
    CHECK_THROWS_AS(kernels::squaredErrors(particles, Pose(), Twist::zero(), 0.5, out), std::invalid_argument);
}

TEST_CASE("particle streams are keyed")
{
    auto a = kernels::particleStream(5, 10);
    auto b = kernels::particleStream(5, 10);
    auto c = kernels::particleStream(5, 11);
    auto d = kernels::particleStream(6, 10);
    const auto va = a();
    CHECK(va == b());
    CHECK(va != c());
    CHECK(va != d());
    // first draws over many streams look uniform
    double mean = 0.0;
    for (std::size_t i = 0; i < 10000; ++i) {
        auto g = kernels::particleStream(42, i);
        mean += std::uniform_real_distribution<double>(0.0, 1.0)(g);
    }
    CHECK(mean / 10000 == doctest::Approx(0.5).epsilon(0.02));
}

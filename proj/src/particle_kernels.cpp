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

#include "physcorr/particle_kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace physcorr::kernels {

StreamRng particleStream(std::uint64_t key, std::size_t index)
{
    // decorrelate neighbouring keys before offsetting by the index
    StreamRng mix(key);
    return StreamRng(mix() + static_cast<std::uint64_t>(index) * 0xd1b54a32d192ed03ULL);
}

namespace {

inline void predictOne(Particle& p, const NoiseScales& noise, double sqrt_dt,
                       const DynamicsRanges& ranges, StreamRng gen)
{
    std::normal_distribution<double> n01(0.0, 1.0);
    Eigen::Vector3d dp;
    Eigen::Vector3d dr;
    for (int k = 0; k < 3; ++k) {
        dp[k] = n01(gen) * noise.attractor_position * sqrt_dt;
    }
    for (int k = 0; k < 3; ++k) {
        dr[k] = n01(gen) * noise.attractor_rotation * sqrt_dt;
    }
    Vector6d da;
    for (int k = 0; k < 3; ++k) {
        da[k] = n01(gen) * noise.dynamics_cartesian * sqrt_dt;
    }
    for (int k = 3; k < 6; ++k) {
        da[k] = n01(gen) * noise.dynamics_rotation * sqrt_dt;
    }
    const Pose& g = p.action.attractor();
    p.action.setAttractor(Pose(g.position() + dp, expMap(dr) * g.orientation()));
    p.action.setDynamics(ranges.clamp(p.action.dynamics() + da));
}

inline double squaredErrorOne(const Particle& p, const Pose& x, const Twist& observed,
                              double rotation_weight)
{
    const Twist predicted = referenceVelocity(p.action, x);
    const double lin = (observed.linear - predicted.linear).squaredNorm();
    const double rot = (rotation_weight * (observed.angular - predicted.angular)).squaredNorm();
    return lin + rot;
}

void checkSizes(std::size_t a, std::size_t b)
{
    if (a != b) {
        throw std::invalid_argument("squaredErrors: output span size mismatch");
    }
}

} // namespace

void predictParticles(std::span<Particle> particles, const NoiseScales& noise, double dt,
                      const DynamicsRanges& ranges, std::uint64_t key)
{
    const double sqrt_dt = std::sqrt(dt);
    const auto n = static_cast<std::int64_t>(particles.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        predictOne(particles[idx], noise, sqrt_dt, ranges, particleStream(key, idx));
    }
}

void squaredErrors(std::span<const Particle> particles, const Pose& x, const Twist& observed,
                   double rotation_weight, std::span<double> out)
{
    checkSizes(particles.size(), out.size());
    const auto n = static_cast<std::int64_t>(particles.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        out[idx] = squaredErrorOne(particles[idx], x, observed, rotation_weight);
    }
}

namespace serial {

void predictParticles(std::span<Particle> particles, const NoiseScales& noise, double dt,
                      const DynamicsRanges& ranges, std::uint64_t key)
{
    const double sqrt_dt = std::sqrt(dt);
    for (std::size_t i = 0; i < particles.size(); ++i) {
        predictOne(particles[i], noise, sqrt_dt, ranges, particleStream(key, i));
    }
}

void squaredErrors(std::span<const Particle> particles, const Pose& x, const Twist& observed,
                   double rotation_weight, std::span<double> out)
{
    checkSizes(particles.size(), out.size());
    for (std::size_t i = 0; i < particles.size(); ++i) {
        out[i] = squaredErrorOne(particles[i], x, observed, rotation_weight);
    }
}

} // namespace serial

} // namespace physcorr::kernels

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

// Per-particle kernels of the intent filter. Each kernel comes in an OpenMP
// version and a serial reference version with identical arithmetic; random
// draws are keyed per particle so both produce bit-identical results for any
// thread count.

#ifndef PHYSCORR_PARTICLE_KERNELS_HPP
#define PHYSCORR_PARTICLE_KERNELS_HPP

#include <cstdint>
#include <span>

#include "physcorr/ds_action.hpp"

namespace physcorr {

struct Particle {
    DSAction action;
    double weight = 0.0;
};

namespace kernels {

/// Standard deviations of the zero-dynamics random walk, per sqrt(second).
struct NoiseScales {
    double attractor_position = 0.0;
    double attractor_rotation = 0.0;
    double dynamics_cartesian = 0.0;
    double dynamics_rotation = 0.0;
};

/// SplitMix64 generator; cheap to construct, one per particle per draw.
class StreamRng {
public:
    using result_type = std::uint64_t;

    explicit StreamRng(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Generator for particle `index` within the draw identified by `key`.
StreamRng particleStream(std::uint64_t key, std::size_t index);

/// Random-walk step on every particle's attractor and dynamics; dynamics are
/// clamped back into `ranges`.
void predictParticles(std::span<Particle> particles, const NoiseScales& noise, double dt,
                      const DynamicsRanges& ranges, std::uint64_t key);

/// Squared stacked twist error [v - v_i; w (omega - omega_i)] of each particle's
/// DS prediction at pose x.
void squaredErrors(std::span<const Particle> particles, const Pose& x, const Twist& observed,
                   double rotation_weight, std::span<double> out);

namespace serial {

void predictParticles(std::span<Particle> particles, const NoiseScales& noise, double dt,
                      const DynamicsRanges& ranges, std::uint64_t key);

void squaredErrors(std::span<const Particle> particles, const Pose& x, const Twist& observed,
                   double rotation_weight, std::span<double> out);

} // namespace serial

} // namespace kernels
} // namespace physcorr

#endif // PHYSCORR_PARTICLE_KERNELS_HPP

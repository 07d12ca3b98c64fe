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

#ifndef PHYSCORR_INTENT_ESTIMATOR_HPP
#define PHYSCORR_INTENT_ESTIMATOR_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "physcorr/ds_action.hpp"
#include "physcorr/particle_kernels.hpp"

namespace physcorr {

/// Thrown when prior resampling has no scene actions to anchor on.
class EmptyScene : public std::runtime_error {
public:
    EmptyScene() : std::runtime_error("resample: no valid scene actions to draw priors from") {}
};

/// Noise standard deviation interpolated by confidence: low at c = 1, high at c = 0.
struct NoiseRange {
    double low = 0.0;
    double high = 0.0;

    double at(double confidence) const;
};

struct EstimatorConfig {
    std::size_t particles = 300;
    NoiseRange noise_lin{3e-4, 4e-3};       // attractor position and Cartesian dynamics
    NoiseRange noise_rot{2e-4, 8.5e-3};     // rotational dynamics
    NoiseRange noise_goal_rot{2e-4, 8.5e-3}; // attractor orientation
    double rotation_weight = 0.5;           // scales angular error in the likelihood
    double likelihood_gain = 1.0;           // weight factor exp(-gain |error|^2)
    DynamicsRanges ranges;
    double rate = 20.0; // Hz
    bool parallel = true;

    void validate() const;
    kernels::NoiseScales noiseAt(double confidence) const;
};

/// Particle belief over DS parameters (attractor and diagonal dynamics).
class BeliefState {
public:
    BeliefState(const DSAction& initial, const EstimatorConfig& cfg, std::uint64_t seed);

    std::span<const Particle> particles() const { return particles_; }
    std::size_t size() const { return particles_.size(); }
    double weightSum() const;

    /// Replaces every particle with `action`, weights uniform.
    void setCommandedAction(const DSAction& action);

    /// Zero-dynamics random walk with confidence-scaled noise.
    void predict(double confidence, double dt);

    /// Multiplies weights by exp(-gain |observed - predicted_i|^2) and renormalizes.
    void updateWeights(const Pose& x, const Twist& observed);

    /// Redraws floor((1 - c) N) particles from scene priors and the rest by
    /// systematic resampling; weights reset to 1/N. Returns the prior count.
    std::size_t resample(double confidence, std::span<const DSAction> valid_actions);

    /// Weighted mean of the particles. Exact when all particles coincide.
    DSAction estimate() const;

    /// Direct weight assignment, normalized. Used by tests and tooling.
    void setWeights(std::span<const double> weights);
    void setParticles(std::vector<Particle> particles);

    const EstimatorConfig& config() const { return cfg_; }
    Rng& rng() { return rng_; }

private:
    void normalize();

    EstimatorConfig cfg_;
    std::vector<Particle> particles_;
    std::vector<double> scratch_;
    Rng rng_;
};

/// Resample rate r = clip(1 - c, 0, 1).
double resampleRate(double confidence);

/// Number of prior-drawn particles for a given confidence.
std::size_t priorCount(double confidence, std::size_t n);

} // namespace physcorr

#endif // PHYSCORR_INTENT_ESTIMATOR_HPP

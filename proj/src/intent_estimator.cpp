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

#include "physcorr/intent_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace physcorr {

double NoiseRange::at(double confidence) const
{
    const double c = std::clamp(confidence, 0.0, 1.0);
    return low + (1.0 - c) * (high - low);
}

void EstimatorConfig::validate() const
{
    if (particles == 0) {
        throw std::invalid_argument("estimator: particle count must be positive");
    }
    for (const NoiseRange& r : {noise_lin, noise_rot, noise_goal_rot}) {
        if (!(r.low > 0.0 && r.low <= r.high)) {
            throw std::invalid_argument("estimator: noise ranges need 0 < low <= high");
        }
    }
    if (!(rotation_weight > 0.0 && rate > 0.0 && likelihood_gain > 0.0)) {
        throw std::invalid_argument("estimator: rotation weight, likelihood gain and rate must be positive");
    }
    ranges.validate();
}

kernels::NoiseScales EstimatorConfig::noiseAt(double confidence) const
{
    const double lin = noise_lin.at(confidence);
    return {lin, noise_goal_rot.at(confidence), lin, noise_rot.at(confidence)};
}

double resampleRate(double confidence)
{
    return std::clamp(1.0 - confidence, 0.0, 1.0);
}

std::size_t priorCount(double confidence, std::size_t n)
{
    const double r = resampleRate(confidence);
    return std::min(n, static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9)));
}

BeliefState::BeliefState(const DSAction& initial, const EstimatorConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), rng_(seed)
{
    cfg_.validate();
    particles_.assign(cfg_.particles, Particle{initial, 1.0 / static_cast<double>(cfg_.particles)});
    scratch_.resize(cfg_.particles);
}

double BeliefState::weightSum() const
{
    double s = 0.0;
    for (const Particle& p : particles_) {
        s += p.weight;
    }
    return s;
}

void BeliefState::setCommandedAction(const DSAction& action)
{
    const double w = 1.0 / static_cast<double>(particles_.size());
    for (Particle& p : particles_) {
        p.action = action;
        p.weight = w;
    }
}

void BeliefState::predict(double confidence, double dt)
{
    const std::uint64_t key = rng_();
    const kernels::NoiseScales noise = cfg_.noiseAt(confidence);
    if (cfg_.parallel) {
        kernels::predictParticles(particles_, noise, dt, cfg_.ranges, key);
    } else {
        kernels::serial::predictParticles(particles_, noise, dt, cfg_.ranges, key);
    }
}

void BeliefState::updateWeights(const Pose& x, const Twist& observed)
{
    if (cfg_.parallel) {
        kernels::squaredErrors(particles_, x, observed, cfg_.rotation_weight, scratch_);
    } else {
        kernels::serial::squaredErrors(particles_, x, observed, cfg_.rotation_weight, scratch_);
    }
    for (std::size_t i = 0; i < particles_.size(); ++i) {
        particles_[i].weight *= std::exp(-cfg_.likelihood_gain * scratch_[i]);
    }
    normalize();
}

void BeliefState::normalize()
{
    const double total = weightSum();
    const double n = static_cast<double>(particles_.size());
    if (!(total >= 1e-300) || !std::isfinite(total)) {
        for (Particle& p : particles_) {
            p.weight = 1.0 / n;
        }
        return;
    }
    for (Particle& p : particles_) {
        p.weight /= total;
    }
}

std::size_t BeliefState::resample(double confidence, std::span<const DSAction> valid_actions)
{
    if (valid_actions.empty()) {
        throw EmptyScene();
    }
    const std::size_t n = particles_.size();
    const std::size_t n_prior = priorCount(confidence, n);
    const std::size_t n_keep = n - n_prior;

    std::vector<Particle> next;
    next.reserve(n);

    if (n_keep > 0) {
        // systematic resampling over the current weights
        const double step = 1.0 / static_cast<double>(n_keep);
        double u = std::uniform_real_distribution<double>(0.0, step)(rng_);
        double cumulative = particles_[0].weight;
        std::size_t i = 0;
        for (std::size_t j = 0; j < n_keep; ++j) {
            while (u > cumulative && i + 1 < n) {
                ++i;
                cumulative += particles_[i].weight;
            }
            next.push_back(particles_[i]);
            u += step;
        }
    }

    std::uniform_int_distribution<std::size_t> pick(0, valid_actions.size() - 1);
    for (std::size_t j = 0; j < n_prior; ++j) {
        const DSAction& prior = valid_actions[pick(rng_)];
        next.push_back({sampleUniformAction(prior.attractor(), rng_, cfg_.ranges, prior.speedCap()), 0.0});
    }

    const double w = 1.0 / static_cast<double>(n);
    for (Particle& p : next) {
        p.weight = w;
    }
    particles_ = std::move(next);
    return n_prior;
}

DSAction BeliefState::estimate() const
{
    // Means are taken as offsets from the heaviest particle so that a
    // collapsed belief returns its action bit-exactly.
    std::size_t ref = 0;
    for (std::size_t i = 1; i < particles_.size(); ++i) {
        if (particles_[i].weight > particles_[ref].weight) {
            ref = i;
        }
    }
    const DSAction& base = particles_[ref].action;
    const Eigen::Vector3d& p0 = base.attractor().position();
    const Eigen::Vector4d q0 = base.attractor().orientation().coeffs();
    const Vector6d& a0 = base.dynamics();

    Eigen::Vector3d dp = Eigen::Vector3d::Zero();
    Eigen::Vector4d dq = Eigen::Vector4d::Zero();
    Vector6d da = Vector6d::Zero();
    double total = 0.0;
    for (const Particle& p : particles_) {
        const double w = p.weight;
        total += w;
        dp += w * (p.action.attractor().position() - p0);
        Eigen::Vector4d q = p.action.attractor().orientation().coeffs();
        if (q.dot(q0) < 0.0) {
            q = -q;
        }
        dq += w * (q - q0);
        da += w * (p.action.dynamics() - a0);
    }
    if (total > 0.0) {
        dp /= total;
        dq /= total;
        da /= total;
    }
    Eigen::Quaterniond q;
    q.coeffs() = q0 + dq;
    return DSAction(Pose(p0 + dp, q), a0 + da, base.speedCap());
}

void BeliefState::setWeights(std::span<const double> weights)
{
    if (weights.size() != particles_.size()) {
        throw std::invalid_argument("setWeights: size mismatch");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        particles_[i].weight = weights[i];
    }
    normalize();
}

void BeliefState::setParticles(std::vector<Particle> particles)
{
    if (particles.empty()) {
        throw std::invalid_argument("setParticles: empty particle set");
    }
    particles_ = std::move(particles);
    scratch_.resize(particles_.size());
    normalize();
}

} // namespace physcorr

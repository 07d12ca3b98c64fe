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

#ifndef PHYSCORR_APPROACH_HPP
#define PHYSCORR_APPROACH_HPP

#include <map>
#include <optional>
#include <string>

#include "physcorr/scene.hpp"

namespace physcorr {

struct ApproachConfig {
    double distance_sigma = 0.5; // m
    double mass_threshold = 0.6;
    double min_speed = 0.05; // m/s
    double hold_time = 0.3;  // s a new answer must persist before it is reported
    double stay = 0.9;       // per-update probability that the target is unchanged
};

/// Which object the human hand is heading to. Keeps a discrete belief over
/// object ids, weighted by heading alignment and proximity.
class ApproachTracker {
public:
    explicit ApproachTracker(ApproachConfig cfg = {}) : cfg_(cfg) {}

    std::optional<std::string> update(const Eigen::Vector3d& hand_position, const Eigen::Vector3d& hand_velocity,
                                      const Scene& scene, double dt);

    const std::optional<std::string>& current() const { return output_; }
    const std::map<std::string, double>& belief() const { return belief_; }
    void reset();

private:
    ApproachConfig cfg_;
    std::map<std::string, double> belief_;
    std::optional<std::string> output_;
    std::optional<std::string> pending_;
    double pending_time_ = 0.0;
};

/// Unnormalized likelihood that a hand at `hand` moving along `velocity` heads
/// to `target`.
double approachLikelihood(const Eigen::Vector3d& hand, const Eigen::Vector3d& velocity,
                          const Eigen::Vector3d& target, double distance_sigma);

} // namespace physcorr

#endif // PHYSCORR_APPROACH_HPP

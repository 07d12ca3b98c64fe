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

#ifndef PHYSCORR_DS_ACTION_HPP
#define PHYSCORR_DS_ACTION_HPP

#include <random>

#include "physcorr/pose.hpp"

namespace physcorr {

using Rng = std::mt19937_64;

struct SpeedCap {
    double linear = 0.5;  // m/s
    double angular = 1.5; // rad/s
};

/// Sampling ranges for the diagonal of A. Cartesian entries apply to the
/// position block, rotational entries to the orientation block.
struct DynamicsRanges {
    double cart_low = -0.6;
    double cart_high = -0.4;
    double rot_low = -0.9;
    double rot_high = -0.6;

    void validate() const;
    Vector6d midpoint() const;
    Vector6d clamp(const Vector6d& dynamics) const;
};

/// A linear first-order DS: reference twist = A * d(x, attractor), with A
/// diagonal and strictly negative.
class DSAction {
public:
    DSAction() = default;
    DSAction(const Pose& attractor, const Vector6d& dynamics, SpeedCap cap = {});

    const Pose& attractor() const { return attractor_; }
    const Vector6d& dynamics() const { return dynamics_; }
    const SpeedCap& speedCap() const { return cap_; }

    void setAttractor(const Pose& attractor) { attractor_ = attractor; }
    void setDynamics(const Vector6d& dynamics);

    bool operator==(const DSAction& other) const;

private:
    Pose attractor_;
    Vector6d dynamics_ = (Vector6d() << -0.5, -0.5, -0.5, -0.75, -0.75, -0.75).finished();
    SpeedCap cap_;
};

/// Axis-aligned box used for sampling start poses and attractors.
struct WorkspaceBounds {
    Eigen::Vector3d min = Eigen::Vector3d::Zero();
    Eigen::Vector3d max = Eigen::Vector3d::Ones();

    void validate() const;
    bool contains(const Eigen::Vector3d& p) const;
    Eigen::Vector3d sample(Rng& rng) const;
};

/// Scales a vector down to `cap` norm, keeping its direction.
Eigen::Vector3d clampNorm(const Eigen::Vector3d& v, double cap);

/// DS reference twist at pose x, clamped per block to the action's speed cap.
Twist referenceVelocity(const DSAction& action, const Pose& x);

/// Same as referenceVelocity without the speed cap.
Twist referenceVelocityUncapped(const DSAction& action, const Pose& x);

/// Action anchored at `object_attractor` with i.i.d. uniform dynamics.
DSAction sampleUniformAction(const Pose& object_attractor, Rng& rng,
                             const DynamicsRanges& ranges = {}, SpeedCap cap = {});

} // namespace physcorr

#endif // PHYSCORR_DS_ACTION_HPP

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

#include "physcorr/ds_action.hpp"

#include <algorithm>
#include <stdexcept>

namespace physcorr {

void DynamicsRanges::validate() const
{
    if (!(cart_low <= cart_high && cart_high < 0.0 && rot_low <= rot_high && rot_high < 0.0)) {
        throw std::invalid_argument("dynamics ranges must satisfy low <= high < 0");
    }
}

Vector6d DynamicsRanges::midpoint() const
{
    const double c = 0.5 * (cart_low + cart_high);
    const double r = 0.5 * (rot_low + rot_high);
    return (Vector6d() << c, c, c, r, r, r).finished();
}

Vector6d DynamicsRanges::clamp(const Vector6d& dynamics) const
{
    Vector6d out;
    for (int i = 0; i < 3; ++i) {
        out[i] = std::clamp(dynamics[i], cart_low, cart_high);
        out[i + 3] = std::clamp(dynamics[i + 3], rot_low, rot_high);
    }
    return out;
}

DSAction::DSAction(const Pose& attractor, const Vector6d& dynamics, SpeedCap cap)
    : attractor_(attractor), cap_(cap)
{
    if (!(cap.linear > 0.0 && cap.angular > 0.0)) {
        throw std::invalid_argument("speed caps must be positive");
    }
    setDynamics(dynamics);
}

void DSAction::setDynamics(const Vector6d& dynamics)
{
    if (!dynamics.allFinite() || (dynamics.array() >= 0.0).any()) {
        throw std::invalid_argument("DS dynamics must be finite and strictly negative");
    }
    dynamics_ = dynamics;
}

bool DSAction::operator==(const DSAction& other) const
{
    return attractor_ == other.attractor_ && dynamics_ == other.dynamics_ &&
           cap_.linear == other.cap_.linear && cap_.angular == other.cap_.angular;
}

void WorkspaceBounds::validate() const
{
    if (!(min.array() < max.array()).all()) {
        throw std::invalid_argument("workspace bounds need min < max on every axis");
    }
}

bool WorkspaceBounds::contains(const Eigen::Vector3d& p) const
{
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
}

Eigen::Vector3d WorkspaceBounds::sample(Rng& rng) const
{
    Eigen::Vector3d p;
    for (int i = 0; i < 3; ++i) {
        p[i] = std::uniform_real_distribution<double>(min[i], max[i])(rng);
    }
    return p;
}

Eigen::Vector3d clampNorm(const Eigen::Vector3d& v, double cap)
{
    const double n = v.norm();
    if (n > cap) {
        return v * (cap / n);
    }
    return v;
}

Twist referenceVelocityUncapped(const DSAction& action, const Pose& x)
{
    const Vector6d d = poseDifference(x, action.attractor());
    return Twist::fromVector(action.dynamics().cwiseProduct(d));
}

Twist referenceVelocity(const DSAction& action, const Pose& x)
{
    Twist t = referenceVelocityUncapped(action, x);
    t.linear = clampNorm(t.linear, action.speedCap().linear);
    t.angular = clampNorm(t.angular, action.speedCap().angular);
    return t;
}

DSAction sampleUniformAction(const Pose& object_attractor, Rng& rng, const DynamicsRanges& ranges,
                             SpeedCap cap)
{
    ranges.validate();
    Vector6d a;
    std::uniform_real_distribution<double> cart(ranges.cart_low, ranges.cart_high);
    std::uniform_real_distribution<double> rot(ranges.rot_low, ranges.rot_high);
    for (int i = 0; i < 3; ++i) {
        a[i] = cart(rng);
    }
    for (int i = 3; i < 6; ++i) {
        a[i] = rot(rng);
    }
    // uniform_real_distribution is half-open; keep degenerate ranges exact
    return DSAction(object_attractor, ranges.clamp(a), cap);
}

} // namespace physcorr

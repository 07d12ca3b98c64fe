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

#include "physcorr/pose.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace physcorr {

Eigen::Quaterniond canonical(const Eigen::Quaterniond& q)
{
    const double n = q.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("quaternion must be finite and non-zero");
    }
    // already-unit inputs pass through bit-exact
    Eigen::Quaterniond out = std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()
                                 ? q
                                 : Eigen::Quaterniond(q.coeffs() / n);
    if (out.w() < 0.0) {
        out.coeffs() = -out.coeffs();
    }
    return out;
}

Pose::Pose() : position_(Eigen::Vector3d::Zero()), orientation_(Eigen::Quaterniond::Identity()) {}

Pose::Pose(const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation)
    : position_(position), orientation_(canonical(orientation))
{
}

void Pose::setOrientation(const Eigen::Quaterniond& orientation)
{
    orientation_ = canonical(orientation);
}

bool Pose::operator==(const Pose& other) const
{
    return position_ == other.position_ && orientation_.coeffs() == other.orientation_.coeffs();
}

Twist Twist::fromVector(const Vector6d& v)
{
    return {v.head<3>(), v.tail<3>()};
}

Vector6d Twist::toVector() const
{
    Vector6d v;
    v << linear, angular;
    return v;
}

bool Twist::isFinite() const
{
    return linear.allFinite() && angular.allFinite();
}

Eigen::Vector3d logMap(const Eigen::Quaterniond& q)
{
    const Eigen::Quaterniond u = canonical(q);
    const Eigen::Vector3d v = u.vec();
    const double s = v.norm();
    if (s < 1e-12) {
        // first order: q ~ (1, theta/2 * axis)
        return 2.0 * v;
    }
    double angle = 2.0 * std::atan2(s, u.w());
    angle = std::min(angle, std::numbers::pi - kLogAngleMargin);
    return v / s * angle;
}

Eigen::Quaterniond expMap(const Eigen::Vector3d& rotation_vector)
{
    const double angle = rotation_vector.norm();
    if (angle < 1e-12) {
        Eigen::Quaterniond q(1.0, 0.5 * rotation_vector.x(), 0.5 * rotation_vector.y(),
                             0.5 * rotation_vector.z());
        return q.normalized();
    }
    const Eigen::Vector3d axis = rotation_vector / angle;
    const double half = 0.5 * angle;
    const double s = std::sin(half);
    return Eigen::Quaterniond(std::cos(half), axis.x() * s, axis.y() * s, axis.z() * s);
}

double rotationAngle(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b)
{
    const Eigen::Quaterniond r = canonical(a * b.conjugate());
    return 2.0 * std::atan2(r.vec().norm(), r.w());
}

Vector6d poseDifference(const Pose& x, const Pose& goal)
{
    Vector6d d;
    d.head<3>() = x.position() - goal.position();
    d.tail<3>() = logMap(x.orientation() * goal.orientation().conjugate());
    return d;
}

Pose integratePose(const Pose& x, const Twist& twist, double dt)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("integratePose: dt must be positive");
    }
    return Pose(x.position() + twist.linear * dt, expMap(twist.angular * dt) * x.orientation());
}

} // namespace physcorr

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

#ifndef PHYSCORR_POSE_HPP
#define PHYSCORR_POSE_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace physcorr {

using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Rotation angles are clamped below pi by this margin before taking the log,
/// so the axis of a half-turn stays well defined.
inline constexpr double kLogAngleMargin = 1e-6;

/// End-effector pose. The orientation is kept unit-norm with a non-negative
/// scalar part, so q and -q collapse onto one stored representative.
class Pose {
public:
    Pose();
    Pose(const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation);

    const Eigen::Vector3d& position() const { return position_; }
    const Eigen::Quaterniond& orientation() const { return orientation_; }

    void setPosition(const Eigen::Vector3d& position) { position_ = position; }
    void setOrientation(const Eigen::Quaterniond& orientation);

    bool operator==(const Pose& other) const;

private:
    Eigen::Vector3d position_;
    Eigen::Quaterniond orientation_;
};

/// Linear (m/s) and angular (rad/s, world-frame rotation-vector rate) velocity.
struct Twist {
    Eigen::Vector3d linear = Eigen::Vector3d::Zero();
    Eigen::Vector3d angular = Eigen::Vector3d::Zero();

    static Twist zero() { return {}; }
    static Twist fromVector(const Vector6d& v);
    Vector6d toVector() const;
    bool isFinite() const;
};

/// Unit quaternion with w >= 0.
Eigen::Quaterniond canonical(const Eigen::Quaterniond& q);

/// Rotation vector (axis * angle, angle in [0, pi)) of a unit quaternion,
/// taking the shortest path.
Eigen::Vector3d logMap(const Eigen::Quaterniond& q);

/// Unit quaternion for a rotation vector.
Eigen::Quaterniond expMap(const Eigen::Vector3d& rotation_vector);

/// Angle of the relative rotation between two orientations, in [0, pi].
double rotationAngle(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

/// State-minus-goal difference [p - p*; log(q * q*^-1)].
Vector6d poseDifference(const Pose& x, const Pose& goal);

/// Steps a pose along a world-frame twist for dt seconds.
Pose integratePose(const Pose& x, const Twist& twist, double dt);

} // namespace physcorr

#endif // PHYSCORR_POSE_HPP

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

#ifndef PHYSCORR_CONTROLLER_HPP
#define PHYSCORR_CONTROLLER_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include "physcorr/pose.hpp"

namespace physcorr {

struct ControllerConfig {
    // damping gains, N*s/m and N*m*s/rad
    double d_lin_high = 85.0;
    double d_lin_low = 1.0;
    double d_rot_high = 13.0;
    double d_rot_low = 1.0;

    double window = 0.5;           // s, tracking-error integration horizon
    double error_scale_lin = 0.15; // m, integrated linear error that zeroes confidence
    double error_scale_rot = 0.4;  // rad
    double ascent_lin = 0.41;      // 1/s
    double ascent_rot = 0.49;      // 1/s

    double force_cap = 60.0;  // N
    double torque_cap = 10.0; // N*m
    double dt = 0.005;        // s, control period

    void validate() const;
    std::size_t windowLength() const;
};

struct Wrench {
    Eigen::Vector3d force = Eigen::Vector3d::Zero();
    Eigen::Vector3d torque = Eigen::Vector3d::Zero();

    static Wrench zero() { return {}; }
    bool isZero() const { return force.isZero(0.0) && torque.isZero(0.0); }
    Wrench operator+(const Wrench& o) const { return {force + o.force, torque + o.torque}; }
};

/// Per-block tracking confidence with its error window.
class ConfidenceState {
public:
    explicit ConfidenceState(const ControllerConfig& cfg, double c_lin = 1.0, double c_rot = 1.0);

    double linear() const { return c_lin_; }
    double rotational() const { return c_rot_; }
    /// Scalar confidence used where a single c is needed (resample rate).
    double scalar() const { return std::min(c_lin_, c_rot_); }

    std::size_t windowLength() const { return lin_errors_.size(); }
    double integratedLinearError(double dt) const;
    double integratedRotationalError(double dt) const;

    void push(double lin_error, double rot_error);
    void set(double c_lin, double c_rot);

private:
    double c_lin_;
    double c_rot_;
    std::vector<double> lin_errors_;
    std::vector<double> rot_errors_;
    std::size_t head_ = 0;
};

/// One control-period update of the confidence: windowed error integral,
/// clipped, then an instant drop or a rate-limited rise.
ConfidenceState updateConfidence(ConfidenceState state, const Twist& twist, const Twist& ref_twist,
                                 double dt, const ControllerConfig& cfg);

/// max(c * high, low)
double effectiveGain(double confidence, double high, double low);

/// Damping-only law: -D(c) (twist - ref_twist) per block, norm-clamped.
Wrench controlWrench(const ConfidenceState& conf, const Twist& twist, const Twist& ref_twist,
                     const ControllerConfig& cfg);

/// Same law with explicit block confidences (used when gains are floored).
Wrench controlWrench(double c_lin, double c_rot, const Twist& twist, const Twist& ref_twist,
                     const ControllerConfig& cfg);

} // namespace physcorr

#endif // PHYSCORR_CONTROLLER_HPP

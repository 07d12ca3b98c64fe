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

#include "physcorr/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "physcorr/ds_action.hpp"

namespace physcorr {

void ControllerConfig::validate() const
{
    if (!(d_lin_high >= d_lin_low && d_lin_low > 0.0 && d_rot_high >= d_rot_low && d_rot_low > 0.0)) {
        throw std::invalid_argument("controller: damping gains need high >= low > 0");
    }
    if (!(window > 0.0 && dt > 0.0)) {
        throw std::invalid_argument("controller: window and dt must be positive");
    }
    if (!(ascent_lin > 0.0 && ascent_rot > 0.0)) {
        throw std::invalid_argument("controller: ascent rates must be positive");
    }
    if (!(error_scale_lin > 0.0 && error_scale_rot > 0.0 && force_cap > 0.0 && torque_cap > 0.0)) {
        throw std::invalid_argument("controller: error scales and wrench caps must be positive");
    }
}

std::size_t ControllerConfig::windowLength() const
{
    // T/dt is usually an integer up to rounding noise
    return static_cast<std::size_t>(std::ceil(window / dt - 1e-9));
}

ConfidenceState::ConfidenceState(const ControllerConfig& cfg, double c_lin, double c_rot)
    : c_lin_(std::clamp(c_lin, 0.0, 1.0)),
      c_rot_(std::clamp(c_rot, 0.0, 1.0)),
      lin_errors_(std::max<std::size_t>(cfg.windowLength(), 1), 0.0),
      rot_errors_(lin_errors_.size(), 0.0)
{
}

double ConfidenceState::integratedLinearError(double dt) const
{
    return std::accumulate(lin_errors_.begin(), lin_errors_.end(), 0.0) * dt;
}

double ConfidenceState::integratedRotationalError(double dt) const
{
    return std::accumulate(rot_errors_.begin(), rot_errors_.end(), 0.0) * dt;
}

void ConfidenceState::push(double lin_error, double rot_error)
{
    lin_errors_[head_] = lin_error;
    rot_errors_[head_] = rot_error;
    head_ = (head_ + 1) % lin_errors_.size();
}

void ConfidenceState::set(double c_lin, double c_rot)
{
    c_lin_ = std::clamp(c_lin, 0.0, 1.0);
    c_rot_ = std::clamp(c_rot, 0.0, 1.0);
}

namespace {

double rateLimited(double current, double target, double rate, double dt)
{
    if (target < current) {
        return target;
    }
    return std::min(target, current + rate * dt);
}

} // namespace

ConfidenceState updateConfidence(ConfidenceState state, const Twist& twist, const Twist& ref_twist,
                                 double dt, const ControllerConfig& cfg)
{
    state.push((twist.linear - ref_twist.linear).norm(), (twist.angular - ref_twist.angular).norm());
    const double raw_lin = std::clamp(1.0 - state.integratedLinearError(dt) / cfg.error_scale_lin, 0.0, 1.0);
    const double raw_rot = std::clamp(1.0 - state.integratedRotationalError(dt) / cfg.error_scale_rot, 0.0, 1.0);
    state.set(rateLimited(state.linear(), raw_lin, cfg.ascent_lin, dt),
              rateLimited(state.rotational(), raw_rot, cfg.ascent_rot, dt));
    return state;
}

double effectiveGain(double confidence, double high, double low)
{
    return std::max(confidence * high, low);
}

Wrench controlWrench(double c_lin, double c_rot, const Twist& twist, const Twist& ref_twist,
                     const ControllerConfig& cfg)
{
    Wrench u;
    u.force = -effectiveGain(c_lin, cfg.d_lin_high, cfg.d_lin_low) * (twist.linear - ref_twist.linear);
    u.torque = -effectiveGain(c_rot, cfg.d_rot_high, cfg.d_rot_low) * (twist.angular - ref_twist.angular);
    u.force = clampNorm(u.force, cfg.force_cap);
    u.torque = clampNorm(u.torque, cfg.torque_cap);
    return u;
}

Wrench controlWrench(const ConfidenceState& conf, const Twist& twist, const Twist& ref_twist,
                     const ControllerConfig& cfg)
{
    return controlWrench(conf.linear(), conf.rotational(), twist, ref_twist, cfg);
}

} // namespace physcorr

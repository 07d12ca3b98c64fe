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

#ifndef PHYSCORR_PLANT_HPP
#define PHYSCORR_PLANT_HPP

#include "physcorr/controller.hpp"
#include "physcorr/pose.hpp"

namespace physcorr {

struct PlantLimits {
    double max_linear_speed = 2.0;  // m/s
    double max_angular_speed = 4.0; // rad/s
};

/// Rigid 6-DoF point plant, gravity compensated.
struct PlantState {
    Pose pose;
    Twist twist;
    double mass = 1.0;    // kg
    double inertia = 0.1; // kg m^2, isotropic
};

/// Semi-implicit Euler: twist from the summed wrench, then the pose from the
/// new twist. Twist norms are clamped to the limits.
PlantState stepControl(const PlantState& plant, const Wrench& command, const Wrench& human, double dt,
                       const PlantLimits& limits = {});

} // namespace physcorr

#endif // PHYSCORR_PLANT_HPP

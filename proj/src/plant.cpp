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

#include "physcorr/plant.hpp"

#include <stdexcept>

#include "physcorr/ds_action.hpp"

namespace physcorr {

PlantState stepControl(const PlantState& plant, const Wrench& command, const Wrench& human, double dt,
                       const PlantLimits& limits)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("stepControl: dt must be positive");
    }
    PlantState next = plant;
    const Wrench total = command + human;
    next.twist.linear = clampNorm(plant.twist.linear + total.force / plant.mass * dt, limits.max_linear_speed);
    next.twist.angular = clampNorm(plant.twist.angular + total.torque / plant.inertia * dt, limits.max_angular_speed);
    next.pose = integratePose(plant.pose, next.twist, dt);
    return next;
}

} // namespace physcorr

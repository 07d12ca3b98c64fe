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

#include "physcorr/approach.hpp"

#include <algorithm>
#include <cmath>

namespace physcorr {

double approachLikelihood(const Eigen::Vector3d& hand, const Eigen::Vector3d& velocity,
                          const Eigen::Vector3d& target, double distance_sigma)
{
    const Eigen::Vector3d to_target = target - hand;
    const double distance = to_target.norm();
    const double speed = velocity.norm();
    double angle = 0.0;
    if (distance > 1e-9 && speed > 1e-12) {
        const double cosine = std::clamp(velocity.dot(to_target) / (speed * distance), -1.0, 1.0);
        angle = std::acos(cosine);
    }
    return std::exp(-angle * angle) * std::exp(-distance * distance / (distance_sigma * distance_sigma));
}

void ApproachTracker::reset()
{
    belief_.clear();
    output_.reset();
    pending_.reset();
    pending_time_ = 0.0;
}

std::optional<std::string> ApproachTracker::update(const Eigen::Vector3d& hand_position,
                                                   const Eigen::Vector3d& hand_velocity, const Scene& scene,
                                                   double dt)
{
    // keep the belief support in sync with the scene
    std::map<std::string, double> next;
    for (const SceneObject& o : scene.objects()) {
        auto it = belief_.find(o.id);
        next[o.id] = it != belief_.end() ? it->second : 0.0;
    }
    const double m = static_cast<double>(next.size());
    double total = 0.0;
    for (auto& [id, w] : next) {
        total += w;
    }
    if (!(total > 0.0)) {
        for (auto& [id, w] : next) {
            w = 1.0 / m;
        }
    } else {
        for (auto& [id, w] : next) {
            w /= total;
        }
    }
    belief_ = std::move(next);

    const bool moving = hand_velocity.norm() > cfg_.min_speed;
    std::optional<std::string> candidate;
    if (moving && !belief_.empty()) {
        double sum = 0.0;
        for (auto& [id, w] : belief_) {
            const SceneObject* o = scene.find(id);
            w = (cfg_.stay * w + (1.0 - cfg_.stay) / m) *
                approachLikelihood(hand_position, hand_velocity, o->pose.position(), cfg_.distance_sigma);
            sum += w;
        }
        if (sum > 0.0) {
            for (auto& [id, w] : belief_) {
                w /= sum;
            }
        } else {
            for (auto& [id, w] : belief_) {
                w = 1.0 / m;
            }
        }
        auto mode = std::max_element(belief_.begin(), belief_.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
        // an ambiguous posterior keeps whatever was reported before
        candidate = mode->second > cfg_.mass_threshold ? std::optional<std::string>(mode->first) : output_;
    }

    if (candidate == output_) {
        pending_.reset();
        pending_time_ = 0.0;
        return output_;
    }
    if (pending_ != candidate) {
        pending_ = candidate;
        pending_time_ = 0.0;
    }
    pending_time_ += dt;
    if (pending_time_ >= cfg_.hold_time - 1e-9) {
        output_ = pending_;
        pending_.reset();
        pending_time_ = 0.0;
    }
    return output_;
}

} // namespace physcorr

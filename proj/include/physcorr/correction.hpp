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

#ifndef PHYSCORR_CORRECTION_HPP
#define PHYSCORR_CORRECTION_HPP

#include <optional>

#include "physcorr/scene.hpp"

namespace physcorr {

struct CorrectionConfig {
    double c_low = 0.5;
    double c_high = 0.9;
    double match_threshold = 0.12;
    double rotation_weight = 0.5;
};

/// Outcome of one detector step.
struct CorrectionStep {
    bool opened = false;
    bool closed = false;
    std::optional<SemanticAction> correction; // set only on a close that changes intent
};

/// Opens an episode when confidence drops below c_low under human contact and
/// closes it once confidence recovers above c_high.
class CorrectionDetector {
public:
    explicit CorrectionDetector(CorrectionConfig cfg = {}) : cfg_(cfg) {}

    CorrectionStep update(double confidence, bool human_contact, const DSAction& estimate,
                          const ActionDictionary& dict, const std::optional<SemanticAction>& commanded);

    bool open() const { return open_; }
    const CorrectionConfig& config() const { return cfg_; }
    void reset() { open_ = false; }

private:
    CorrectionConfig cfg_;
    bool open_ = false;
};

/// Dictionary entries whose attractor is anchored to a scene object. Entries
/// anchored to the current end-effector pose (untilt, co-carry) would match
/// any resting pose and are left out of correction matching.
ActionDictionary objectAnchored(const ActionDictionary& dict);

} // namespace physcorr

#endif // PHYSCORR_CORRECTION_HPP

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

#include "physcorr/correction.hpp"

namespace physcorr {

ActionDictionary objectAnchored(const ActionDictionary& dict)
{
    std::vector<DictionaryEntry> kept;
    for (const DictionaryEntry& e : dict.entries()) {
        if (e.semantic.verb != Verb::Untilt && e.semantic.verb != Verb::CoCarry) {
            kept.push_back(e);
        }
    }
    return ActionDictionary(std::move(kept));
}

CorrectionStep CorrectionDetector::update(double confidence, bool human_contact, const DSAction& estimate,
                                          const ActionDictionary& dict,
                                          const std::optional<SemanticAction>& commanded)
{
    CorrectionStep step;
    if (!open_) {
        if (human_contact && confidence < cfg_.c_low) {
            open_ = true;
            step.opened = true;
        }
        return step;
    }
    if (confidence <= cfg_.c_high) {
        return step;
    }
    open_ = false;
    step.closed = true;
    if (dict.empty()) {
        return step;
    }
    const std::optional<SemanticAction> match =
        dsToSemantic(dict, estimate, cfg_.match_threshold, cfg_.rotation_weight);
    if (match && match != commanded) {
        step.correction = match;
    }
    return step;
}

} // namespace physcorr

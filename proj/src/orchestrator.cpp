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

#include "physcorr/orchestrator.hpp"

namespace physcorr {

DecisionOutcome decide(ModelClient& client, const PromptBundle& bundle, std::span<const TranscriptEntry> transcript,
                       const Scene& scene, const DecideConfig& cfg)
{
    DecisionOutcome out;
    out.entry.user_prompt = bundle.user_prompt;

    ModelRequest request;
    request.system_prompt = bundle.system_prompt;
    request.user_prompt = bundle.user_prompt;
    request.history = transcript.last(std::min(cfg.history, transcript.size()));

    for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
        ModelReply reply;
        try {
            reply = client.complete(request);
        } catch (const ModelUnavailable& e) {
            out.model_unavailable = true;
            out.entry.result = ExecutionResult::failed("model_unavailable");
            out.entry.reasoning = e.what();
            return out;
        }
        out.latency += reply.latency;
        out.entry.raw_response = reply.text;
        try {
            ParsedResponse parsed = parseResponse(reply.text, scene);
            out.action = parsed.action;
            out.label = parsed.label;
            out.entry.proposed = parsed.action;
            out.entry.proposed_label = parsed.label;
            out.entry.reasoning = std::move(parsed.reasoning);
            return out;
        } catch (const ParseError&) {
            if (attempt == cfg.retries) {
                break;
            }
            ++out.retries_used;
            request.user_prompt = bundle.user_prompt + "\n" + kFormatReminder;
        }
    }
    out.entry.result = ExecutionResult::failed("unparseable");
    return out;
}

namespace {

RecallRow runRecall(const ModelClient& prototype, const RecallScenario& sc, int n, int trials, const DecideConfig& cfg)
{
    RecallRow row;
    row.n = n;
    row.trials = trials;
    const std::string system_prompt = buildSystemPrompt(sc.scene);

    auto ask = [&](ModelClient& client, Transcript& transcript, const RecallState& state) {
        const ActionDictionary dict = buildDictionary(sc.scene, state.prompt.held, state.ee_pose, sc.dictionary);
        const PromptBundle bundle{system_prompt, buildUserPrompt(sc.scene, state.prompt, dict)};
        DecisionOutcome outcome = decide(client, bundle, transcript.entries(), sc.scene, cfg);
        transcript.append(outcome.entry);
        return outcome;
    };

    for (int trial = 0; trial < trials; ++trial) {
        std::unique_ptr<ModelClient> client = prototype.clone();
        Transcript transcript;

        const DecisionOutcome first = ask(*client, transcript, sc.target);
        bool unavailable = first.model_unavailable;
        transcript.setLatestResult(ExecutionResult::succeeded());
        transcript.recordCorrection(sc.corrected, sc.scene.labelOf(sc.corrected.object_id));

        std::optional<SemanticAction> last_action = sc.corrected;
        for (int k = 0; k < n; ++k) {
            RecallState filler = sc.fillers[static_cast<std::size_t>(k) % sc.fillers.size()];
            if (k == 0) {
                filler.prompt.last_correction = sc.corrected;
            } else {
                filler.prompt.last_action = last_action;
                filler.prompt.last_result = ExecutionResult::succeeded();
            }
            const DecisionOutcome o = ask(*client, transcript, filler);
            unavailable = unavailable || o.model_unavailable;
            if (o.action) {
                transcript.setLatestResult(ExecutionResult::succeeded());
                last_action = o.action;
            }
        }

        RecallState probe = sc.target;
        if (n == 0) {
            probe.prompt.last_correction = sc.corrected;
        } else {
            probe.prompt.last_correction.reset();
            probe.prompt.last_action = last_action;
            probe.prompt.last_result = ExecutionResult::succeeded();
        }
        const DecisionOutcome answer = ask(*client, transcript, probe);
        unavailable = unavailable || answer.model_unavailable;
        if (answer.action && *answer.action == sc.corrected) {
            ++row.successes;
        }
        if (unavailable) {
            ++row.errors;
        }
    }
    return row;
}

} // namespace

std::vector<RecallRow> recallExperiment(const ModelClient& prototype, const RecallScenario& scenario,
                                        std::span<const int> n_values, int trials, const DecideConfig& cfg)
{
    if (trials <= 0) {
        throw std::invalid_argument("recallExperiment: trials must be positive");
    }
    for (int n : n_values) {
        if (n < 0) {
            throw std::invalid_argument("recallExperiment: n must be non-negative");
        }
        if (n > 0 && scenario.fillers.empty()) {
            throw std::invalid_argument("recallExperiment: filler states required for n > 0");
        }
    }
    std::vector<RecallRow> rows(n_values.size());
    const auto count = static_cast<std::int64_t>(n_values.size());
    if (prototype.deterministic()) {
        // each n uses its own client clones, so the rows are independent
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < count; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            rows[idx] = runRecall(prototype, scenario, n_values[idx], trials, cfg);
        }
    } else {
        for (std::size_t i = 0; i < n_values.size(); ++i) {
            rows[i] = runRecall(prototype, scenario, n_values[i], trials, cfg);
        }
    }
    return rows;
}

} // namespace physcorr

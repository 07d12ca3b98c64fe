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

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "physcorr/plot.hpp"
#include "physcorr/recall.hpp"
#include "physcorr/scenario.hpp"
#include "physcorr/session.hpp"
#include "physcorr/simulation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalidInvocation = 2;
constexpr int kScenarioError = 3;
constexpr int kRuntimeFailure = 4;

std::atomic<bool> g_stop{false};

void onSignal(int)
{
    g_stop = true;
}

std::vector<int> parseIntList(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size() || v < 0) {
            throw std::invalid_argument("'" + item + "' is not a non-negative integer");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw std::invalid_argument("empty list");
    }
    return out;
}

struct RunArgs {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    bool headless = false;
    std::string log;
    std::string bind = "127.0.0.1:8765";
    double speed = 1.0;
    bool exit_when_finished = false;
};

int cmdRun(const RunArgs& a)
{
    physcorr::Scenario scenario = physcorr::loadScenario(a.scenario);
    if (a.seed) {
        scenario.seed = *a.seed;
    }
    if (a.headless) {
        const physcorr::EventLog log = physcorr::runScenario(scenario);
        if (!a.log.empty()) {
            log.save(a.log);
        }
        std::size_t corrections = 0;
        std::size_t actions = 0;
        for (const physcorr::EventRecord& r : log.records()) {
            corrections += r.kind == physcorr::event::kSemanticCorrection;
            actions += r.kind == physcorr::event::kLlmAction;
        }
        std::cout << "scenario=" << scenario.name << " seed=" << scenario.seed << " records=" << log.size()
                  << " llm_actions=" << actions << " corrections=" << corrections << '\n';
        return kOk;
    }
    physcorr::SessionOptions opt;
    opt.bind = physcorr::parseBindAddress(a.bind);
    opt.speed = a.speed;
    opt.exit_when_finished = a.exit_when_finished;
    if (!a.log.empty()) {
        opt.log_path = a.log;
    }
    opt.should_stop = [] { return g_stop.load(); };
    opt.on_listening = [](std::uint16_t port) { std::cerr << "listening on port " << port << std::endl; };
    std::signal(SIGINT, onSignal);
    std::signal(SIGTERM, onSignal);
    physcorr::serveSession(scenario, opt);
    return kOk;
}

struct ReplayArgs {
    std::string log;
    double speed = 1.0;
    std::string bind = "127.0.0.1:8765";
    bool no_serve = false;
    std::string frames_out;
    double wait_client = 0.0;
};

int cmdReplay(const ReplayArgs& a)
{
    const physcorr::EventLog log = physcorr::EventLog::load(a.log);
    physcorr::ReplayOptions opt;
    opt.bind = physcorr::parseBindAddress(a.bind);
    opt.speed = a.speed;
    opt.serve = !a.no_serve;
    opt.wait_for_client = a.wait_client;
    if (!a.frames_out.empty()) {
        opt.frames_out = a.frames_out;
    }
    opt.on_listening = [](std::uint16_t port) { std::cerr << "listening on port " << port << std::endl; };
    const std::size_t frames = physcorr::replayLog(log, opt);
    std::cout << "frames=" << frames << '\n';
    return kOk;
}

struct RecallArgs {
    std::string n = "0,5,10,15";
    int trials = 20;
    std::string client = "mock";
    std::string scenario;
    std::string policy;
    std::string out;
    std::size_t history = 20;
    int retries = 2;
    std::string endpoint;
    std::string model;
    std::string token_env;
    double timeout = 30.0;
};

int cmdRecall(const RecallArgs& a)
{
    const std::vector<int> ns = parseIntList(a.n);
    const physcorr::RecallScenario scenario =
        a.scenario.empty() ? physcorr::defaultRecallScenario() : physcorr::loadRecallScenario(a.scenario);
    std::unique_ptr<physcorr::ModelClient> client;
    if (a.client == "live") {
        physcorr::HttpClientConfig cfg;
        if (!a.endpoint.empty()) {
            cfg.endpoint = a.endpoint;
        }
        if (!a.model.empty()) {
            cfg.model = a.model;
        }
        if (!a.token_env.empty()) {
            cfg.token_env = a.token_env;
        }
        cfg.timeout = a.timeout;
        client = std::make_unique<physcorr::HttpChatClient>(cfg);
    } else {
        client = std::make_unique<physcorr::MockClient>(
            a.policy.empty() ? physcorr::MockClient::fromJson(physcorr::recallPolicy(-1))
                             : physcorr::MockClient::fromFile(a.policy));
    }
    physcorr::DecideConfig decide;
    decide.history = a.history;
    decide.retries = a.retries;
    const std::vector<physcorr::RecallRow> rows =
        physcorr::recallExperiment(*client, scenario, ns, a.trials, decide);
    const bool live = a.client == "live";
    if (a.out.empty()) {
        physcorr::writeRecallCsv(std::cout, rows, live);
    } else {
        std::ofstream out(a.out);
        if (!out) {
            throw std::runtime_error("cannot write '" + a.out + "'");
        }
        physcorr::writeRecallCsv(out, rows, live);
    }
    return kOk;
}

int cmdPlot(const std::string& log_path, const std::string& out_dir)
{
    const physcorr::EventLog log = physcorr::EventLog::load(log_path);
    for (const auto& p : physcorr::writePlotData(log, out_dir)) {
        std::cout << p.string() << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulator of an LLM-commanded end-effector under physical human correction"};
    app.require_subcommand(1);

    RunArgs run;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario headless or as a live session");
    run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", run.seed, "Override the scenario seed");
    run_cmd->add_flag("--headless", run.headless, "Run to completion without a network listener");
    run_cmd->add_option("--log", run.log, "Event log output path");
    run_cmd->add_option("--bind", run.bind, "Listen address host:port for live sessions");
    run_cmd->add_option("--speed", run.speed, "Simulated seconds per wall second")->check(CLI::PositiveNumber);
    run_cmd->add_flag("--exit-when-finished", run.exit_when_finished, "End the session when the scenario ends");

    ReplayArgs replay;
    CLI::App* replay_cmd = app.add_subcommand("replay", "Re-broadcast a recorded event log");
    replay_cmd->add_option("--log", replay.log, "Event log")->required()->check(CLI::ExistingFile);
    replay_cmd->add_option("--speed", replay.speed, "Playback speed factor")->check(CLI::PositiveNumber);
    replay_cmd->add_option("--bind", replay.bind, "Listen address host:port");
    replay_cmd->add_flag("--no-serve", replay.no_serve, "Build frames without opening a listener");
    replay_cmd->add_option("--frames-out", replay.frames_out, "Write the emitted frames as JSON lines");
    replay_cmd->add_option("--wait-client", replay.wait_client, "Seconds to wait for a first client")
        ->check(CLI::NonNegativeNumber);

    RecallArgs recall;
    CLI::App* recall_cmd = app.add_subcommand("recall-exp", "Correction recall experiment; CSV on stdout");
    recall_cmd->add_option("--n", recall.n, "Comma-separated filler counts");
    recall_cmd->add_option("--trials", recall.trials, "Trials per n")->check(CLI::PositiveNumber);
    recall_cmd->add_option("--client", recall.client, "mock or live")->check(CLI::IsMember({"mock", "live"}));
    recall_cmd->add_option("--scenario", recall.scenario, "Recall scenario file")->check(CLI::ExistingFile);
    recall_cmd->add_option("--policy", recall.policy, "Mock policy file")->check(CLI::ExistingFile);
    recall_cmd->add_option("--out", recall.out, "CSV output path");
    recall_cmd->add_option("--history", recall.history, "Transcript entries sent per query");
    recall_cmd->add_option("--retries", recall.retries, "Re-queries after unparseable replies")
        ->check(CLI::NonNegativeNumber);
    recall_cmd->add_option("--endpoint", recall.endpoint, "Chat-completions URL (live)");
    recall_cmd->add_option("--model", recall.model, "Model name (live)");
    recall_cmd->add_option("--token-env", recall.token_env, "Environment variable holding the API token (live)");
    recall_cmd->add_option("--timeout", recall.timeout, "Request timeout in seconds (live)")
        ->check(CLI::PositiveNumber);

    std::string plot_log;
    std::string plot_out;
    CLI::App* plot_cmd = app.add_subcommand("plot", "Export time series for plotting");
    plot_cmd->add_option("--log", plot_log, "Event log")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--out", plot_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidInvocation;
    }

    try {
        if (*run_cmd) {
            return cmdRun(run);
        }
        if (*replay_cmd) {
            return cmdReplay(replay);
        }
        if (*recall_cmd) {
            return cmdRecall(recall);
        }
        if (*plot_cmd) {
            return cmdPlot(plot_log, plot_out);
        }
    } catch (const physcorr::ScenarioInvalid& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return kScenarioError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid invocation: " << e.what() << '\n';
        return kInvalidInvocation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kInvalidInvocation;
}

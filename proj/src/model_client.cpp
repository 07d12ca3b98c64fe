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

#include "physcorr/model_client.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace physcorr {

std::vector<ChatMessage> ModelRequest::toMessages() const
{
    std::vector<ChatMessage> out;
    out.push_back({"system", system_prompt});
    for (const TranscriptEntry& e : history) {
        out.push_back({"user", e.user_prompt});
        std::string reply = e.raw_response;
        if (reply.empty() && e.proposed) {
            reply = "# " + verbTitle(e.proposed->verb) + " ; " + e.proposed_label + " &";
        }
        if (!reply.empty()) {
            out.push_back({"assistant", reply});
        }
        if (e.result.kind == ResultKind::Failed) {
            out.push_back({"user", "Feedback: the action failed to execute: " + e.result.reason + "."});
        }
        if (e.correction) {
            out.push_back({"user", "Feedback: " + e.correction_text + "."});
        }
    }
    out.push_back({"user", user_prompt});
    return out;
}

namespace {

bool containsAll(const std::string& haystack, const std::vector<std::string>& needles)
{
    for (const std::string& n : needles) {
        if (haystack.find(n) == std::string::npos) {
            return false;
        }
    }
    return true;
}

bool containsAny(const std::string& haystack, const std::vector<std::string>& needles)
{
    for (const std::string& n : needles) {
        if (haystack.find(n) != std::string::npos) {
            return true;
        }
    }
    return false;
}

std::string replaceAll(std::string s, const std::string& from, const std::string& to)
{
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::vector<std::string> stringList(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key)) {
        return {};
    }
    const nlohmann::json& v = j.at(key);
    if (v.is_string()) {
        return {v.get<std::string>()};
    }
    return v.get<std::vector<std::string>>();
}

} // namespace

MockClient::MockClient(std::vector<MockRule> rules, std::string fallback)
    : rules_(std::move(rules)), fired_(rules_.size(), 0), fallback_(std::move(fallback))
{
}

MockClient MockClient::fromJson(const nlohmann::json& policy)
{
    std::vector<MockRule> rules;
    for (const nlohmann::json& r : policy.value("rules", nlohmann::json::array())) {
        MockRule rule;
        rule.match = stringList(r, "match");
        rule.not_match = stringList(r, "not_match");
        if (r.contains("times")) {
            rule.times = r.at("times").get<int>();
        }
        if (r.contains("recall")) {
            const nlohmann::json& rc = r.at("recall");
            rule.recall = true;
            rule.recall_state = stringList(rc, "state");
            if (rc.contains("max_gap")) {
                rule.recall_max_gap = rc.at("max_gap").get<std::size_t>();
            }
        }
        rule.respond = r.value("respond", std::string());
        if (r.contains("fault")) {
            const std::string f = r.at("fault").get<std::string>();
            if (f == "timeout") {
                rule.fault = ModelErrorKind::Timeout;
            } else if (f == "transport") {
                rule.fault = ModelErrorKind::Transport;
            } else {
                throw std::invalid_argument("mock policy: unknown fault '" + f + "'");
            }
        }
        rule.latency = r.value("latency", 0.0);
        if (rule.latency < 0.0) {
            throw std::invalid_argument("mock policy: negative latency");
        }
        rules.push_back(std::move(rule));
    }
    return MockClient(std::move(rules), policy.value("fallback", std::string("# Move ; on the counter &")));
}

MockClient MockClient::fromFile(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open mock policy '" + path.string() + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("mock policy '" + path.string() + "': " + e.what());
    }
    return fromJson(j);
}

std::unique_ptr<ModelClient> MockClient::clone() const
{
    return std::make_unique<MockClient>(rules_, fallback_);
}

ModelReply MockClient::complete(const ModelRequest& request)
{
    ++calls_;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const MockRule& rule = rules_[i];
        if (rule.times && fired_[i] >= *rule.times) {
            continue;
        }
        if (!containsAll(request.user_prompt, rule.match) || containsAny(request.user_prompt, rule.not_match)) {
            continue;
        }
        std::string text = rule.respond;
        if (rule.recall) {
            const TranscriptEntry* hit = nullptr;
            std::size_t gap = 0;
            for (std::size_t k = request.history.size(); k-- > 0;) {
                const TranscriptEntry& e = request.history[k];
                if (e.correction && containsAll(e.user_prompt, rule.recall_state)) {
                    hit = &e;
                    gap = request.history.size() - 1 - k;
                    break;
                }
            }
            if (hit == nullptr || (rule.recall_max_gap && gap > *rule.recall_max_gap)) {
                continue;
            }
            text = replaceAll(text, "{verb}", verbTitle(hit->correction->verb));
            text = replaceAll(text, "{label}", hit->correction_label);
        }
        ++fired_[i];
        if (rule.fault) {
            throw ModelUnavailable(*rule.fault, *rule.fault == ModelErrorKind::Timeout ? "mock: scripted timeout"
                                                                                         : "mock: scripted transport error");
        }
        return {text, rule.latency};
    }
    return {fallback_, 0.0};
}

std::unique_ptr<ModelClient> HttpChatClient::clone() const
{
    return std::make_unique<HttpChatClient>(cfg_);
}

ModelReply HttpChatClient::complete(const ModelRequest& request)
{
    static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(cfg_.endpoint, m, kUrl)) {
        throw ModelUnavailable(ModelErrorKind::Transport, "invalid endpoint URL");
    }
    const std::string base = m[1].str();
    const std::string path = m[2].matched ? m[2].str() : std::string("/");

    nlohmann::json body;
    body["model"] = cfg_.model;
    body["temperature"] = cfg_.temperature;
    body["messages"] = nlohmann::json::array();
    for (const ChatMessage& msg : request.toMessages()) {
        body["messages"].push_back({{"role", msg.role}, {"content", msg.content}});
    }

    httplib::Client cli(base);
    const auto secs = static_cast<time_t>(cfg_.timeout);
    const auto usecs = static_cast<time_t>((cfg_.timeout - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (const char* token = std::getenv(cfg_.token_env.c_str()); token != nullptr && *token != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    const auto res = cli.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) {
            throw ModelUnavailable(ModelErrorKind::Timeout, "model endpoint timed out");
        }
        throw ModelUnavailable(ModelErrorKind::Transport, "model endpoint unreachable: " + httplib::to_string(err));
    }
    if (res->status != 200) {
        throw ModelUnavailable(ModelErrorKind::Transport, "model endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
        const nlohmann::json reply = nlohmann::json::parse(res->body);
        return {reply.at("choices").at(0).at("message").at("content").get<std::string>(), 0.0};
    } catch (const nlohmann::json::exception& e) {
        throw ModelUnavailable(ModelErrorKind::Transport, std::string("malformed completion payload: ") + e.what());
    }
}

} // namespace physcorr

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

#ifndef PHYSCORR_MODEL_CLIENT_HPP
#define PHYSCORR_MODEL_CLIENT_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "physcorr/transcript.hpp"

namespace physcorr {

struct ChatMessage {
    std::string role; // system | user | assistant
    std::string content;
};

/// What a model sees for one query.
struct ModelRequest {
    std::string system_prompt;
    std::string user_prompt;
    std::span<const TranscriptEntry> history;

    std::vector<ChatMessage> toMessages() const;
};

struct ModelReply {
    std::string text;
    double latency = 0.0; // simulated seconds until the reply is available
};

enum class ModelErrorKind { Timeout, Transport };

class ModelUnavailable : public std::runtime_error {
public:
    ModelUnavailable(ModelErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ModelErrorKind kind() const { return kind_; }

private:
    ModelErrorKind kind_;
};

class ModelClient {
public:
    virtual ~ModelClient() = default;
    /// Throws ModelUnavailable on transport failure or timeout.
    virtual ModelReply complete(const ModelRequest& request) = 0;
    /// Whether replies are a pure function of the request (and call order).
    virtual bool deterministic() const = 0;
    /// Fresh instance with the same configuration and no call history.
    virtual std::unique_ptr<ModelClient> clone() const = 0;
};

/// One rule of a scripted policy. A rule fires when every condition holds;
/// the first firing rule answers.
struct MockRule {
    std::vector<std::string> match;     // all must occur in the user prompt
    std::vector<std::string> not_match; // none may occur
    std::optional<int> times;           // fire at most this many times

    // Recall condition: the most recent corrected entry in the history whose
    // prompt contains every `recall_state` string, with at most `recall_max_gap`
    // entries after it.
    bool recall = false;
    std::vector<std::string> recall_state;
    std::optional<std::size_t> recall_max_gap;

    std::string respond; // {verb} / {label} expand to the recalled correction
    std::optional<ModelErrorKind> fault;
    double latency = 0.0;
};

class MockClient : public ModelClient {
public:
    explicit MockClient(std::vector<MockRule> rules, std::string fallback = "# Move ; on the counter &");

    static MockClient fromJson(const nlohmann::json& policy);
    static MockClient fromFile(const std::filesystem::path& path);

    ModelReply complete(const ModelRequest& request) override;
    bool deterministic() const override { return true; }
    std::unique_ptr<ModelClient> clone() const override;

    std::size_t calls() const { return calls_; }

private:
    std::vector<MockRule> rules_;
    std::vector<int> fired_;
    std::string fallback_;
    std::size_t calls_ = 0;
};

struct HttpClientConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4o";
    std::string token_env = "PHYSCORR_LLM_API_KEY";
    double timeout = 30.0; // s
    double temperature = 0.2;
};

/// Chat-completions HTTP client. The bearer token is read from the environment
/// variable named in the config and never logged.
class HttpChatClient : public ModelClient {
public:
    explicit HttpChatClient(HttpClientConfig cfg) : cfg_(std::move(cfg)) {}

    ModelReply complete(const ModelRequest& request) override;
    bool deterministic() const override { return false; }
    std::unique_ptr<ModelClient> clone() const override;

    const HttpClientConfig& config() const { return cfg_; }

private:
    HttpClientConfig cfg_;
};

} // namespace physcorr

#endif // PHYSCORR_MODEL_CLIENT_HPP

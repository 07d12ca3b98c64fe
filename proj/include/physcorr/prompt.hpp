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

#ifndef PHYSCORR_PROMPT_HPP
#define PHYSCORR_PROMPT_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "physcorr/scene.hpp"
#include "physcorr/transcript.hpp"

namespace physcorr {

/// Everything the user prompt describes about the current semantic state.
struct PromptState {
    HeldState held;
    std::optional<std::string> human_approach; // object id
    std::optional<SemanticAction> planned;     // what the robot is executing
    std::optional<SemanticAction> last_action;
    ExecutionResult last_result;
    std::optional<SemanticAction> last_correction;
};

struct PromptBundle {
    std::string system_prompt;
    std::string user_prompt;
};

/// Kitchen-assistant system prompt with the scene's labels as category examples.
std::string buildSystemPrompt(const Scene& scene);

/// Six-part semantic scene description. Throws std::invalid_argument on an
/// empty dictionary.
std::string buildUserPrompt(const Scene& scene, const PromptState& state, const ActionDictionary& dict);

/// `verb "label", verb "label", ...`
std::string renderAvailableActions(const Scene& scene, const ActionDictionary& dict);

/// "# Verb ; label &"
std::string formatCommand(Verb verb, std::string_view label);

enum class ParseErrorKind { ParseFailure, MalformedVerb, UnknownItem };

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ParseErrorKind kind() const { return kind_; }

private:
    ParseErrorKind kind_;
};

struct ParsedResponse {
    SemanticAction action;
    std::string label;
    std::string reasoning;
};

/// Extracts the first `# verb ; item &` command. Verb and item match
/// case-insensitively; quotes around the item are ignored.
ParsedResponse parseResponse(std::string_view raw, const Scene& scene);

} // namespace physcorr

#endif // PHYSCORR_PROMPT_HPP

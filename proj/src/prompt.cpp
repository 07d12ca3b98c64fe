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

#include "physcorr/prompt.hpp"

#include <regex>
#include <sstream>

namespace physcorr {

namespace {

std::string examples(const Scene& scene, Category category, std::string_view fallback)
{
    std::string out;
    for (const SceneObject& o : scene.objects()) {
        if (o.category != category) {
            continue;
        }
        if (!out.empty()) {
            out += ", ";
        }
        out += "'" + o.label + "'";
    }
    return out.empty() ? std::string(fallback) : out;
}

std::string labelOr(const Scene& scene, const std::optional<std::string>& id)
{
    return id ? scene.labelOf(*id) : std::string("Nothing");
}

// Rendering order of verb groups in the action list.
constexpr Verb kListOrder[] = {Verb::Pick, Verb::Place, Verb::CoCarry, Verb::Tilt, Verb::Untilt, Verb::Move};

} // namespace

std::string buildSystemPrompt(const Scene& scene)
{
    std::ostringstream s;
    s << "Role: You are a robotic assistant named ChefBot, tasked with aiding a human in the kitchen environment.\n\n"
      << "Objective: Your mission is to facilitate kitchen tasks effectively, focusing on optimal interaction with "
         "items and the environment.\n\n"
      << "Item Categories:\n"
      << "- Category A (Items with Mount): These are items the robot can pick up, typically containers. (Examples: "
      << examples(scene, Category::A, "'gallon of water', 'cooking pot', 'cutting board'") << ")\n"
      << "- Category B (Environment Items): Places where items can be set down when held. (Examples: "
      << examples(scene, Category::B, "'on the stove', 'in the sink', 'on the counter'") << ")\n"
      << "- Category C (Items without Mount): Food items that can only be manipulated when placed atop a Category A "
         "item. (Examples: "
      << examples(scene, Category::C, "'lettuce', 'chicken breast', 'beans'") << ")\n\n"
      << "Abilities:\n"
      << "- Pick: Executable only when the robot is empty-handed and over a Category A item, combining Move and Pick "
         "actions.\n"
      << "- Move: Allows navigation over any item.\n"
      << "- Place: Places items in hand at a Category B location. Placement should be generic, not specific.\n"
      << "- Tilt/Untilt: Enables tilting objects held over a Category A item and subsequently reverting them to their "
         "original state.\n\n"
      << "Operation Instructions:\n"
      << "- Feedback Learning: Absorb lessons from human corrections and action feedback to refine actions "
         "independently of direct interventions.\n"
      << "- Action Execution: Always begin actions with '#', separate commands and items with ';', and conclude with "
         "'&'.\n"
      << "- Response Requirement: Every action response must include a reasoning step, clarifying the robot's "
         "decision-making process.\n\n"
      << "Example Command: # Pick ; cooking pot &\n\n"
      << "Special Notes:\n"
      << "- One Command at a time.\n"
      << "- Human corrections: Human will directly correct you to the right place. If last time human corrected you "
         "on the stove, next time when the same state happens, considering the command \"go to the stove\".\n"
      << "- Interaction history and feedback on action results are provided. Use this information to improve "
         "performance.\n"
      << "- Human Priority: Always prioritize assisting the human collaboratively and efficiently.\n";
    return s.str();
}

std::string renderAvailableActions(const Scene& scene, const ActionDictionary& dict)
{
    std::string out;
    for (Verb verb : kListOrder) {
        for (const DictionaryEntry& e : dict.entries()) {
            if (e.semantic.verb != verb) {
                continue;
            }
            if (!out.empty()) {
                out += ", ";
            }
            out += std::string(verbName(verb)) + " \"" + scene.labelOf(e.semantic.object_id) + "\"";
        }
    }
    return out;
}

std::string buildUserPrompt(const Scene& scene, const PromptState& state, const ActionDictionary& dict)
{
    if (dict.empty()) {
        throw std::invalid_argument("buildUserPrompt: empty action dictionary (move is always valid, check the scene)");
    }
    std::ostringstream s;
    if (state.last_correction) {
        const std::string label = scene.labelOf(state.last_correction->object_id);
        s << "In the previous step, " << correctionSentence(label) << ".\n"
          << "The final action executed by the robot was: " << verbTitle(state.last_correction->verb) << " '"
          << label << "'.\n";
    } else {
        s << "In the previous step, the human did not correct the robot's action.\n";
        if (state.last_action) {
            const std::string action =
                verbTitle(state.last_action->verb) + " " + scene.labelOf(state.last_action->object_id);
            switch (state.last_result.kind) {
            case ResultKind::Succeeded:
                s << "The last action, \"" << action << "\" was executed successfully.\n";
                break;
            case ResultKind::Failed:
                s << "The last action, \"" << action << "\" failed to execute: " << state.last_result.reason << ".\n";
                break;
            case ResultKind::Pending:
                s << "The last action, \"" << action << "\" has not finished executing.\n";
                break;
            }
        } else if (state.last_result.kind == ResultKind::Failed) {
            s << "The last request failed: " << state.last_result.reason << ".\n";
        } else {
            s << "No action has been executed yet.\n";
        }
    }
    s << "The robot is currently holding \"" << labelOr(scene, state.held.robot) << "\"\n"
      << "The human is holding \"" << labelOr(scene, state.held.human) << ".\"\n"
      << "The robot is approaching \""
      << (state.planned ? scene.labelOf(state.planned->object_id) : std::string("Nothing")) << ".\"\n"
      << "The human is approaching \"" << labelOr(scene, state.human_approach) << "\"\n"
      << "The available actions are: " << renderAvailableActions(scene, dict) << "\n";
    return s.str();
}

std::string formatCommand(Verb verb, std::string_view label)
{
    return "# " + verbTitle(verb) + " ; " + std::string(label) + " &";
}

ParsedResponse parseResponse(std::string_view raw, const Scene& scene)
{
    static const std::regex kCommand(R"(#\s*([^#;&]*?)\s*;\s*([^#;&]*?)\s*&)");
    const std::string text(raw);
    std::smatch m;
    if (!std::regex_search(text, m, kCommand)) {
        throw ParseError(ParseErrorKind::ParseFailure, "no '# verb ; item &' command in response");
    }
    const std::optional<Verb> verb = parseVerb(m[1].str());
    if (!verb) {
        throw ParseError(ParseErrorKind::MalformedVerb, "unknown verb '" + m[1].str() + "'");
    }
    const SceneObject* object = scene.findByLabel(m[2].str());
    if (object == nullptr) {
        throw ParseError(ParseErrorKind::UnknownItem, "unknown item '" + m[2].str() + "'");
    }
    std::string reasoning = text.substr(0, static_cast<std::size_t>(m.position(0))) +
                            text.substr(static_cast<std::size_t>(m.position(0) + m.length(0)));
    const auto first = reasoning.find_first_not_of(" \t\r\n");
    const auto last = reasoning.find_last_not_of(" \t\r\n");
    reasoning = first == std::string::npos ? std::string() : reasoning.substr(first, last - first + 1);
    return {SemanticAction{*verb, object->id}, object->label, reasoning};
}

} // namespace physcorr

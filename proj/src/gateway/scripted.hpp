#pragma once

#include <memory>
#include <optional>

#include "gateway/backend.hpp"

namespace cx::gateway {

// One row of the decision table. All present conditions must hold;
// evaluation walks rows in order and the first match fires.
struct PlaybookRule {
    std::optional<CallPurpose> purpose;
    std::optional<int> agent_index;  // matches ChatRequest::team_index
    std::optional<int> round;
    std::optional<std::string> observation_contains;  // substring of the last message

    struct Action {
        std::string text;
        std::vector<ToolCall> tool_calls;
        Usage usage{50, 50};
    };
    // Either a single action or a weighted choice (seed-deterministic).
    std::vector<std::pair<double, Action>> actions;
};

// Deterministic test oracle for the state machine: identical conversation
// prefix (plus purpose/agent/round key) always yields the identical response.
// Stochastic rows derive their pick from a hash of (seed, key), never from
// mutable RNG state, so concurrent subgraphs cannot perturb each other.
class ScriptedPlaybook {
public:
    std::string name;
    std::vector<PlaybookRule> rules;
    PlaybookRule::Action default_action;
    std::vector<std::string> warnings;  // e.g. unreachable rows

    static ScriptedPlaybook from_json(const json& doc);
    // Parse errors carry a 1-based line number.
    static ScriptedPlaybook load(const std::string& path);
    // finish-only playbook used when no playbook file is configured.
    static ScriptedPlaybook finish_only();
};

class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(ScriptedPlaybook playbook, std::uint64_t seed = 0);

    ChatResponse complete(const ChatRequest& request) override;

    const ScriptedPlaybook& playbook() const { return playbook_; }

private:
    ScriptedPlaybook playbook_;
    std::uint64_t seed_;
};

}  // namespace cx::gateway

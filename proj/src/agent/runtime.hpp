#pragma once

#include <functional>
#include <optional>

#include "agent/ledger.hpp"
#include "agent/prompts.hpp"
#include "domain/manifest.hpp"
#include "domain/types.hpp"
#include "gateway/backend.hpp"
#include "orch/directive.hpp"
#include "sandbox/sandbox.hpp"
#include "trace/sink.hpp"

namespace cx::agent {

// Fate of an agent whose budget ran out, as decided by the decision node.
enum class Fate { Extend, HandOff, GiveUp, BudgetExhausted };

// Returns the tool schema list sent with every agent request.
const cx::gateway::json& tool_schemas();

struct AgentContext {
    cx::domain::EntryPoint entrypoint;
    int team_index = 0;
    std::string agent_id;
    std::optional<cx::orch::Directive> directive;  // supervisor hand-off
    std::string prior_record;                      // previous agent's exploration record

    const cx::domain::RunConfig* config = nullptr;
    const cx::domain::GroundTruth* ground_truth = nullptr;
    cx::gateway::Backend* backend = nullptr;
    cx::sandbox::Sandbox* sandbox = nullptr;
    cx::trace::TraceSink* sink = nullptr;
    const PromptSet* prompts = nullptr;

    // Decision node, consulted at budget exhaustion with the latest
    // self-reflection. Must be total (never throws).
    std::function<Fate(const cx::domain::AgentRecord& partial, const std::string& reflection)>
        decide_fate;
    // Critic hook, consulted at each reflection point. Returns the
    // interjection text when the critic chooses to speak.
    std::function<std::optional<std::string>(int round, std::int64_t threshold_ppm,
                                             const std::vector<cx::gateway::Message>& conversation)>
        critic;
};

struct AgentRunOutput {
    cx::domain::AgentRecord record;  // findings attached later by extraction
    std::vector<cx::domain::FlagSubmission> submissions;
    std::vector<cx::trace::TraceEvent> events;  // this agent's slice, for extraction
    std::vector<cx::gateway::Message> conversation;
};

// Executes one agent life: prompt assembly, the turn loop, budget ledger,
// reflection injection at thresholds, evidence capture, flag submission.
AgentRunOutput run_agent(const AgentContext& ctx);

// Appends the fixed reflection instruction for a crossed threshold and
// emits the Reflection event. The agent's next reply becomes a
// reflection_note.
void inject_reflection(std::vector<cx::gateway::Message>& conversation, std::int64_t threshold_ppm,
                       const PromptSet& prompts, cx::trace::TraceSink& sink,
                       const std::string& agent_id);

// Checks a candidate flag, emits FlagSubmitted, returns the submission.
cx::domain::FlagSubmission submit_flag(const std::string& value,
                                       const cx::domain::EntryPoint& entrypoint,
                                       const cx::domain::GroundTruth& manifest,
                                       cx::trace::TraceSink& sink, const std::string& agent_id,
                                       int round_index);

}  // namespace cx::agent

#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "agent/runtime.hpp"
#include "domain/manifest.hpp"
#include "domain/types.hpp"
#include "orch/global_state.hpp"
#include "orch/supervisor.hpp"

namespace cx::orch {

using cx::domain::AgentRecord;
using cx::domain::EntryPoint;
using cx::domain::SubgraphResult;

// Live per-entrypoint chain bookkeeping.
struct ChainState {
    EntryPoint entrypoint;
    int agents_so_far = 0;
    int consecutive_failures = 0;
    bool critic_active = false;  // == consecutive_failures >= critic_after_failures
    std::optional<cx::domain::Severity> highest_severity_seen;
    int attempts_without_signal = 0;
};

using SandboxFactory = std::function<std::unique_ptr<cx::sandbox::Sandbox>(
    const EntryPoint& entrypoint, int team_index, const std::string& agent_id)>;

struct OrchestratorDeps {
    cx::domain::RunConfig config;
    cx::domain::GroundTruth ground_truth;
    cx::gateway::Backend* backend = nullptr;
    SandboxFactory sandbox_factory;
    cx::trace::TraceSink* sink = nullptr;
    cx::agent::PromptSet prompts;
};

// The core state machine: dequeue entrypoints, run n parallel subgraphs,
// drive each chain through spawn → reflect → extend/handoff → critic →
// terminate, and enforce the dead-end heuristic.
class Orchestrator {
public:
    explicit Orchestrator(OrchestratorDeps deps);

    // Batch dispatch: at most n subgraphs live at any instant; when all of
    // a batch terminate, the next n entrypoints are dequeued. Duplicate
    // (host, port) pairs are dropped with a warning.
    std::vector<SubgraphResult> run(const std::vector<EntryPoint>& queue);

    SubgraphResult run_subgraph(const EntryPoint& entrypoint);

    Directive supervisor_handoff(const EntryPoint& entrypoint,
                                 const std::vector<GlobalStateRecord::Entry>& history,
                                 int last_team_index);

    // Decision node at budget exhaustion. Extend only while extensions
    // remain; at the limit the decision is HandOff regardless of the
    // reflection, with no backend call.
    cx::agent::Fate decide_fate(const AgentRecord& partial, const std::string& reflection);

    // Interjects only while the chain's critic is active; returns the
    // injected text. Backend failures produce no interjection.
    std::optional<std::string> maybe_interject_critic(
        const ChainState& chain, const std::string& agent_id, int round,
        const std::vector<cx::gateway::Message>& conversation);

    const GlobalStateRecord& global_state() const { return global_state_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    OrchestratorDeps deps_;
    GlobalStateRecord global_state_;
    std::vector<std::string> warnings_;
    std::mutex warnings_mu_;

    void add_warning(const std::string& msg);
};

// Renders one agent's exploration record for hand-off into the next
// agent's user prompt.
std::string render_exploration_record(const AgentRecord& record,
                                      const std::vector<std::string>& critic_hints);

}  // namespace cx::orch

#include "orch/orchestrator.hpp"

#include <future>
#include <iostream>
#include <set>

#include "extraction/findings.hpp"
#include "util/fs.hpp"

namespace cx::orch {

using cx::agent::Fate;
using cx::domain::ExitReason;
using cx::domain::Severity;
using cx::domain::SubgraphOutcome;
using cx::gateway::ChatRequest;
using cx::gateway::Message;
using cx::gateway::Role;
using cx::trace::EventKind;
using json = nlohmann::json;

Orchestrator::Orchestrator(OrchestratorDeps deps) : deps_(std::move(deps)) {}

void Orchestrator::add_warning(const std::string& msg) {
    std::lock_guard lock(warnings_mu_);
    warnings_.push_back(msg);
    std::cerr << "[orchestrator] " << msg << "\n";
}

std::string render_exploration_record(const AgentRecord& record,
                                      const std::vector<std::string>& critic_hints) {
    std::string out = "agent " + record.agent_id + " exited " +
                      cx::domain::to_string(record.exit_reason) + " after " +
                      std::to_string(record.rounds) + " round(s).\n";
    if (!record.failed_approaches.empty()) {
        out += "failed approaches:\n";
        for (const auto& f : record.failed_approaches) out += "  - " + f + "\n";
    }
    if (!record.findings.empty()) {
        out += "findings:\n";
        for (const auto& f : record.findings)
            out += "  - " + f.title + " (" + cx::domain::to_string(f.severity) + ")\n";
    }
    if (!record.reflection_notes.empty())
        out += "last reflection: " + record.reflection_notes.back() + "\n";
    for (const auto& hint : critic_hints) out += "critic hint: " + hint + "\n";
    return out;
}

std::vector<SubgraphResult> Orchestrator::run(const std::vector<EntryPoint>& queue) {
    std::vector<EntryPoint> unique;
    std::set<std::string> seen;
    for (const auto& ep : queue) {
        if (!seen.insert(ep.key()).second) {
            add_warning("duplicate entrypoint dropped from queue: " + ep.key());
            continue;
        }
        unique.push_back(ep);
    }

    const int n = deps_.config.parallel_subgraphs;
    std::vector<SubgraphResult> results;
    results.reserve(unique.size());

    // Batch semantics: dequeue n, wait for all of them, then the next n.
    for (std::size_t batch_start = 0; batch_start < unique.size();
         batch_start += static_cast<std::size_t>(n)) {
        std::size_t batch_end = std::min(unique.size(), batch_start + static_cast<std::size_t>(n));
        std::vector<std::future<SubgraphResult>> futures;
        for (std::size_t i = batch_start; i < batch_end; ++i) {
            futures.push_back(std::async(std::launch::async,
                                         [this, ep = unique[i]] { return run_subgraph(ep); }));
        }
        for (auto& f : futures) results.push_back(f.get());
    }
    return results;
}

SubgraphResult Orchestrator::run_subgraph(const EntryPoint& entrypoint) {
    const auto& config = deps_.config;
    auto started = deps_.sink->emit(EventKind::SubgraphStarted, {{"entrypoint", entrypoint}});

    SubgraphResult result;
    result.entrypoint = entrypoint;
    result.started_ms = started.wall_clock_ms;

    ChainState chain;
    chain.entrypoint = entrypoint;

    std::optional<Directive> directive;
    std::string prior_record;
    std::string end_note;

    while (true) {
        const int team_index = chain.agents_so_far;
        const std::string agent_id = entrypoint.key() + "#a" + std::to_string(team_index);

        std::unique_ptr<cx::sandbox::Sandbox> sandbox;
        try {
            sandbox = deps_.sandbox_factory(entrypoint, team_index, agent_id);
        } catch (const std::exception& e) {
            // No execution environment, no exploration: account the chain
            // as budget-exhausted and note the error.
            result.outcome = SubgraphOutcome::BudgetExhausted;
            end_note = std::string("sandbox unavailable: ") + e.what();
            add_warning(end_note + " (" + entrypoint.key() + ")");
            break;
        }

        deps_.sink->emit(EventKind::AgentSpawned, {{"agent_id", agent_id},
                                                   {"team_index", team_index},
                                                   {"entrypoint", entrypoint},
                                                   {"sandbox_id", sandbox->id()},
                                                   {"sandbox_kind", sandbox->backend_kind()}});

        cx::agent::AgentContext ctx;
        ctx.entrypoint = entrypoint;
        ctx.team_index = team_index;
        ctx.agent_id = agent_id;
        ctx.directive = directive;
        ctx.prior_record = prior_record;
        ctx.config = &config;
        ctx.ground_truth = &deps_.ground_truth;
        ctx.backend = deps_.backend;
        ctx.sandbox = sandbox.get();
        ctx.sink = deps_.sink;
        ctx.prompts = &deps_.prompts;
        ctx.decide_fate = [this](const AgentRecord& partial, const std::string& reflection) {
            return decide_fate(partial, reflection);
        };
        std::vector<std::string> critic_hints;
        ctx.critic = [this, &chain, &agent_id, &critic_hints](
                         int round, std::int64_t, const std::vector<Message>& conversation) {
            auto interjection = maybe_interject_critic(chain, agent_id, round, conversation);
            if (interjection) critic_hints.push_back(*interjection);
            return interjection;
        };

        auto output = cx::agent::run_agent(ctx);
        sandbox->destroy();

        AgentRecord record = std::move(output.record);

        // Post-agent analysis pass, independent of the agent conversation.
        cx::extraction::ExtractionContext ectx;
        ectx.agent_id = agent_id;
        ectx.team_index = team_index;
        ectx.entrypoint = entrypoint;
        ectx.model = config.model;
        ectx.sink = deps_.sink;
        ectx.prompts = &deps_.prompts;
        ectx.warnings = nullptr;
        record.findings =
            cx::extraction::extract_findings(output.events, *deps_.backend, ectx);

        for (const auto& f : record.findings) {
            if (!chain.highest_severity_seen || f.severity > *chain.highest_severity_seen)
                chain.highest_severity_seen = f.severity;
        }

        deps_.sink->emit(EventKind::AgentExited,
                         {{"agent_id", agent_id},
                          {"team_index", team_index},
                          {"entrypoint", entrypoint},
                          {"exit_reason", cx::domain::to_string(record.exit_reason)},
                          {"rounds", record.rounds},
                          {"cost", record.cost.dollars()},
                          {"extensions_granted", record.extensions_granted},
                          {"findings", record.findings.size()}});

        // Exactly one global-state contribution per terminated agent.
        GlobalStateRecord::Entry entry;
        entry.entrypoint_key = entrypoint.key();
        entry.agent_id = agent_id;
        entry.failed_approaches = record.failed_approaches;
        for (const auto& f : record.findings)
            entry.finding_summaries.push_back(f.title + " (" + cx::domain::to_string(f.severity) +
                                              ")");
        std::set<std::string> commands;
        for (const auto& e : output.events) {
            if (e.kind == EventKind::ToolExec && commands.size() < 8)
                commands.insert(e.payload.value("command", std::string{}));
        }
        entry.surface_notes.assign(commands.begin(), commands.end());
        global_state_.append(entry);

        result.total_rounds += record.rounds;
        result.total_cost += record.cost;
        for (auto& sub : output.submissions) result.flag_submissions.push_back(std::move(sub));
        bool solved = record.exit_reason == ExitReason::Solved;
        result.agents.push_back(std::move(record));
        chain.agents_so_far += 1;

        if (solved) {
            result.outcome = SubgraphOutcome::Solved;
            chain.consecutive_failures = 0;
            break;
        }
        chain.consecutive_failures += 1;
        chain.critic_active = chain.consecutive_failures >= config.critic_after_failures;

        bool has_signal = chain.highest_severity_seen &&
                          *chain.highest_severity_seen >= config.dead_end_min_severity;
        if (!has_signal) chain.attempts_without_signal = chain.agents_so_far;

        // Early termination: no Medium-or-higher finding after the
        // configured number of attempts marks the entrypoint a dead end.
        if (chain.agents_so_far >= config.dead_end_attempts && !has_signal) {
            result.outcome = SubgraphOutcome::DeadEnd;
            break;
        }
        if (chain.agents_so_far >= config.team_size) {
            result.outcome = SubgraphOutcome::MaxAgentsReached;
            break;
        }

        directive = supervisor_handoff(entrypoint, global_state_.slice(entrypoint.key()),
                                       team_index);
        prior_record = render_exploration_record(result.agents.back(), critic_hints);
    }

    auto ended = deps_.sink->emit(
        EventKind::SubgraphEnded,
        [&] {
            json payload{{"entrypoint", entrypoint},
                         {"outcome", cx::domain::to_string(result.outcome)},
                         {"total_rounds", result.total_rounds},
                         {"total_cost", result.total_cost.dollars()},
                         {"agents", result.agents.size()}};
            if (!end_note.empty()) payload["note"] = end_note;
            return payload;
        }());
    result.ended_ms = ended.wall_clock_ms;
    return result;
}

Directive Orchestrator::supervisor_handoff(const EntryPoint& entrypoint,
                                           const std::vector<GlobalStateRecord::Entry>& history,
                                           int last_team_index) {
    Directive directive;
    ChatRequest request;
    request.model = deps_.config.model;
    request.purpose = cx::gateway::CallPurpose::supervisor;
    request.team_index = last_team_index;
    request.round = 1;
    Message system;
    system.role = Role::system;
    system.content = deps_.prompts.get("supervisor_system");
    Message task;
    task.role = Role::user;
    task.content = cx::agent::PromptSet::render(
        deps_.prompts.get("supervisor_task"),
        {{"host", entrypoint.host},
         {"port", std::to_string(entrypoint.port)},
         {"history", render_history(history)}});
    request.messages = {std::move(system), std::move(task)};

    try {
        auto response = deps_.backend->complete(request);
        deps_.sink->emit(EventKind::ModelCall,
                         {{"purpose", "supervisor"},
                          {"entrypoint", entrypoint},
                          {"model", request.model},
                          {"usage",
                           {{"input_tokens", response.usage.input_tokens},
                            {"output_tokens", response.usage.output_tokens}}}});
        directive = parse_directive_response(response.message.content);
    } catch (const std::exception& e) {
        add_warning(std::string("supervisor backend failure, using fallback directive: ") +
                    e.what());
        directive = Directive{"continue prior approach", "", 0.0, {}};
    }

    deps_.sink->emit(EventKind::SupervisorDirective,
                     {{"entrypoint", entrypoint}, {"directive", directive}});
    return directive;
}

Fate Orchestrator::decide_fate(const AgentRecord& partial, const std::string& reflection) {
    // Up to four grants; past that the hand-off is unconditional and the
    // decision node is not consulted.
    if (partial.extensions_granted >= deps_.config.max_extensions) return Fate::HandOff;
    if (reflection.find("GIVEUP") != std::string::npos) return Fate::GiveUp;

    ChatRequest request;
    request.model = deps_.config.model;
    request.purpose = cx::gateway::CallPurpose::fate;
    request.team_index = partial.team_index;
    request.round = partial.rounds;
    Message system;
    system.role = Role::system;
    system.content = deps_.prompts.get("fate_system");
    Message task;
    task.role = Role::user;
    cx::domain::Money cap = deps_.config.base_budget * (1 + partial.extensions_granted);
    task.content = cx::agent::PromptSet::render(
        deps_.prompts.get("fate_task"),
        {{"spent", partial.cost.str()},
         {"cap", cap.str()},
         {"extensions", std::to_string(partial.extensions_granted)},
         {"max_extensions", std::to_string(deps_.config.max_extensions)},
         {"reflection", reflection}});
    request.messages = {std::move(system), std::move(task)};

    try {
        auto response = deps_.backend->complete(request);
        deps_.sink->emit(EventKind::ModelCall,
                         {{"purpose", "fate"},
                          {"agent_id", partial.agent_id},
                          {"model", request.model},
                          {"usage",
                           {{"input_tokens", response.usage.input_tokens},
                            {"output_tokens", response.usage.output_tokens}}}});
        return parse_fate_response(response.message.content);
    } catch (const std::exception&) {
        return Fate::HandOff;  // safe default
    }
}

std::optional<std::string> Orchestrator::maybe_interject_critic(
    const ChainState& chain, const std::string& agent_id, int round,
    const std::vector<Message>& conversation) {
    if (!chain.critic_active) return std::nullopt;

    std::string excerpt;
    std::size_t from = conversation.size() > 6 ? conversation.size() - 6 : 0;
    for (std::size_t i = from; i < conversation.size(); ++i) {
        std::string content = conversation[i].content;
        if (content.size() > 400) content.resize(400);
        excerpt += to_string(conversation[i].role) + ": " + content + "\n";
    }

    ChatRequest request;
    request.model = deps_.config.model;
    request.purpose = cx::gateway::CallPurpose::critic;
    request.team_index = chain.agents_so_far;
    request.round = round;
    Message system;
    system.role = Role::system;
    system.content = deps_.prompts.get("critic_system");
    Message task;
    task.role = Role::user;
    task.content = cx::agent::PromptSet::render(
        deps_.prompts.get("critic_task"),
        {{"failures", std::to_string(chain.consecutive_failures)},
         {"host", chain.entrypoint.host},
         {"port", std::to_string(chain.entrypoint.port)},
         {"excerpt", excerpt}});
    request.messages = {std::move(system), std::move(task)};

    try {
        auto response = deps_.backend->complete(request);
        deps_.sink->emit(EventKind::ModelCall,
                         {{"purpose", "critic"},
                          {"agent_id", agent_id},
                          {"model", request.model},
                          {"usage",
                           {{"input_tokens", response.usage.input_tokens},
                            {"output_tokens", response.usage.output_tokens}}}});
        deps_.sink->emit(EventKind::CriticInterjection,
                         {{"agent_id", agent_id}, {"content", response.message.content}});
        return response.message.content;
    } catch (const std::exception& e) {
        add_warning(std::string("critic backend failure, no interjection: ") + e.what());
        return std::nullopt;
    }
}

}  // namespace cx::orch

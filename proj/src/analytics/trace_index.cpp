#include "analytics/trace_index.hpp"

namespace cx::analytics {

using cx::trace::EventKind;

TraceIndex TraceIndex::build(const std::vector<cx::trace::TraceEvent>& events) {
    TraceIndex idx;
    for (const auto& e : events) {
        switch (e.kind) {
            case EventKind::RunStarted: {
                idx.run_id = e.payload.value("run_id", std::string{});
                idx.run_started_ms = e.wall_clock_ms;
                idx.run_config = e.payload.value("config", nlohmann::json::object());
                idx.challenge_keys =
                    e.payload.value("challenges", std::vector<std::string>{});
                break;
            }
            case EventKind::AgentSpawned: {
                auto agent_id = e.payload.at("agent_id").get<std::string>();
                auto ep = e.payload.at("entrypoint").get<EntryPoint>();
                idx.agent_ep[agent_id] = ep.key();
                break;
            }
            case EventKind::AgentExited: {
                Agent a;
                a.agent_id = e.payload.at("agent_id").get<std::string>();
                a.team_index = e.payload.value("team_index", 0);
                a.rounds = e.payload.value("rounds", 0);
                a.cost = Money::from_dollars(e.payload.value("cost", 0.0));
                a.extensions = e.payload.value("extensions_granted", 0);
                a.exit_reason =
                    cx::domain::exit_reason_from_string(e.payload.at("exit_reason").get<std::string>());
                a.exited_seq = e.seq;
                auto it = idx.agent_ep.find(a.agent_id);
                if (it != idx.agent_ep.end()) a.ep_key = it->second;
                else if (e.payload.contains("entrypoint"))
                    a.ep_key = e.payload.at("entrypoint").get<EntryPoint>().key();
                idx.agents.push_back(std::move(a));
                break;
            }
            case EventKind::FlagSubmitted: {
                Submission s;
                s.agent_id = e.payload.value("agent_id", std::string{});
                s.correct = e.payload.value("correct", false);
                s.wall_clock_ms = e.wall_clock_ms;
                if (e.payload.contains("entrypoint"))
                    s.ep_key = e.payload.at("entrypoint").get<EntryPoint>().key();
                else
                    s.ep_key = idx.agent_ep.count(s.agent_id) ? idx.agent_ep[s.agent_id] : "";
                idx.submissions.push_back(std::move(s));
                break;
            }
            case EventKind::FindingRecorded: {
                idx.findings.push_back(e.payload.at("finding").get<Finding>());
                break;
            }
            case EventKind::EvidenceWritten: {
                idx.evidence_files[e.payload.value("agent_id", std::string{})].insert(
                    e.payload.value("path", std::string{}));
                break;
            }
            case EventKind::SubgraphEnded: {
                Subgraph s;
                s.entrypoint = e.payload.at("entrypoint").get<EntryPoint>();
                s.outcome =
                    cx::domain::outcome_from_string(e.payload.at("outcome").get<std::string>());
                s.total_rounds = e.payload.value("total_rounds", std::int64_t{0});
                s.total_cost = Money::from_dollars(e.payload.value("total_cost", 0.0));
                s.agents = e.payload.value("agents", 0);
                s.ended_ms = e.wall_clock_ms;
                idx.subgraph_by_key[s.entrypoint.key()] = idx.subgraphs.size();
                idx.subgraphs.push_back(std::move(s));
                break;
            }
            default:
                break;
        }
    }
    // Second pass for subgraph start stamps.
    for (const auto& e : events) {
        if (e.kind != EventKind::SubgraphStarted) continue;
        auto key = e.payload.at("entrypoint").get<EntryPoint>().key();
        auto it = idx.subgraph_by_key.find(key);
        if (it != idx.subgraph_by_key.end() && it->second < idx.subgraphs.size())
            idx.subgraphs[it->second].started_ms = e.wall_clock_ms;
    }
    // When RunStarted carries no challenge list, the explored surface is
    // the best available stand-in.
    if (idx.challenge_keys.empty()) {
        for (const auto& s : idx.subgraphs) idx.challenge_keys.push_back(s.entrypoint.key());
    }
    return idx;
}

std::string TraceIndex::ep_of_agent(const std::string& agent_id) const {
    auto it = agent_ep.find(agent_id);
    return it == agent_ep.end() ? "" : it->second;
}

}  // namespace cx::analytics

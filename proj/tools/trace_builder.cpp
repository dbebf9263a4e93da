#include "trace_builder.hpp"

#include "util/fs.hpp"

namespace cx::fixtures {

using cx::domain::EntryPoint;
using cx::domain::Finding;
using cx::domain::Money;
using cx::trace::EventKind;
using cx::trace::TraceEvent;
using json = nlohmann::json;

EntryPoint make_ep(const std::string& host, int port, cx::domain::ServiceKind kind) {
    EntryPoint ep;
    ep.host = host;
    ep.port = port;
    ep.service_kind = kind;
    return ep;
}

TraceBuilder::TraceBuilder(std::string run_id, std::int64_t t0_ms, json config)
    : run_id_(std::move(run_id)), t0_ms_(t0_ms), config_(std::move(config)) {}

void TraceBuilder::set_challenges(std::vector<std::string> keys) {
    challenges_ = std::move(keys);
}

void TraceBuilder::add(SubgraphSpec spec) {
    subgraphs_.push_back(std::move(spec));
}

std::vector<TraceEvent> TraceBuilder::events() const {
    std::vector<TraceEvent> out;
    std::int64_t seq = 0;
    auto push = [&](std::int64_t at_ms, EventKind kind, json payload) {
        TraceEvent e;
        e.seq = ++seq;
        e.wall_clock_ms = at_ms;
        e.kind = kind;
        e.payload = std::move(payload);
        out.push_back(std::move(e));
    };

    std::vector<std::string> challenges = challenges_;
    if (challenges.empty())
        for (const auto& s : subgraphs_) challenges.push_back(s.entrypoint.key());

    push(t0_ms_, EventKind::RunStarted,
         {{"run_id", run_id_},
          {"config", config_},
          {"challenges", challenges},
          {"entrypoints", [&] {
               json arr = json::array();
               for (const auto& s : subgraphs_) arr.push_back(s.entrypoint);
               return arr;
           }()},
          {"seed", 0}});
    for (const auto& s : subgraphs_)
        push(t0_ms_ + 1, EventKind::EntryPointDiscovered, {{"entrypoint", s.entrypoint}});

    for (const auto& s : subgraphs_) {
        std::int64_t start = t0_ms_ + s.start_offset_ms;
        push(start, EventKind::SubgraphStarted, {{"entrypoint", s.entrypoint}});

        std::int64_t total_rounds = 0;
        std::int64_t total_cost_micros = 0;
        std::int64_t cursor = start;
        for (std::size_t i = 0; i < s.agents.size(); ++i) {
            const AgentSpec& a = s.agents[i];
            std::string agent_id = s.entrypoint.key() + "#a" + std::to_string(i);
            ++cursor;
            push(cursor, EventKind::AgentSpawned,
                 {{"agent_id", agent_id},
                  {"team_index", static_cast<int>(i)},
                  {"entrypoint", s.entrypoint},
                  {"sandbox_id", "sbx-" + agent_id},
                  {"sandbox_kind", "mock"}});

            for (const auto& [correct, at_offset] : a.submissions) {
                push(t0_ms_ + at_offset, EventKind::FlagSubmitted,
                     {{"agent_id", agent_id},
                      {"entrypoint", s.entrypoint},
                      {"value", correct ? "FLAG{fixture}" : "FLAG{wrong}"},
                      {"correct", correct},
                      {"round_index", a.rounds}});
            }

            int fi = 0;
            for (auto severity : a.findings) {
                Finding f;
                f.finding_id = agent_id + "-f" + std::to_string(fi);
                f.agent_id = agent_id;
                f.entrypoint = s.entrypoint;
                f.title = "observation " + std::to_string(fi) + " on " + s.entrypoint.key();
                f.description = a.finding_descriptions.empty()
                                    ? "service behavior worth follow-up"
                                    : a.finding_descriptions[fi % a.finding_descriptions.size()];
                f.severity = severity;
                f.confidence = 0.5;
                ++cursor;
                push(cursor, EventKind::FindingRecorded,
                     {{"agent_id", agent_id}, {"finding", f}});
                ++fi;
            }

            for (int e = 0; e < a.evidence_files; ++e) {
                ++cursor;
                push(cursor, EventKind::EvidenceWritten,
                     {{"agent_id", agent_id},
                      {"path", "evidence_" + std::to_string(e) + ".txt"},
                      {"bytes", 64}});
            }

            ++cursor;
            push(cursor, EventKind::AgentExited,
                 {{"agent_id", agent_id},
                  {"team_index", static_cast<int>(i)},
                  {"entrypoint", s.entrypoint},
                  {"exit_reason", cx::domain::to_string(a.exit)},
                  {"rounds", a.rounds},
                  {"cost", Money::from_micros(a.cost_micros).dollars()},
                  {"extensions_granted", a.extensions},
                  {"findings", a.findings.size()}});
            total_rounds += a.rounds;
            total_cost_micros += a.cost_micros;
        }

        push(start + s.duration_ms, EventKind::SubgraphEnded,
             {{"entrypoint", s.entrypoint},
              {"outcome", cx::domain::to_string(s.outcome)},
              {"total_rounds", total_rounds},
              {"total_cost", Money::from_micros(total_cost_micros).dollars()},
              {"agents", s.agents.size()}});
    }

    std::int64_t end = t0_ms_;
    for (const auto& s : subgraphs_)
        end = std::max(end, t0_ms_ + s.start_offset_ms + s.duration_ms);
    push(end + 1, EventKind::RunEnded,
         {{"run_id", run_id_}, {"entrypoints", subgraphs_.size()}});
    return out;
}

std::string TraceBuilder::jsonl() const {
    std::string out;
    for (const auto& e : events()) out += e.to_json().dump() + "\n";
    return out;
}

void TraceBuilder::write(const std::string& path) const {
    cx::util::write_file(path, jsonl());
}

}  // namespace cx::fixtures

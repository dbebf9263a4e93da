#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "domain/types.hpp"
#include "trace/events.hpp"

namespace cx::fixtures {

// Deterministic synthetic-trace construction for metric fixtures and
// analytics tests. Wall clocks and seqs are fully determined by the specs.
struct AgentSpec {
    int rounds = 0;
    std::int64_t cost_micros = 0;
    cx::domain::ExitReason exit = cx::domain::ExitReason::HandOff;
    int extensions = 0;
    std::vector<cx::domain::Severity> findings;
    std::vector<std::string> finding_descriptions;  // optional, cycled
    int evidence_files = 0;
    // (correct, wall-clock offset from run start in ms)
    std::vector<std::pair<bool, std::int64_t>> submissions;
};

struct SubgraphSpec {
    cx::domain::EntryPoint entrypoint;
    cx::domain::SubgraphOutcome outcome = cx::domain::SubgraphOutcome::DeadEnd;
    std::vector<AgentSpec> agents;
    std::int64_t start_offset_ms = 0;
    std::int64_t duration_ms = 1000;
};

class TraceBuilder {
public:
    TraceBuilder(std::string run_id, std::int64_t t0_ms,
                 nlohmann::json config = nlohmann::json::object());

    void set_challenges(std::vector<std::string> keys);
    void add(SubgraphSpec spec);

    std::vector<cx::trace::TraceEvent> events() const;
    std::string jsonl() const;
    void write(const std::string& path) const;

private:
    std::string run_id_;
    std::int64_t t0_ms_;
    nlohmann::json config_;
    std::vector<std::string> challenges_;
    std::vector<SubgraphSpec> subgraphs_;
};

cx::domain::EntryPoint make_ep(const std::string& host, int port,
                               cx::domain::ServiceKind kind = cx::domain::ServiceKind::http);

}  // namespace cx::fixtures

#pragma once

#include <map>
#include <optional>
#include <set>

#include "domain/manifest.hpp"
#include "domain/types.hpp"
#include "trace/events.hpp"

namespace cx::analytics {

using cx::domain::EntryPoint;
using cx::domain::ExitReason;
using cx::domain::Finding;
using cx::domain::Money;
using cx::domain::SubgraphOutcome;

// One pass over a loaded trace, shared by every metric. The paper's
// solved/dead-end dichotomy partitions all entrypoints, so everything
// non-Solved counts as the dead-end class here; the structured outcome is
// still kept per subgraph.
struct TraceIndex {
    struct Agent {
        std::string agent_id;
        std::string ep_key;
        int team_index = 0;
        int rounds = 0;
        Money cost;
        int extensions = 0;
        ExitReason exit_reason = ExitReason::Error;
        std::int64_t exited_seq = 0;
    };
    struct Subgraph {
        EntryPoint entrypoint;
        SubgraphOutcome outcome = SubgraphOutcome::DeadEnd;
        std::int64_t total_rounds = 0;
        Money total_cost;
        int agents = 0;
        std::int64_t started_ms = 0;
        std::int64_t ended_ms = 0;

        bool solved() const { return outcome == SubgraphOutcome::Solved; }
    };
    struct Submission {
        std::string ep_key;
        std::string agent_id;
        bool correct = false;
        std::int64_t wall_clock_ms = 0;
    };

    std::string run_id;
    std::int64_t run_started_ms = -1;
    nlohmann::json run_config;  // as recorded
    std::vector<std::string> challenge_keys;  // from RunStarted

    std::vector<Subgraph> subgraphs;  // in end order
    std::map<std::string, std::size_t> subgraph_by_key;
    std::vector<Agent> agents;  // in exit order
    std::map<std::string, std::string> agent_ep;
    std::vector<Submission> submissions;  // in submit order
    std::vector<Finding> findings;        // from FindingRecorded
    std::map<std::string, std::set<std::string>> evidence_files;  // agent -> paths

    static TraceIndex build(const std::vector<cx::trace::TraceEvent>& events);

    std::string ep_of_agent(const std::string& agent_id) const;
};

}  // namespace cx::analytics

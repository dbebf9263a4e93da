#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace cx::trace {

using json = nlohmann::json;

enum class EventKind {
    RunStarted,
    EntryPointDiscovered,
    SubgraphStarted,
    AgentSpawned,
    ModelCall,
    ToolExec,
    Reflection,
    BudgetExtended,
    CriticInterjection,
    SupervisorDirective,
    FlagSubmitted,
    FindingRecorded,
    EvidenceWritten,
    AgentExited,
    SubgraphEnded,
    RunEnded,
};

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

// One line of the JSONL run log — the single source of truth for analytics.
struct TraceEvent {
    std::int64_t seq = 0;  // strictly increasing within one run log
    std::int64_t wall_clock_ms = 0;
    EventKind kind = EventKind::RunStarted;
    json payload;

    json to_json() const;
    static TraceEvent parse(const json& j);
    static TraceEvent parse_line(const std::string& line);
};

}  // namespace cx::trace

#include "trace/events.hpp"

#include <array>
#include <stdexcept>

namespace cx::trace {

namespace {
constexpr std::array<const char*, 16> kNames = {
    "RunStarted",      "EntryPointDiscovered", "SubgraphStarted",    "AgentSpawned",
    "ModelCall",       "ToolExec",             "Reflection",         "BudgetExtended",
    "CriticInterjection", "SupervisorDirective", "FlagSubmitted",    "FindingRecorded",
    "EvidenceWritten", "AgentExited",          "SubgraphEnded",      "RunEnded",
};
}

std::string to_string(EventKind k) {
    return kNames[static_cast<std::size_t>(k)];
}

EventKind event_kind_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (s == kNames[i]) return static_cast<EventKind>(i);
    throw std::invalid_argument("unknown trace event kind: " + s);
}

json TraceEvent::to_json() const {
    return json{{"seq", seq},
                {"wall_clock", wall_clock_ms},
                {"kind", to_string(kind)},
                {"payload", payload}};
}

TraceEvent TraceEvent::parse(const json& j) {
    TraceEvent e;
    e.seq = j.at("seq").get<std::int64_t>();
    e.wall_clock_ms = j.at("wall_clock").get<std::int64_t>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.payload = j.value("payload", json::object());
    return e;
}

TraceEvent TraceEvent::parse_line(const std::string& line) {
    return parse(json::parse(line));
}

}  // namespace cx::trace

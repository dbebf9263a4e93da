#pragma once

#include "analytics/trace_index.hpp"

namespace cx::analytics {

enum class MilestoneStatus { aligned, partial, missing };
std::string to_string(MilestoneStatus s);
std::string status_glyph(MilestoneStatus s);  // ✓ / ◐ / ✗

struct PredicateError : std::runtime_error {
    std::string predicate_name;
    PredicateError(std::string name, const std::string& msg)
        : std::runtime_error("predicate '" + name + "': " + msg), predicate_name(std::move(name)) {}
};

// Evidence predicates over trace events. Leaves:
//   {"event_kind": "ToolExec", "field": "output", "contains": "..."}
//   {"event_kind": "FlagSubmitted", "field": "correct", "equals": true}
// Composites: {"all": [...]} / {"any": [...]}. A predicate matches when
// some event in the entrypoint's slice satisfies every leaf condition.
struct MilestoneOracle {
    struct Milestone {
        std::string id;    // e.g. "S", "D", "R"
        std::string name;
        nlohmann::json aligned;               // required predicate
        std::optional<nlohmann::json> partial;  // weaker predicate
    };
    struct Entry {
        std::string ep_key;  // "host:port"
        std::vector<Milestone> milestones;  // ordered
    };
    std::vector<Entry> entries;

    // Validates every predicate shape up front; throws PredicateError.
    static MilestoneOracle from_json(const nlohmann::json& doc);
    static MilestoneOracle load(const std::string& path);
};

struct MilestoneMatrix {
    struct Cell {
        std::string id;
        std::string name;
        MilestoneStatus status = MilestoneStatus::missing;
    };
    std::map<std::string, std::vector<Cell>> rows;  // ep_key -> ordered cells

    nlohmann::json to_json() const;
    std::string render() const;  // glyph matrix, one row per entrypoint
};

// Statuses are computed solely from trace evidence, never from outcomes.
MilestoneMatrix milestone_alignment(const std::vector<cx::trace::TraceEvent>& events,
                                    const TraceIndex& idx, const MilestoneOracle& oracle);

}  // namespace cx::analytics

#include "analytics/milestones.hpp"

#include <set>

#include "util/fs.hpp"

namespace cx::analytics {

using cx::trace::EventKind;
using nlohmann::json;

std::string to_string(MilestoneStatus s) {
    switch (s) {
        case MilestoneStatus::aligned: return "aligned";
        case MilestoneStatus::partial: return "partial";
        case MilestoneStatus::missing: return "missing";
    }
    return "missing";
}

std::string status_glyph(MilestoneStatus s) {
    switch (s) {
        case MilestoneStatus::aligned: return "✓";
        case MilestoneStatus::partial: return "◐";
        case MilestoneStatus::missing: return "✗";
    }
    return "✗";
}

namespace {

void validate_predicate(const json& pred, const std::string& name) {
    if (!pred.is_object()) throw PredicateError(name, "must be an object");
    static const std::set<std::string> kLeafKeys = {"event_kind", "field", "contains", "equals"};
    if (pred.contains("all") || pred.contains("any")) {
        const char* key = pred.contains("all") ? "all" : "any";
        if (pred.size() != 1) throw PredicateError(name, "composite must contain only '" +
                                                             std::string(key) + "'");
        if (!pred.at(key).is_array()) throw PredicateError(name, "'" + std::string(key) +
                                                                     "' must be an array");
        for (const auto& sub : pred.at(key)) validate_predicate(sub, name);
        return;
    }
    for (auto it = pred.begin(); it != pred.end(); ++it) {
        if (!kLeafKeys.count(it.key()))
            throw PredicateError(name, "unknown key '" + it.key() + "'");
    }
    if (pred.contains("event_kind"))
        cx::trace::event_kind_from_string(pred.at("event_kind").get<std::string>());
    if ((pred.contains("contains") || pred.contains("equals")) && !pred.contains("field"))
        throw PredicateError(name, "'contains'/'equals' require 'field'");
}

bool leaf_matches_event(const json& pred, const cx::trace::TraceEvent& e) {
    if (pred.contains("event_kind") &&
        cx::trace::to_string(e.kind) != pred.at("event_kind").get<std::string>())
        return false;
    if (pred.contains("field")) {
        const std::string field = pred.at("field").get<std::string>();
        if (!e.payload.contains(field)) return false;
        const json& value = e.payload.at(field);
        if (pred.contains("contains")) {
            if (!value.is_string()) return false;
            if (value.get<std::string>().find(pred.at("contains").get<std::string>()) ==
                std::string::npos)
                return false;
        }
        if (pred.contains("equals") && value != pred.at("equals")) return false;
    }
    return true;
}

bool predicate_matches(const json& pred, const std::vector<const cx::trace::TraceEvent*>& slice) {
    if (pred.contains("all")) {
        for (const auto& sub : pred.at("all"))
            if (!predicate_matches(sub, slice)) return false;
        return true;
    }
    if (pred.contains("any")) {
        for (const auto& sub : pred.at("any"))
            if (predicate_matches(sub, slice)) return true;
        return false;
    }
    for (const auto* e : slice)
        if (leaf_matches_event(pred, *e)) return true;
    return false;
}

}  // namespace

MilestoneOracle MilestoneOracle::from_json(const json& doc) {
    MilestoneOracle oracle;
    for (const auto& entry : doc.at("entrypoints")) {
        Entry e;
        e.ep_key = entry.at("entrypoint").get<std::string>();
        for (const auto& m : entry.at("milestones")) {
            Milestone milestone;
            milestone.id = m.at("id").get<std::string>();
            milestone.name = m.value("name", milestone.id);
            milestone.aligned = m.at("aligned");
            validate_predicate(milestone.aligned, e.ep_key + "/" + milestone.id + "/aligned");
            if (m.contains("partial")) {
                milestone.partial = m.at("partial");
                validate_predicate(*milestone.partial, e.ep_key + "/" + milestone.id + "/partial");
            }
            e.milestones.push_back(std::move(milestone));
        }
        oracle.entries.push_back(std::move(e));
    }
    return oracle;
}

MilestoneOracle MilestoneOracle::load(const std::string& path) {
    return from_json(json::parse(cx::util::read_file(path)));
}

json MilestoneMatrix::to_json() const {
    json out = json::object();
    for (const auto& [ep, cells] : rows) {
        json arr = json::array();
        for (const auto& c : cells)
            arr.push_back({{"id", c.id},
                           {"name", c.name},
                           {"status", analytics::to_string(c.status)},
                           {"glyph", status_glyph(c.status)}});
        out[ep] = std::move(arr);
    }
    return out;
}

std::string MilestoneMatrix::render() const {
    std::string out;
    for (const auto& [ep, cells] : rows) {
        out += ep + " ";
        for (const auto& c : cells) out += " " + c.id + ":" + status_glyph(c.status);
        out += "\n";
    }
    return out;
}

MilestoneMatrix milestone_alignment(const std::vector<cx::trace::TraceEvent>& events,
                                    const TraceIndex& idx, const MilestoneOracle& oracle) {
    MilestoneMatrix matrix;
    for (const auto& entry : oracle.entries) {
        // The entrypoint's slice: subgraph-scoped events plus every event
        // of an agent spawned on it.
        std::vector<const cx::trace::TraceEvent*> slice;
        for (const auto& e : events) {
            bool mine = false;
            if (e.payload.contains("entrypoint")) {
                auto ep = e.payload.at("entrypoint").get<cx::domain::EntryPoint>();
                mine = ep.key() == entry.ep_key;
            } else if (e.payload.contains("agent_id")) {
                mine = idx.ep_of_agent(e.payload.at("agent_id").get<std::string>()) == entry.ep_key;
            }
            if (mine) slice.push_back(&e);
        }

        std::vector<MilestoneMatrix::Cell> cells;
        for (const auto& m : entry.milestones) {
            MilestoneMatrix::Cell cell{m.id, m.name, MilestoneStatus::missing};
            if (predicate_matches(m.aligned, slice)) cell.status = MilestoneStatus::aligned;
            else if (m.partial && predicate_matches(*m.partial, slice))
                cell.status = MilestoneStatus::partial;
            cells.push_back(std::move(cell));
        }
        matrix.rows[entry.ep_key] = std::move(cells);
    }
    return matrix;
}

}  // namespace cx::analytics

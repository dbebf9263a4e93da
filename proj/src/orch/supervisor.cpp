#include "orch/supervisor.hpp"

#include <algorithm>

#include "util/fs.hpp"

namespace cx::orch {

using nlohmann::json;

void to_json(json& j, const Directive& v) {
    j = json{{"hypothesis", v.hypothesis},
             {"rationale", v.rationale},
             {"confidence", v.confidence},
             {"suggested_techniques", v.suggested_techniques}};
}

void from_json(const json& j, Directive& v) {
    v.hypothesis = j.value("hypothesis", std::string{});
    v.rationale = j.value("rationale", std::string{});
    v.confidence = j.value("confidence", 0.0);
    v.suggested_techniques = j.value("suggested_techniques", std::vector<std::string>{});
}

Directive parse_directive_response(const std::string& text) {
    Directive d;
    auto open = text.find('{');
    auto close = text.rfind('}');
    if (open != std::string::npos && close != std::string::npos && close > open) {
        json parsed = json::parse(text.substr(open, close - open + 1), nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) {
            from_json(parsed, d);
        }
    }
    if (d.hypothesis.empty()) {
        d.hypothesis = cx::util::trim(text);
        d.confidence = 0.0;
    }
    if (d.hypothesis.empty()) d.hypothesis = "continue prior approach";
    d.confidence = std::clamp(d.confidence, 0.0, 1.0);
    return d;
}

cx::agent::Fate parse_fate_response(const std::string& text) {
    if (text.find("EXTEND") != std::string::npos) return cx::agent::Fate::Extend;
    if (text.find("GIVEUP") != std::string::npos) return cx::agent::Fate::GiveUp;
    if (text.find("EXHAUSTED") != std::string::npos) return cx::agent::Fate::BudgetExhausted;
    return cx::agent::Fate::HandOff;
}

std::string render_history(const std::vector<GlobalStateRecord::Entry>& history) {
    std::string out;
    for (const auto& e : history) {
        out += "agent " + e.agent_id + ":\n";
        if (!e.failed_approaches.empty()) {
            out += "  failed approaches:\n";
            for (const auto& f : e.failed_approaches) out += "    - " + f + "\n";
        }
        if (!e.finding_summaries.empty()) {
            out += "  findings:\n";
            for (const auto& f : e.finding_summaries) out += "    - " + f + "\n";
        }
        if (!e.surface_notes.empty()) {
            out += "  surface explored:\n";
            for (const auto& s : e.surface_notes) out += "    - " + s + "\n";
        }
    }
    if (out.empty()) out = "(no prior exploration)";
    return out;
}

}  // namespace cx::orch

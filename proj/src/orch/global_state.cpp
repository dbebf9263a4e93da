#include "orch/global_state.hpp"

namespace cx::orch {

void GlobalStateRecord::append(Entry entry) {
    std::lock_guard lock(mu_);
    entries_.push_back(std::move(entry));
}

std::vector<GlobalStateRecord::Entry> GlobalStateRecord::slice(
    const std::string& entrypoint_key) const {
    std::lock_guard lock(mu_);
    std::vector<Entry> out;
    for (const auto& e : entries_)
        if (e.entrypoint_key == entrypoint_key) out.push_back(e);
    return out;
}

std::size_t GlobalStateRecord::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

std::vector<GlobalStateRecord::Entry> GlobalStateRecord::all() const {
    std::lock_guard lock(mu_);
    return entries_;
}

void to_json(nlohmann::json& j, const GlobalStateRecord::Entry& e) {
    j = nlohmann::json{{"entrypoint", e.entrypoint_key},
                       {"agent_id", e.agent_id},
                       {"failed_approaches", e.failed_approaches},
                       {"finding_summaries", e.finding_summaries},
                       {"surface_notes", e.surface_notes}};
}

}  // namespace cx::orch

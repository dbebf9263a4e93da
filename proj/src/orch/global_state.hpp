#pragma once

#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cx::orch {

// Append-only exploration history shared across a run. Entries are only
// ever appended; every terminated agent contributes exactly one.
class GlobalStateRecord {
public:
    struct Entry {
        std::string entrypoint_key;
        std::string agent_id;
        std::vector<std::string> failed_approaches;
        std::vector<std::string> finding_summaries;
        std::vector<std::string> surface_notes;
    };

    void append(Entry entry);
    std::vector<Entry> slice(const std::string& entrypoint_key) const;
    std::size_t size() const;
    std::vector<Entry> all() const;

private:
    mutable std::mutex mu_;
    std::vector<Entry> entries_;
};

void to_json(nlohmann::json& j, const GlobalStateRecord::Entry& e);

}  // namespace cx::orch

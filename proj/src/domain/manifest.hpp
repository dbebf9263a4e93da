#pragma once

#include "domain/types.hpp"

namespace cx::domain {

// Ground truth: one flag per (host, port). On disk this is a JSON array of
// {host, port, flag, challenge_name}.
class GroundTruth {
public:
    struct Challenge {
        std::string flag;
        std::string challenge_name;
    };

    GroundTruth() = default;
    static GroundTruth from_json(const json& arr);
    static GroundTruth load(const std::string& path);

    void add(const std::string& host, int port, std::string flag, std::string name);
    std::size_t challenge_count() const { return by_key_.size(); }
    const std::map<std::string, Challenge>& challenges() const { return by_key_; }
    const Challenge* find(const EntryPoint& ep) const;

    json to_json() const;

private:
    std::map<std::string, Challenge> by_key_;  // "host:port" -> challenge
};

// True iff the trimmed value equals the manifest flag for that entrypoint;
// unknown entrypoints are false. Total function.
bool check_flag(const std::string& value, const EntryPoint& ep, const GroundTruth& manifest);

}  // namespace cx::domain

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "domain/money.hpp"

namespace cx::domain {

using json = nlohmann::json;

enum class ServiceKind { http, ftp, ssh, tcp_unknown };
std::string to_string(ServiceKind k);
ServiceKind service_kind_from_string(const std::string& s);

// Total order: Critical > High > Medium > Low > Info.
enum class Severity { Info = 0, Low = 1, Medium = 2, High = 3, Critical = 4 };
std::string to_string(Severity s);
// Case-insensitive; throws std::invalid_argument on unknown labels.
Severity severity_from_string(const std::string& s);
// Lenient variant for untrusted extractor output: unknown → nullopt.
std::optional<Severity> try_severity_from_string(const std::string& s);

enum class ExitReason { Solved, HandOff, GiveUp, BudgetExhausted, Error };
std::string to_string(ExitReason r);
ExitReason exit_reason_from_string(const std::string& s);

enum class SubgraphOutcome { Solved, DeadEnd, MaxAgentsReached, BudgetExhausted };
std::string to_string(SubgraphOutcome o);
SubgraphOutcome outcome_from_string(const std::string& s);

// A reachable host:port with fingerprinted service metadata.
struct EntryPoint {
    std::string host;
    int port = 0;
    ServiceKind service_kind = ServiceKind::tcp_unknown;
    std::string banner;  // first response bytes, UTF-8-lossy, capped

    std::string key() const { return host + ":" + std::to_string(port); }
    bool operator==(const EntryPoint&) const = default;
};

struct Finding {
    std::string finding_id;
    std::string agent_id;
    EntryPoint entrypoint;
    std::string title;
    std::string description;
    Severity severity = Severity::Info;
    double confidence = 0.0;  // in [0,1]
    std::vector<std::string> evidence_refs;  // paths inside the agent workspace
    std::vector<std::string> endpoints;
    std::optional<std::vector<std::string>> credentials;

    bool operator==(const Finding&) const = default;
};

struct FlagSubmission {
    std::string agent_id;
    EntryPoint entrypoint;
    std::string value;
    bool correct = false;
    std::int64_t wall_clock_ms = 0;
    int round_index = 0;

    bool operator==(const FlagSubmission&) const = default;
};

struct AgentRecord {
    std::string agent_id;
    int team_index = 0;  // position in the chain
    EntryPoint entrypoint;
    int rounds = 0;  // model-interaction turns
    Money cost;
    int extensions_granted = 0;
    ExitReason exit_reason = ExitReason::Error;
    std::vector<std::string> failed_approaches;
    std::vector<Finding> findings;
    std::vector<std::string> reflection_notes;

    bool operator==(const AgentRecord&) const = default;
};

struct SubgraphResult {
    EntryPoint entrypoint;
    SubgraphOutcome outcome = SubgraphOutcome::DeadEnd;
    std::vector<AgentRecord> agents;
    std::int64_t total_rounds = 0;
    Money total_cost;
    std::vector<FlagSubmission> flag_submissions;
    std::int64_t started_ms = 0;
    std::int64_t ended_ms = 0;

    bool operator==(const SubgraphResult&) const = default;
};

struct ModelPricing {
    Money input_per_mtok;   // dollars per million input tokens
    Money output_per_mtok;  // dollars per million output tokens
    bool operator==(const ModelPricing&) const = default;
};

struct RunConfig {
    int parallel_subgraphs = 4;
    int team_size = 7;
    Money base_budget = Money::from_micros(300'000);  // $0.30
    int max_extensions = 4;
    // Fractions of the budget cap, parts-per-million; strictly increasing.
    std::vector<std::int64_t> reflection_thresholds_ppm = {500'000, 800'000};
    int critic_after_failures = 3;
    int dead_end_attempts = 3;
    Severity dead_end_min_severity = Severity::Medium;
    std::map<std::string, ModelPricing> pricing_table = {
        {"scripted", {Money::from_micros(1'000'000'000), Money::from_micros(1'000'000'000)}}};
    std::string ground_truth_manifest;  // path, may be empty
    json scan_targets = json::array();  // schema owned by recon

    // Execution plumbing, not part of the paper-visible hyperparameters.
    std::string model = "scripted";
    std::string backend_kind = "scripted";  // "scripted" | "wire"
    std::string playbook;                   // path; empty → built-in finish-only playbook
    std::string sandbox_kind = "mock";      // "mock" | "container"
    std::string container_image = "explorer-tools:latest";
    std::string engine_endpoint = "/var/run/docker.sock";
    std::string simenv_manifest;  // when set, run hosts the simenv in-process
    std::string prompts_dir;      // template overrides; empty → built-ins
    std::uint64_t seed = 0;

    std::vector<double> reflection_thresholds() const {
        std::vector<double> out;
        for (auto ppm : reflection_thresholds_ppm) out.push_back(static_cast<double>(ppm) / 1e6);
        return out;
    }
};

// Raised by validate_config; `key` names the offending entry.
struct ConfigError : std::runtime_error {
    enum class Kind { MissingKey, OutOfRange, NonMonotonicThresholds, Parse };
    Kind kind;
    std::string key;
    ConfigError(Kind k, std::string key_, const std::string& msg)
        : std::runtime_error(msg), kind(k), key(std::move(key_)) {}
};

// JSON codecs (lossless round trip; field names are the wire contract).
void to_json(json& j, const EntryPoint& v);
void from_json(const json& j, EntryPoint& v);
void to_json(json& j, const Finding& v);
void from_json(const json& j, Finding& v);
void to_json(json& j, const FlagSubmission& v);
void from_json(const json& j, FlagSubmission& v);
void to_json(json& j, const AgentRecord& v);
void from_json(const json& j, AgentRecord& v);
void to_json(json& j, const SubgraphResult& v);
void from_json(const json& j, SubgraphResult& v);
void to_json(json& j, const ModelPricing& v);
void from_json(const json& j, ModelPricing& v);
void to_json(json& j, const RunConfig& v);
void from_json(const json& j, RunConfig& v);

}  // namespace cx::domain

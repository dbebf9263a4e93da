#include "domain/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace cx::domain {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Money money_from_json(const json& j) {
    if (j.is_string()) return Money::parse(j.get<std::string>());
    return Money::from_dollars(j.get<double>());
}

}  // namespace

std::string to_string(ServiceKind k) {
    switch (k) {
        case ServiceKind::http: return "http";
        case ServiceKind::ftp: return "ftp";
        case ServiceKind::ssh: return "ssh";
        case ServiceKind::tcp_unknown: return "tcp_unknown";
    }
    return "tcp_unknown";
}

ServiceKind service_kind_from_string(const std::string& s) {
    if (s == "http") return ServiceKind::http;
    if (s == "ftp") return ServiceKind::ftp;
    if (s == "ssh") return ServiceKind::ssh;
    if (s == "tcp_unknown") return ServiceKind::tcp_unknown;
    throw std::invalid_argument("unknown service kind: " + s);
}

std::string to_string(Severity s) {
    switch (s) {
        case Severity::Critical: return "Critical";
        case Severity::High: return "High";
        case Severity::Medium: return "Medium";
        case Severity::Low: return "Low";
        case Severity::Info: return "Info";
    }
    return "Info";
}

std::optional<Severity> try_severity_from_string(const std::string& s) {
    std::string l = lower(s);
    if (l == "critical") return Severity::Critical;
    if (l == "high") return Severity::High;
    if (l == "medium" || l == "med") return Severity::Medium;
    if (l == "low") return Severity::Low;
    if (l == "info" || l == "informational") return Severity::Info;
    return std::nullopt;
}

Severity severity_from_string(const std::string& s) {
    if (auto v = try_severity_from_string(s)) return *v;
    throw std::invalid_argument("unknown severity: " + s);
}

std::string to_string(ExitReason r) {
    switch (r) {
        case ExitReason::Solved: return "Solved";
        case ExitReason::HandOff: return "HandOff";
        case ExitReason::GiveUp: return "GiveUp";
        case ExitReason::BudgetExhausted: return "BudgetExhausted";
        case ExitReason::Error: return "Error";
    }
    return "Error";
}

ExitReason exit_reason_from_string(const std::string& s) {
    if (s == "Solved") return ExitReason::Solved;
    if (s == "HandOff") return ExitReason::HandOff;
    if (s == "GiveUp") return ExitReason::GiveUp;
    if (s == "BudgetExhausted") return ExitReason::BudgetExhausted;
    if (s == "Error") return ExitReason::Error;
    throw std::invalid_argument("unknown exit reason: " + s);
}

std::string to_string(SubgraphOutcome o) {
    switch (o) {
        case SubgraphOutcome::Solved: return "Solved";
        case SubgraphOutcome::DeadEnd: return "DeadEnd";
        case SubgraphOutcome::MaxAgentsReached: return "MaxAgentsReached";
        case SubgraphOutcome::BudgetExhausted: return "BudgetExhausted";
    }
    return "DeadEnd";
}

SubgraphOutcome outcome_from_string(const std::string& s) {
    if (s == "Solved") return SubgraphOutcome::Solved;
    if (s == "DeadEnd") return SubgraphOutcome::DeadEnd;
    if (s == "MaxAgentsReached") return SubgraphOutcome::MaxAgentsReached;
    if (s == "BudgetExhausted") return SubgraphOutcome::BudgetExhausted;
    throw std::invalid_argument("unknown outcome: " + s);
}

void to_json(json& j, const EntryPoint& v) {
    j = json{{"host", v.host},
             {"port", v.port},
             {"service_kind", to_string(v.service_kind)},
             {"banner", v.banner}};
}

void from_json(const json& j, EntryPoint& v) {
    v.host = j.at("host").get<std::string>();
    v.port = j.at("port").get<int>();
    v.service_kind = service_kind_from_string(j.at("service_kind").get<std::string>());
    v.banner = j.value("banner", std::string{});
}

void to_json(json& j, const Finding& v) {
    j = json{{"finding_id", v.finding_id},
             {"agent_id", v.agent_id},
             {"entrypoint", v.entrypoint},
             {"title", v.title},
             {"description", v.description},
             {"severity", to_string(v.severity)},
             {"confidence", v.confidence},
             {"evidence_refs", v.evidence_refs},
             {"endpoints", v.endpoints}};
    if (v.credentials) j["credentials"] = *v.credentials;
}

void from_json(const json& j, Finding& v) {
    v.finding_id = j.at("finding_id").get<std::string>();
    v.agent_id = j.at("agent_id").get<std::string>();
    v.entrypoint = j.at("entrypoint").get<EntryPoint>();
    v.title = j.at("title").get<std::string>();
    v.description = j.value("description", std::string{});
    v.severity = severity_from_string(j.at("severity").get<std::string>());
    v.confidence = j.at("confidence").get<double>();
    v.evidence_refs = j.value("evidence_refs", std::vector<std::string>{});
    v.endpoints = j.value("endpoints", std::vector<std::string>{});
    if (j.contains("credentials")) v.credentials = j.at("credentials").get<std::vector<std::string>>();
    else v.credentials.reset();
}

void to_json(json& j, const FlagSubmission& v) {
    j = json{{"agent_id", v.agent_id},
             {"entrypoint", v.entrypoint},
             {"value", v.value},
             {"correct", v.correct},
             {"wall_clock", v.wall_clock_ms},
             {"round_index", v.round_index}};
}

void from_json(const json& j, FlagSubmission& v) {
    v.agent_id = j.at("agent_id").get<std::string>();
    v.entrypoint = j.at("entrypoint").get<EntryPoint>();
    v.value = j.at("value").get<std::string>();
    v.correct = j.at("correct").get<bool>();
    v.wall_clock_ms = j.at("wall_clock").get<std::int64_t>();
    v.round_index = j.at("round_index").get<int>();
}

void to_json(json& j, const AgentRecord& v) {
    j = json{{"agent_id", v.agent_id},
             {"team_index", v.team_index},
             {"entrypoint", v.entrypoint},
             {"rounds", v.rounds},
             {"cost", v.cost.dollars()},
             {"extensions_granted", v.extensions_granted},
             {"exit_reason", to_string(v.exit_reason)},
             {"failed_approaches", v.failed_approaches},
             {"findings", v.findings},
             {"reflection_notes", v.reflection_notes}};
}

void from_json(const json& j, AgentRecord& v) {
    v.agent_id = j.at("agent_id").get<std::string>();
    v.team_index = j.at("team_index").get<int>();
    v.entrypoint = j.at("entrypoint").get<EntryPoint>();
    v.rounds = j.at("rounds").get<int>();
    v.cost = money_from_json(j.at("cost"));
    v.extensions_granted = j.at("extensions_granted").get<int>();
    v.exit_reason = exit_reason_from_string(j.at("exit_reason").get<std::string>());
    v.failed_approaches = j.value("failed_approaches", std::vector<std::string>{});
    v.findings = j.value("findings", std::vector<Finding>{});
    v.reflection_notes = j.value("reflection_notes", std::vector<std::string>{});
}

void to_json(json& j, const SubgraphResult& v) {
    j = json{{"entrypoint", v.entrypoint},
             {"outcome", to_string(v.outcome)},
             {"agents", v.agents},
             {"total_rounds", v.total_rounds},
             {"total_cost", v.total_cost.dollars()},
             {"flag_submissions", v.flag_submissions},
             {"started", v.started_ms},
             {"ended", v.ended_ms}};
}

void from_json(const json& j, SubgraphResult& v) {
    v.entrypoint = j.at("entrypoint").get<EntryPoint>();
    v.outcome = outcome_from_string(j.at("outcome").get<std::string>());
    v.agents = j.value("agents", std::vector<AgentRecord>{});
    v.total_rounds = j.at("total_rounds").get<std::int64_t>();
    v.total_cost = money_from_json(j.at("total_cost"));
    v.flag_submissions = j.value("flag_submissions", std::vector<FlagSubmission>{});
    v.started_ms = j.value("started", std::int64_t{0});
    v.ended_ms = j.value("ended", std::int64_t{0});
}

void to_json(json& j, const ModelPricing& v) {
    j = json{{"input_per_mtok", v.input_per_mtok.dollars()},
             {"output_per_mtok", v.output_per_mtok.dollars()}};
}

void from_json(const json& j, ModelPricing& v) {
    v.input_per_mtok = money_from_json(j.at("input_per_mtok"));
    v.output_per_mtok = money_from_json(j.at("output_per_mtok"));
}

void to_json(json& j, const RunConfig& v) {
    j = json{{"parallel_subgraphs", v.parallel_subgraphs},
             {"team_size", v.team_size},
             {"base_budget", v.base_budget.dollars()},
             {"max_extensions", v.max_extensions},
             {"reflection_thresholds", v.reflection_thresholds()},
             {"critic_after_failures", v.critic_after_failures},
             {"dead_end_attempts", v.dead_end_attempts},
             {"dead_end_min_severity", to_string(v.dead_end_min_severity)},
             {"pricing_table", v.pricing_table},
             {"ground_truth_manifest", v.ground_truth_manifest},
             {"scan_targets", v.scan_targets},
             {"model", v.model},
             {"backend_kind", v.backend_kind},
             {"playbook", v.playbook},
             {"sandbox_kind", v.sandbox_kind},
             {"container_image", v.container_image},
             {"engine_endpoint", v.engine_endpoint},
             {"simenv_manifest", v.simenv_manifest},
             {"prompts_dir", v.prompts_dir},
             {"seed", v.seed}};
}

void from_json(const json& j, RunConfig& v) {
    v = RunConfig{};
    if (j.contains("parallel_subgraphs")) v.parallel_subgraphs = j.at("parallel_subgraphs").get<int>();
    if (j.contains("team_size")) v.team_size = j.at("team_size").get<int>();
    if (j.contains("base_budget")) v.base_budget = money_from_json(j.at("base_budget"));
    if (j.contains("max_extensions")) v.max_extensions = j.at("max_extensions").get<int>();
    if (j.contains("reflection_thresholds")) {
        v.reflection_thresholds_ppm.clear();
        for (const auto& f : j.at("reflection_thresholds"))
            v.reflection_thresholds_ppm.push_back(std::llround(f.get<double>() * 1e6));
    }
    if (j.contains("critic_after_failures")) v.critic_after_failures = j.at("critic_after_failures").get<int>();
    if (j.contains("dead_end_attempts")) v.dead_end_attempts = j.at("dead_end_attempts").get<int>();
    if (j.contains("dead_end_min_severity"))
        v.dead_end_min_severity = severity_from_string(j.at("dead_end_min_severity").get<std::string>());
    if (j.contains("pricing_table"))
        v.pricing_table = j.at("pricing_table").get<std::map<std::string, ModelPricing>>();
    if (j.contains("ground_truth_manifest")) v.ground_truth_manifest = j.at("ground_truth_manifest").get<std::string>();
    if (j.contains("scan_targets")) v.scan_targets = j.at("scan_targets");
    if (j.contains("model")) v.model = j.at("model").get<std::string>();
    if (j.contains("backend_kind")) v.backend_kind = j.at("backend_kind").get<std::string>();
    if (j.contains("playbook")) v.playbook = j.at("playbook").get<std::string>();
    if (j.contains("sandbox_kind")) v.sandbox_kind = j.at("sandbox_kind").get<std::string>();
    if (j.contains("container_image")) v.container_image = j.at("container_image").get<std::string>();
    if (j.contains("engine_endpoint")) v.engine_endpoint = j.at("engine_endpoint").get<std::string>();
    if (j.contains("simenv_manifest")) v.simenv_manifest = j.at("simenv_manifest").get<std::string>();
    if (j.contains("prompts_dir")) v.prompts_dir = j.at("prompts_dir").get<std::string>();
    if (j.contains("seed")) v.seed = j.at("seed").get<std::uint64_t>();
}

}  // namespace cx::domain

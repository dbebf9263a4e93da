#pragma once

#include "analytics/trace_index.hpp"

namespace cx::analytics {

// Table-presentation rounding: half-up on the absolute value.
std::string format_fixed(double value, int decimals);
// "3.1×" / "—" when undefined.
std::string format_ratio(std::optional<double> ratio);
// "90.00" / "—" when undefined.
std::string format_opt(std::optional<double> value, int decimals);

struct OutcomeClassification {
    int total_challenges = 0;
    int found = 0;    // challenges with any submission
    int correct = 0;  // challenges with a correct submission (TP)
    int wrong = 0;    // challenges with only incorrect submissions (FP)
    int fn = 0;       // challenges with no correct submission
    std::optional<double> precision_pct;
    double recall_pct = 0.0;

    nlohmann::json to_json() const;
};
// Challenge set comes from the recorded run (RunStarted) unless a ground
// truth is supplied.
OutcomeClassification classify_outcomes(const TraceIndex& idx,
                                        const cx::domain::GroundTruth* manifest = nullptr);

struct DistStats {
    std::vector<std::int64_t> values;
    std::optional<double> mean;
    std::optional<double> median;
    std::optional<double> p90;  // nearest-rank

    nlohmann::json to_json() const;
};
DistStats dist_stats(std::vector<std::int64_t> values);

struct RoundDistributions {
    DistStats solved;
    DistStats dead_end;
};
RoundDistributions round_distributions(const TraceIndex& idx);

std::optional<std::int64_t> ttff_ms(const TraceIndex& idx);

struct PersistenceReport {
    std::optional<double> solved_rounds_mean;
    std::optional<double> deadend_rounds_mean;
    std::optional<double> solved_cost_mean;
    std::optional<double> deadend_cost_mean;
    std::optional<double> round_ratio;
    std::optional<double> cost_ratio;

    nlohmann::json to_json() const;  // ratios rendered one decimal + ×
};
PersistenceReport persistence(const TraceIndex& idx);

struct ExitBreakdown {
    std::map<std::string, int> counts;
    std::map<std::string, double> fractions;  // sum to 1 when any agent exited
    int total = 0;

    nlohmann::json to_json() const;
};
ExitBreakdown exit_breakdown(const TraceIndex& idx);

struct DiscoverySignal {
    std::optional<double> findings_per_entrypoint;  // mean over all entrypoints
    std::optional<double> solved_findings;          // mean over solved entrypoints
    std::optional<double> deadend_findings;         // mean over dead-end entrypoints
    std::optional<double> signal_rate_pct;  // dead-end entrypoints with >=1 finding

    nlohmann::json to_json() const;
};
DiscoverySignal discovery_signal(const TraceIndex& idx);

// Exact counts per severity over all recorded findings.
std::map<std::string, int> severity_histogram(const TraceIndex& idx);

struct EscalationReport {
    int entrypoints = 0;
    int total_agents = 0;
    std::optional<double> inflation;  // total agents / entrypoints
    std::optional<double> avg_agents_solved;
    std::optional<double> avg_agents_deadend;
    std::optional<double> avg_rounds_per_entrypoint;
    std::optional<double> avg_rounds_per_agent;
    std::optional<double> avg_cost;  // per entrypoint
    std::optional<double> rounds_per_cost;

    nlohmann::json to_json() const;
};
EscalationReport escalation(const TraceIndex& idx);

struct EvidenceSummary {
    int agents_with_evidence = 0;
    int total_files = 0;

    nlohmann::json to_json() const;
};
EvidenceSummary evidence_summary(const TraceIndex& idx);

// One performance-table row: flag analysis, efficiency, complexity.
struct RunSummary {
    OutcomeClassification classification;
    std::optional<double> avg_rounds;  // per entrypoint
    std::optional<double> avg_cost;
    int total_agents = 0;
    std::optional<double> avg_time_s;  // mean subgraph wall-clock
    std::optional<double> ttff_s;

    nlohmann::json to_json() const;
};
RunSummary run_summary(const TraceIndex& idx, const cx::domain::GroundTruth* manifest = nullptr);

}  // namespace cx::analytics

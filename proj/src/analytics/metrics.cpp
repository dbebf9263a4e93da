#include "analytics/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace cx::analytics {

using nlohmann::json;

std::string format_fixed(double value, int decimals) {
    long double scale = std::pow(10.0L, decimals);
    long double scaled = static_cast<long double>(std::abs(value)) * scale;
    long long rounded = static_cast<long long>(std::floor(scaled + 0.5L));
    long double back = static_cast<long double>(rounded) / scale;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lf", decimals, value < 0 ? -back : back);
    return buf;
}

std::string format_ratio(std::optional<double> ratio) {
    if (!ratio) return "—";
    return format_fixed(*ratio, 1) + "×";
}

std::string format_opt(std::optional<double> value, int decimals) {
    if (!value) return "—";
    return format_fixed(*value, decimals);
}

namespace {

std::optional<double> mean_of(const std::vector<double>& values) {
    if (values.empty()) return std::nullopt;
    double sum = 0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

json opt_json(std::optional<double> v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json OutcomeClassification::to_json() const {
    return json{{"total_challenges", total_challenges},
                {"found", found},
                {"correct", correct},
                {"wrong", wrong},
                {"tp", correct},
                {"fp", wrong},
                {"fn", fn},
                {"precision_pct", opt_json(precision_pct)},
                {"precision_str", format_opt(precision_pct, 2)},
                {"recall_pct", recall_pct},
                {"recall_str", format_fixed(recall_pct, 2)},
                {"found_str", std::to_string(found) + "/" + std::to_string(total_challenges)}};
}

OutcomeClassification classify_outcomes(const TraceIndex& idx,
                                        const cx::domain::GroundTruth* manifest) {
    std::vector<std::string> challenges;
    if (manifest) {
        for (const auto& [key, _] : manifest->challenges()) challenges.push_back(key);
    } else {
        challenges = idx.challenge_keys;
    }

    OutcomeClassification out;
    out.total_challenges = static_cast<int>(challenges.size());
    std::set<std::string> challenge_set(challenges.begin(), challenges.end());

    std::map<std::string, bool> any_submission;   // key -> any
    std::map<std::string, bool> any_correct;
    for (const auto& s : idx.submissions) {
        if (!challenge_set.count(s.ep_key)) continue;
        any_submission[s.ep_key] = true;
        if (s.correct) any_correct[s.ep_key] = true;
    }
    for (const auto& key : challenge_set) {
        bool submitted = any_submission.count(key) > 0;
        bool correct = any_correct.count(key) > 0;
        if (submitted) ++out.found;
        if (correct) ++out.correct;
        else if (submitted) ++out.wrong;
    }
    out.fn = out.total_challenges - out.correct;
    if (out.found > 0)
        out.precision_pct = 100.0 * out.correct / out.found;
    out.recall_pct =
        out.total_challenges > 0 ? 100.0 * out.correct / out.total_challenges : 0.0;
    return out;
}

json DistStats::to_json() const {
    return json{{"values", values},
                {"mean", opt_json(mean)},
                {"median", opt_json(median)},
                {"p90", opt_json(p90)}};
}

DistStats dist_stats(std::vector<std::int64_t> values) {
    DistStats s;
    s.values = std::move(values);
    if (s.values.empty()) return s;
    std::vector<std::int64_t> sorted = s.values;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0;
    for (auto v : sorted) sum += static_cast<double>(v);
    s.mean = sum / static_cast<double>(sorted.size());
    std::size_t n = sorted.size();
    s.median = n % 2 == 1 ? static_cast<double>(sorted[n / 2])
                          : (static_cast<double>(sorted[n / 2 - 1]) +
                             static_cast<double>(sorted[n / 2])) /
                                2.0;
    std::size_t rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(n)));
    s.p90 = static_cast<double>(sorted[std::max<std::size_t>(rank, 1) - 1]);
    return s;
}

RoundDistributions round_distributions(const TraceIndex& idx) {
    std::vector<std::int64_t> solved, deadend;
    for (const auto& s : idx.subgraphs) {
        (s.solved() ? solved : deadend).push_back(s.total_rounds);
    }
    return RoundDistributions{dist_stats(std::move(solved)), dist_stats(std::move(deadend))};
}

std::optional<std::int64_t> ttff_ms(const TraceIndex& idx) {
    if (idx.run_started_ms < 0) return std::nullopt;
    for (const auto& s : idx.submissions) {
        if (s.correct) return s.wall_clock_ms - idx.run_started_ms;
    }
    return std::nullopt;
}

json PersistenceReport::to_json() const {
    return json{{"solved_rounds_mean", opt_json(solved_rounds_mean)},
                {"deadend_rounds_mean", opt_json(deadend_rounds_mean)},
                {"solved_cost_mean", opt_json(solved_cost_mean)},
                {"deadend_cost_mean", opt_json(deadend_cost_mean)},
                {"round_persistence_ratio", format_ratio(round_ratio)},
                {"cost_persistence_ratio", format_ratio(cost_ratio)},
                {"solved_rounds_str", format_opt(solved_rounds_mean, 2)},
                {"deadend_rounds_str", format_opt(deadend_rounds_mean, 2)},
                {"solved_cost_str", format_opt(solved_cost_mean, 2)},
                {"deadend_cost_str", format_opt(deadend_cost_mean, 2)}};
}

PersistenceReport persistence(const TraceIndex& idx) {
    std::vector<double> solved_rounds, deadend_rounds, solved_cost, deadend_cost;
    for (const auto& s : idx.subgraphs) {
        if (s.solved()) {
            solved_rounds.push_back(static_cast<double>(s.total_rounds));
            solved_cost.push_back(s.total_cost.dollars());
        } else {
            deadend_rounds.push_back(static_cast<double>(s.total_rounds));
            deadend_cost.push_back(s.total_cost.dollars());
        }
    }
    PersistenceReport r;
    r.solved_rounds_mean = mean_of(solved_rounds);
    r.deadend_rounds_mean = mean_of(deadend_rounds);
    r.solved_cost_mean = mean_of(solved_cost);
    r.deadend_cost_mean = mean_of(deadend_cost);
    if (r.solved_rounds_mean && r.deadend_rounds_mean && *r.solved_rounds_mean > 0)
        r.round_ratio = *r.deadend_rounds_mean / *r.solved_rounds_mean;
    if (r.solved_cost_mean && r.deadend_cost_mean && *r.solved_cost_mean > 0)
        r.cost_ratio = *r.deadend_cost_mean / *r.solved_cost_mean;
    return r;
}

json ExitBreakdown::to_json() const {
    return json{{"counts", counts}, {"fractions", fractions}, {"total", total}};
}

ExitBreakdown exit_breakdown(const TraceIndex& idx) {
    ExitBreakdown out;
    for (const auto& a : idx.agents) {
        ++out.counts[cx::domain::to_string(a.exit_reason)];
        ++out.total;
    }
    if (out.total > 0) {
        for (const auto& [reason, count] : out.counts)
            out.fractions[reason] = static_cast<double>(count) / out.total;
    }
    return out;
}

json DiscoverySignal::to_json() const {
    return json{{"findings_per_entrypoint", opt_json(findings_per_entrypoint)},
                {"solved_findings", opt_json(solved_findings)},
                {"deadend_findings", opt_json(deadend_findings)},
                {"signal_rate_pct", opt_json(signal_rate_pct)},
                {"findings_per_entrypoint_str", format_opt(findings_per_entrypoint, 2)},
                {"solved_findings_str", format_opt(solved_findings, 2)},
                {"deadend_findings_str", format_opt(deadend_findings, 2)},
                {"signal_rate_str",
                 signal_rate_pct ? format_fixed(*signal_rate_pct, 1) + "%" : "—"}};
}

DiscoverySignal discovery_signal(const TraceIndex& idx) {
    std::map<std::string, int> per_ep;
    for (const auto& f : idx.findings) ++per_ep[f.entrypoint.key()];

    std::vector<double> all, solved, deadend;
    int deadend_with_signal = 0, deadend_count = 0;
    for (const auto& s : idx.subgraphs) {
        double count = per_ep.count(s.entrypoint.key())
                           ? static_cast<double>(per_ep[s.entrypoint.key()])
                           : 0.0;
        all.push_back(count);
        if (s.solved()) {
            solved.push_back(count);
        } else {
            deadend.push_back(count);
            ++deadend_count;
            if (count > 0) ++deadend_with_signal;
        }
    }
    DiscoverySignal out;
    out.findings_per_entrypoint = mean_of(all);
    out.solved_findings = mean_of(solved);
    out.deadend_findings = mean_of(deadend);
    if (deadend_count > 0)
        out.signal_rate_pct = 100.0 * deadend_with_signal / deadend_count;
    return out;
}

std::map<std::string, int> severity_histogram(const TraceIndex& idx) {
    std::map<std::string, int> counts{{"Critical", 0}, {"High", 0}, {"Medium", 0},
                                      {"Low", 0},      {"Info", 0}};
    for (const auto& f : idx.findings) ++counts[cx::domain::to_string(f.severity)];
    return counts;
}

json EscalationReport::to_json() const {
    return json{{"entrypoints", entrypoints},
                {"total_agents", total_agents},
                {"inflation", opt_json(inflation)},
                {"inflation_str", format_opt(inflation, 3)},
                {"avg_agents_solved", opt_json(avg_agents_solved)},
                {"avg_agents_solved_str", format_opt(avg_agents_solved, 3)},
                {"avg_agents_deadend", opt_json(avg_agents_deadend)},
                {"avg_agents_deadend_str", format_opt(avg_agents_deadend, 3)},
                {"avg_rounds_per_entrypoint", opt_json(avg_rounds_per_entrypoint)},
                {"avg_rounds_per_entrypoint_str", format_opt(avg_rounds_per_entrypoint, 3)},
                {"avg_rounds_per_agent", opt_json(avg_rounds_per_agent)},
                {"avg_rounds_per_agent_str", format_opt(avg_rounds_per_agent, 2)},
                {"avg_cost", opt_json(avg_cost)},
                {"avg_cost_str", format_opt(avg_cost, 3)},
                {"rounds_per_cost", opt_json(rounds_per_cost)},
                {"rounds_per_cost_str", format_opt(rounds_per_cost, 3)}};
}

EscalationReport escalation(const TraceIndex& idx) {
    EscalationReport r;
    r.entrypoints = static_cast<int>(idx.subgraphs.size());
    std::int64_t total_rounds = 0;
    double total_cost = 0;
    std::vector<double> agents_solved, agents_deadend;
    for (const auto& s : idx.subgraphs) {
        r.total_agents += s.agents;
        total_rounds += s.total_rounds;
        total_cost += s.total_cost.dollars();
        (s.solved() ? agents_solved : agents_deadend).push_back(static_cast<double>(s.agents));
    }
    if (r.entrypoints > 0) {
        r.inflation = static_cast<double>(r.total_agents) / r.entrypoints;
        r.avg_rounds_per_entrypoint = static_cast<double>(total_rounds) / r.entrypoints;
        r.avg_cost = total_cost / r.entrypoints;
    }
    if (r.total_agents > 0)
        r.avg_rounds_per_agent = static_cast<double>(total_rounds) / r.total_agents;
    r.avg_agents_solved = mean_of(agents_solved);
    r.avg_agents_deadend = mean_of(agents_deadend);
    if (r.avg_rounds_per_entrypoint && r.avg_cost && *r.avg_cost > 0)
        r.rounds_per_cost = *r.avg_rounds_per_entrypoint / *r.avg_cost;
    return r;
}

json EvidenceSummary::to_json() const {
    return json{{"agents_with_evidence", agents_with_evidence}, {"total_files", total_files}};
}

EvidenceSummary evidence_summary(const TraceIndex& idx) {
    EvidenceSummary out;
    for (const auto& [agent, files] : idx.evidence_files) {
        if (files.empty()) continue;
        ++out.agents_with_evidence;
        out.total_files += static_cast<int>(files.size());
    }
    return out;
}

json RunSummary::to_json() const {
    json j = classification.to_json();
    j["avg_rounds"] = opt_json(avg_rounds);
    j["avg_rounds_str"] = format_opt(avg_rounds, 2);
    j["avg_cost"] = opt_json(avg_cost);
    j["avg_cost_str"] = format_opt(avg_cost, 2);
    j["total_agents"] = total_agents;
    j["avg_time_s"] = opt_json(avg_time_s);
    j["avg_time_str"] = format_opt(avg_time_s, 2);
    j["ttff_s"] = opt_json(ttff_s);
    return j;
}

RunSummary run_summary(const TraceIndex& idx, const cx::domain::GroundTruth* manifest) {
    RunSummary out;
    out.classification = classify_outcomes(idx, manifest);
    std::vector<double> rounds, costs, times;
    for (const auto& s : idx.subgraphs) {
        rounds.push_back(static_cast<double>(s.total_rounds));
        costs.push_back(s.total_cost.dollars());
        times.push_back(static_cast<double>(s.ended_ms - s.started_ms) / 1000.0);
        out.total_agents += s.agents;
    }
    out.avg_rounds = mean_of(rounds);
    out.avg_cost = mean_of(costs);
    out.avg_time_s = mean_of(times);
    if (auto t = ttff_ms(idx)) out.ttff_s = static_cast<double>(*t) / 1000.0;
    return out;
}

}  // namespace cx::analytics

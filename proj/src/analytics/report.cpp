#include "analytics/report.hpp"

#include <filesystem>

#include "extraction/findings.hpp"
#include "trace/sink.hpp"
#include "util/fs.hpp"

namespace cx::analytics {

using nlohmann::json;

json analyze_trace(const std::vector<cx::trace::TraceEvent>& events,
                   const MilestoneOracle* oracle, const cx::extraction::OwaspTable& owasp) {
    TraceIndex idx = TraceIndex::build(events);

    json report;
    report["run_id"] = idx.run_id;
    report["entrypoints"] = [&] {
        json arr = json::array();
        for (const auto& s : idx.subgraphs)
            arr.push_back({{"entrypoint", s.entrypoint},
                           {"outcome", cx::domain::to_string(s.outcome)},
                           {"total_rounds", s.total_rounds},
                           {"total_cost", s.total_cost.dollars()},
                           {"agents", s.agents}});
        return arr;
    }();

    report["summary"] = run_summary(idx).to_json();
    report["classification"] = classify_outcomes(idx).to_json();
    auto dist = round_distributions(idx);
    report["round_distributions"] =
        json{{"solved", dist.solved.to_json()}, {"dead_end", dist.dead_end.to_json()}};
    auto ttff = ttff_ms(idx);
    report["ttff_s"] = ttff ? json(static_cast<double>(*ttff) / 1000.0) : json(nullptr);
    report["persistence"] = persistence(idx).to_json();
    report["exit_breakdown"] = exit_breakdown(idx).to_json();
    report["discovery_signal"] = discovery_signal(idx).to_json();
    report["severity_histogram"] = severity_histogram(idx);
    report["escalation"] = escalation(idx).to_json();
    report["evidence_summary"] = evidence_summary(idx).to_json();

    auto corpus = cx::extraction::aggregate(idx.findings);
    report["findings"] = cx::extraction::corpus_to_json(corpus);
    auto dist_owasp = cx::extraction::owasp_map(idx.findings, owasp);
    report["owasp_distribution"] = json{{"counts", dist_owasp.counts},
                                        {"fractions", dist_owasp.fractions},
                                        {"mapped", dist_owasp.mapped},
                                        {"unmapped", dist_owasp.unmapped}};

    if (oracle) {
        auto matrix = milestone_alignment(events, idx, *oracle);
        report["milestones"] = matrix.to_json();
        report["milestones_rendered"] = matrix.render();
    }
    return report;
}

namespace {

// One comparison row in the cross-config table shape.
json comparison_row(const json& report) {
    const json& cfg = report.value("config", json::object());
    const json& summary = report.at("summary");
    const json& esc = report.at("escalation");
    json row;
    std::string setting;
    if (cfg.contains("base_budget") && cfg.contains("team_size")) {
        setting = format_fixed(cfg.at("base_budget").get<double>(), 2) + " / " +
                  std::to_string(cfg.at("team_size").get<int>());
    }
    row["setting"] = setting;
    row["model"] = cfg.value("model", std::string{});
    int solved = 0, deadend = 0;
    for (const auto& ep : report.at("entrypoints")) {
        if (ep.at("outcome").get<std::string>() == "Solved") ++solved;
        else ++deadend;
    }
    row["solved"] = solved;
    row["dead_end"] = deadend;
    int total = solved + deadend;
    row["solve_rate_pct"] = total > 0 ? json(100.0 * solved / total) : json(nullptr);
    row["solve_rate_str"] = total > 0 ? format_fixed(100.0 * solved / total, 3) : "—";
    row["avg_agents"] = esc.at("inflation");
    row["avg_agents_str"] = esc.at("inflation_str");
    row["avg_agents_solved"] = esc.at("avg_agents_solved");
    row["avg_agents_solved_str"] = esc.at("avg_agents_solved_str");
    row["avg_agents_deadend"] = esc.at("avg_agents_deadend");
    row["avg_agents_deadend_str"] = esc.at("avg_agents_deadend_str");
    row["avg_rounds"] = esc.at("avg_rounds_per_entrypoint");
    row["avg_rounds_str"] = esc.at("avg_rounds_per_entrypoint_str");
    row["avg_cost"] = esc.at("avg_cost");
    row["avg_cost_str"] = esc.at("avg_cost_str");
    row["rounds_per_cost"] = esc.at("rounds_per_cost");
    row["rounds_per_cost_str"] = esc.at("rounds_per_cost_str");
    return row;
}

}  // namespace

json analyze(const AnalyzeOptions& options) {
    cx::extraction::OwaspTable owasp = options.owasp_table_path.empty()
                                           ? cx::extraction::OwaspTable::default_table()
                                           : cx::extraction::OwaspTable::load(options.owasp_table_path);
    std::unique_ptr<MilestoneOracle> oracle;
    if (!options.oracle_path.empty())
        oracle = std::make_unique<MilestoneOracle>(MilestoneOracle::load(options.oracle_path));

    std::vector<json> reports;
    for (const auto& path : options.trace_paths) {
        auto events = cx::trace::load_trace(path);
        json report = analyze_trace(events, oracle.get(), owasp);
        report["trace"] = path;
        TraceIndex idx = TraceIndex::build(events);
        report["config"] = idx.run_config;
        reports.push_back(std::move(report));
    }

    json out;
    if (reports.size() == 1) {
        out = std::move(reports.front());
    } else {
        out["runs"] = reports;
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(comparison_row(r));
        out["comparison"] = std::move(rows);
    }

    if (!options.plots_dir.empty()) write_plot_series(out, options.plots_dir);
    return out;
}

void write_plot_series(const json& report, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    auto write_rounds_csv = [&](const json& rep, const std::string& suffix) {
        if (!rep.contains("round_distributions")) return;
        std::string csv = "outcome,rounds\n";
        for (const auto& v : rep.at("round_distributions").at("solved").at("values"))
            csv += "solved," + v.dump() + "\n";
        for (const auto& v : rep.at("round_distributions").at("dead_end").at("values"))
            csv += "dead_end," + v.dump() + "\n";
        cx::util::write_file((fs::path(dir) / ("rounds" + suffix + ".csv")).string(), csv);
    };
    auto write_exit_csv = [&](const json& rep, const std::string& suffix) {
        if (!rep.contains("exit_breakdown")) return;
        std::string csv = "exit_reason,count,fraction\n";
        const json& counts = rep.at("exit_breakdown").at("counts");
        const json& fractions = rep.at("exit_breakdown").at("fractions");
        for (auto it = counts.begin(); it != counts.end(); ++it) {
            double frac = fractions.contains(it.key()) ? fractions.at(it.key()).get<double>() : 0;
            csv += it.key() + "," + it.value().dump() + "," + format_fixed(frac, 6) + "\n";
        }
        cx::util::write_file((fs::path(dir) / ("exit_reasons" + suffix + ".csv")).string(), csv);
    };
    auto write_agents_csv = [&](const json& rep, const std::string& suffix) {
        if (!rep.contains("entrypoints")) return;
        std::string csv = "entrypoint,outcome,agents,total_rounds,total_cost\n";
        for (const auto& ep : rep.at("entrypoints")) {
            auto e = ep.at("entrypoint");
            csv += e.at("host").get<std::string>() + ":" +
                   std::to_string(e.at("port").get<int>()) + "," +
                   ep.at("outcome").get<std::string>() + "," + ep.at("agents").dump() + "," +
                   ep.at("total_rounds").dump() + "," + ep.at("total_cost").dump() + "\n";
        }
        cx::util::write_file((fs::path(dir) / ("entrypoints" + suffix + ".csv")).string(), csv);
    };

    if (report.contains("runs")) {
        int i = 0;
        for (const auto& rep : report.at("runs")) {
            std::string suffix = "_" + std::to_string(i++);
            write_rounds_csv(rep, suffix);
            write_exit_csv(rep, suffix);
            write_agents_csv(rep, suffix);
        }
        cx::util::write_file((fs::path(dir) / "comparison.json").string(),
                             report.at("comparison").dump(2) + "\n");
    } else {
        write_rounds_csv(report, "");
        write_exit_csv(report, "");
        write_agents_csv(report, "");
    }
}

}  // namespace cx::analytics

#pragma once

#include "analytics/metrics.hpp"
#include "analytics/milestones.hpp"
#include "extraction/owasp.hpp"

namespace cx::analytics {

struct AnalyzeOptions {
    std::vector<std::string> trace_paths;  // one report, or a comparison when several
    std::string oracle_path;               // optional milestone oracle
    std::string owasp_table_path;          // optional; built-in table otherwise
    std::string plots_dir;                 // optional; plot-ready CSV/JSON series
};

// Pure function of the trace file(s): same input, same report bytes.
nlohmann::json analyze_trace(const std::vector<cx::trace::TraceEvent>& events,
                             const MilestoneOracle* oracle,
                             const cx::extraction::OwaspTable& owasp);

nlohmann::json analyze(const AnalyzeOptions& options);  // loads, joins, compares

void write_plot_series(const nlohmann::json& report, const std::string& dir);

}  // namespace cx::analytics

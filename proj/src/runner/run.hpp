#pragma once

#include <string>
#include <vector>

#include "domain/types.hpp"

namespace cx::runner {

struct RunOptions {
    std::string config_path;
    std::string entrypoints_path;
    std::string trace_path;
    std::string results_path;
    std::string run_dir = "runs";  // run directory root (workspace lives inside)
    bool force = false;            // allow overwriting an existing trace
    std::string run_id;            // generated when empty
};

struct RunOutcome {
    std::string run_id;
    int total = 0;
    int solved = 0;
};

// Full run composition: config, entrypoints, optional in-process simenv,
// backend + sandbox wiring, orchestrator, trace + results files.
// Throws on configuration or infrastructure failure; per-entrypoint agent
// failures never abort the run.
RunOutcome do_run(const RunOptions& options);

std::vector<cx::domain::EntryPoint> load_entrypoints(const std::string& path);
void save_entrypoints(const std::vector<cx::domain::EntryPoint>& entrypoints,
                      const std::string& path);

std::string sanitize_component(const std::string& raw);  // path-safe name

}  // namespace cx::runner

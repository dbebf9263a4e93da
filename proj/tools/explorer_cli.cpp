#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "explorer.h"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) {
    g_stop = true;
}

int report(cx_status status) {
    if (status == CX_OK) return 0;
    std::fprintf(stderr, "error (%s): %s\n", cx_status_name(status), cx_last_error());
    return status == CX_ERR_USAGE ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explorer — autonomous offensive-security exploration engine"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(cx_version()));

    // scan
    std::string scan_targets, scan_out, scan_trace;
    auto* scan = app.add_subcommand("scan", "Scan targets and write the entrypoint queue");
    scan->add_option("--targets", scan_targets, "Targets file (JSON)")
        ->required()
        ->envname("EXPLORER_TARGETS");
    scan->add_option("--out", scan_out, "Output entrypoints file")
        ->required()
        ->envname("EXPLORER_SCAN_OUT");
    scan->add_option("--trace", scan_trace, "Optional trace file for discovery events")
        ->envname("EXPLORER_SCAN_TRACE");

    // simenv serve
    auto* simenv = app.add_subcommand("simenv", "Simulated attack surface");
    simenv->require_subcommand(1);
    std::string serve_manifest, serve_host = "127.0.0.1", serve_gt;
    auto* serve = simenv->add_subcommand("serve", "Serve the manifest until interrupted");
    serve->add_option("--manifest", serve_manifest, "Service manifest (JSON)")
        ->required()
        ->envname("EXPLORER_SIMENV_MANIFEST");
    serve->add_option("--host", serve_host, "Bind host")->envname("EXPLORER_SIMENV_HOST");
    serve->add_option("--ground-truth-out", serve_gt,
                      "Where to write the derived ground-truth manifest")
        ->envname("EXPLORER_GROUND_TRUTH_OUT");

    // run
    std::string run_config, run_entrypoints, run_trace, run_results, run_dir = "runs";
    bool run_force = false;
    auto* run = app.add_subcommand("run", "Execute the exploration workflow");
    run->add_option("--config", run_config, "Run configuration (.toml or .json)")
        ->required()
        ->envname("EXPLORER_CONFIG");
    run->add_option("--entrypoints", run_entrypoints, "Entrypoint queue file")
        ->required()
        ->envname("EXPLORER_ENTRYPOINTS");
    run->add_option("--trace", run_trace, "Trace output (JSONL)")
        ->required()
        ->envname("EXPLORER_TRACE");
    run->add_option("--results", run_results, "Results output (JSON)")
        ->required()
        ->envname("EXPLORER_RESULTS");
    run->add_option("--run-dir", run_dir, "Run directory root")->envname("EXPLORER_RUN_DIR");
    run->add_flag("--force", run_force, "Overwrite an existing trace file");

    // analyze
    std::vector<std::string> an_traces;
    std::string an_oracle, an_report, an_plots;
    auto* analyze = app.add_subcommand("analyze", "Compute metrics from recorded traces");
    analyze->add_option("--trace", an_traces, "Trace file(s); several produce a comparison")
        ->required()
        ->envname("EXPLORER_TRACE");
    analyze->add_option("--oracle", an_oracle, "Milestone oracle file")
        ->envname("EXPLORER_ORACLE");
    analyze->add_option("--report", an_report, "Report output (JSON)")
        ->required()
        ->envname("EXPLORER_REPORT");
    analyze->add_option("--plots", an_plots, "Directory for plot-ready CSV/JSON series")
        ->envname("EXPLORER_PLOTS");

    // replay
    std::string replay_trace;
    auto* replay = app.add_subcommand("replay", "Re-execute a scripted run and verify the trace");
    replay->add_option("--trace", replay_trace, "Recorded trace file")
        ->required()
        ->envname("EXPLORER_TRACE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (scan->parsed()) {
        return report(cx_scan(scan_targets.c_str(), scan_out.c_str(),
                              scan_trace.empty() ? nullptr : scan_trace.c_str()));
    }

    if (serve->parsed()) {
        cx_simenv* env = nullptr;
        cx_status status = cx_simenv_start(serve_manifest.c_str(), serve_host.c_str(), &env);
        if (status != CX_OK) return report(status);
        if (serve_gt.empty()) serve_gt = serve_manifest + ".ground_truth.json";
        status = cx_simenv_write_ground_truth(env, serve_gt.c_str());
        if (status != CX_OK) {
            cx_simenv_stop(env);
            return report(status);
        }
        std::printf("simenv: %d service(s) on %s; ground truth at %s\n",
                    cx_simenv_service_count(env), serve_host.c_str(), serve_gt.c_str());
        std::printf("simenv: press Ctrl-C to stop\n");
        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        return report(cx_simenv_stop(env));
    }

    if (run->parsed()) {
        return report(cx_run(run_config.c_str(), run_entrypoints.c_str(), run_trace.c_str(),
                             run_results.c_str(), run_dir.c_str(), run_force ? 1 : 0));
    }

    if (analyze->parsed()) {
        std::vector<const char*> traces;
        for (const auto& t : an_traces) traces.push_back(t.c_str());
        return report(cx_analyze(traces.data(), static_cast<int>(traces.size()),
                                 an_oracle.empty() ? nullptr : an_oracle.c_str(),
                                 an_report.c_str(),
                                 an_plots.empty() ? nullptr : an_plots.c_str()));
    }

    if (replay->parsed()) {
        cx_status status = cx_replay(replay_trace.c_str());
        if (status == CX_OK) std::printf("replay: traces identical (timestamps excluded)\n");
        return report(status);
    }

    return 2;
}

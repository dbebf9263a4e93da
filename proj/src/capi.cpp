#include "explorer.h"

#include <string>

#include "analytics/report.hpp"
#include "domain/config.hpp"
#include "recon/scanner.hpp"
#include "runner/replay.hpp"
#include "runner/run.hpp"
#include "simenv/services.hpp"
#include "trace/sink.hpp"
#include "util/fs.hpp"

#if defined(_WIN32)
#define CX_EXPORT __declspec(dllexport)
#else
#define CX_EXPORT __attribute__((visibility("default")))
#endif

namespace {

thread_local std::string t_last_error;

cx_status fail(cx_status status, const std::string& message) {
    t_last_error = message;
    return status;
}

cx_status ok() {
    t_last_error.clear();
    return CX_OK;
}

// Maps engine exceptions onto the status codes.
template <typename Fn>
cx_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const cx::domain::ConfigError& e) {
        return fail(CX_ERR_CONFIG, e.what());
    } catch (const cx::simenv::SimenvError& e) {
        return fail(e.kind == cx::simenv::SimenvError::Kind::PortInUse ? CX_ERR_PORT_IN_USE
                                                                       : CX_ERR_CONFIG,
                    e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CX_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(CX_ERR_RUNTIME, e.what());
    }
}

}  // namespace

struct cx_simenv {
    cx::simenv::Environment env;
};

extern "C" {

CX_EXPORT const char* cx_version(void) {
    return "1.0.0";
}

CX_EXPORT const char* cx_status_name(cx_status status) {
    switch (status) {
        case CX_OK: return "ok";
        case CX_ERR_USAGE: return "usage";
        case CX_ERR_CONFIG: return "config";
        case CX_ERR_IO: return "io";
        case CX_ERR_RUNTIME: return "runtime";
        case CX_ERR_PORT_IN_USE: return "port-in-use";
    }
    return "unknown";
}

CX_EXPORT const char* cx_last_error(void) {
    return t_last_error.c_str();
}

CX_EXPORT cx_status cx_scan(const char* targets_path, const char* out_path,
                            const char* trace_path) {
    if (!targets_path || !out_path) return fail(CX_ERR_USAGE, "cx_scan: null path");
    return guarded([&] {
        auto targets = cx::recon::load_targets(targets_path);
        std::unique_ptr<cx::trace::FileTraceSink> sink;
        if (trace_path) sink = std::make_unique<cx::trace::FileTraceSink>(trace_path);
        auto entrypoints = cx::recon::scan(targets, sink.get());
        cx::runner::save_entrypoints(entrypoints, out_path);
        return ok();
    });
}

CX_EXPORT cx_status cx_simenv_start(const char* manifest_path, const char* host,
                                    cx_simenv** out_env) {
    if (!manifest_path || !out_env) return fail(CX_ERR_USAGE, "cx_simenv_start: null argument");
    *out_env = nullptr;
    return guarded([&] {
        auto manifest = cx::simenv::load_manifest(manifest_path);
        auto env = cx::simenv::Environment::serve(std::move(manifest),
                                                  host ? host : "127.0.0.1");
        *out_env = new cx_simenv{std::move(env)};
        return ok();
    });
}

CX_EXPORT int cx_simenv_service_count(const cx_simenv* env) {
    return env ? static_cast<int>(env->env.manifest().size()) : 0;
}

CX_EXPORT cx_status cx_simenv_write_ground_truth(const cx_simenv* env, const char* out_path) {
    if (!env || !out_path)
        return fail(CX_ERR_USAGE, "cx_simenv_write_ground_truth: null argument");
    return guarded([&] {
        cx::util::write_file(out_path, env->env.ground_truth().to_json().dump(2) + "\n");
        return ok();
    });
}

CX_EXPORT cx_status cx_simenv_stop(cx_simenv* env) {
    if (!env) return ok();
    return guarded([&] {
        env->env.stop();
        delete env;
        return ok();
    });
}

CX_EXPORT cx_status cx_run(const char* config_path, const char* entrypoints_path,
                           const char* trace_path, const char* results_path, const char* run_dir,
                           int force) {
    if (!config_path || !entrypoints_path || !trace_path || !results_path)
        return fail(CX_ERR_USAGE, "cx_run: null path");
    return guarded([&] {
        cx::runner::RunOptions opts;
        opts.config_path = config_path;
        opts.entrypoints_path = entrypoints_path;
        opts.trace_path = trace_path;
        opts.results_path = results_path;
        if (run_dir) opts.run_dir = run_dir;
        opts.force = force != 0;
        cx::runner::do_run(opts);
        return ok();
    });
}

CX_EXPORT cx_status cx_analyze(const char* const* trace_paths, int trace_count,
                               const char* oracle_path, const char* report_path,
                               const char* plots_dir) {
    if (!trace_paths || trace_count < 1 || !report_path)
        return fail(CX_ERR_USAGE, "cx_analyze: need at least one trace and a report path");
    return guarded([&] {
        cx::analytics::AnalyzeOptions opts;
        for (int i = 0; i < trace_count; ++i) {
            if (!trace_paths[i]) return fail(CX_ERR_USAGE, "cx_analyze: null trace path");
            opts.trace_paths.emplace_back(trace_paths[i]);
        }
        if (oracle_path) opts.oracle_path = oracle_path;
        if (plots_dir) opts.plots_dir = plots_dir;
        auto report = cx::analytics::analyze(opts);
        cx::util::write_file(report_path, report.dump(2) + "\n");
        return ok();
    });
}

CX_EXPORT cx_status cx_replay(const char* trace_path) {
    if (!trace_path) return fail(CX_ERR_USAGE, "cx_replay: null path");
    return guarded([&] {
        auto result = cx::runner::replay(trace_path);
        if (!result.identical)
            return fail(CX_ERR_RUNTIME, "replay diverged at " + result.divergence);
        return ok();
    });
}

}  // extern "C"

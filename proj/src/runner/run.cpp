#include "runner/run.hpp"

#include <cstdlib>
#include <filesystem>
#include <random>

#include "domain/config.hpp"
#include "gateway/scripted.hpp"
#include "gateway/wire_client.hpp"
#include "orch/orchestrator.hpp"
#include "sandbox/docker_sandbox.hpp"
#include "sandbox/mock_sandbox.hpp"
#include "simenv/services.hpp"
#include "trace/sink.hpp"
#include "util/fs.hpp"

namespace cx::runner {

namespace fs = std::filesystem;
using cx::domain::EntryPoint;
using cx::trace::EventKind;
using json = nlohmann::json;

std::string sanitize_component(const std::string& raw) {
    std::string out;
    for (char ch : raw) {
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') out += ch;
        else out += '_';
    }
    return out;
}

std::vector<EntryPoint> load_entrypoints(const std::string& path) {
    json doc = json::parse(cx::util::read_file(path));
    if (doc.is_object() && doc.contains("entrypoints")) doc = doc.at("entrypoints");
    return doc.get<std::vector<EntryPoint>>();
}

void save_entrypoints(const std::vector<EntryPoint>& entrypoints, const std::string& path) {
    cx::util::write_file(path, json(entrypoints).dump(2) + "\n");
}

namespace {

std::string make_run_id() {
    std::random_device rd;
    char buf[48];
    std::snprintf(buf, sizeof buf, "run-%lld-%04x",
                  static_cast<long long>(cx::util::now_ms()),
                  static_cast<unsigned>(rd() & 0xffff));
    return buf;
}

}  // namespace

RunOutcome do_run(const RunOptions& options) {
    auto config = cx::domain::load_config_file(options.config_path);
    auto entrypoints = load_entrypoints(options.entrypoints_path);
    if (entrypoints.empty()) throw std::runtime_error("entrypoint queue is empty");

    if (fs::exists(options.trace_path) && !options.force)
        throw std::runtime_error("trace file exists, refusing to overwrite without --force: " +
                                 options.trace_path);

    std::string run_id = options.run_id.empty() ? make_run_id() : options.run_id;
    fs::path run_root = fs::path(options.run_dir) / run_id;
    fs::path workspace = run_root / "workspace";
    fs::create_directories(workspace);

    // Hosted simenv runs get a pinned clock so a recorded run replays
    // byte-stable; an externally served simenv is left alone.
    std::optional<cx::simenv::Environment> env;
    std::int64_t frozen_clock = 0;
    if (!config.simenv_manifest.empty()) {
        if (auto v = cx::util::getenv_opt("EXPLORER_SIM_FROZEN_CLOCK")) {
            frozen_clock = std::atoll(v->c_str());
        } else {
            frozen_clock = cx::util::now_ms() / 1000;
            ::setenv("EXPLORER_SIM_FROZEN_CLOCK", std::to_string(frozen_clock).c_str(), 1);
        }
        env = cx::simenv::Environment::serve(cx::simenv::load_manifest(config.simenv_manifest));
    }

    cx::domain::GroundTruth ground_truth;
    if (!config.ground_truth_manifest.empty())
        ground_truth = cx::domain::GroundTruth::load(config.ground_truth_manifest);
    else if (env)
        ground_truth = env->ground_truth();

    std::unique_ptr<cx::gateway::Backend> backend;
    if (config.backend_kind == "wire") {
        backend = std::make_unique<cx::gateway::WireBackend>(
            cx::gateway::WireBackend::config_from_env());
    } else {
        auto playbook = config.playbook.empty()
                            ? cx::gateway::ScriptedPlaybook::finish_only()
                            : cx::gateway::ScriptedPlaybook::load(config.playbook);
        backend = std::make_unique<cx::gateway::ScriptedBackend>(std::move(playbook), config.seed);
    }

    cx::orch::SandboxFactory sandbox_factory;
    if (config.sandbox_kind == "container") {
        cx::sandbox::EngineConfig engine;
        engine.endpoint = config.engine_endpoint;
        engine.image = config.container_image;
        sandbox_factory = [workspace, engine](const EntryPoint& ep, int team_index,
                                              const std::string& agent_id) {
            auto dir = workspace / sanitize_component(ep.key()) /
                       ("a" + std::to_string(team_index));
            fs::create_directories(dir);
            return std::unique_ptr<cx::sandbox::Sandbox>(std::make_unique<cx::sandbox::DockerSandbox>(
                "sbx-" + sanitize_component(agent_id), dir.string(), engine));
        };
    } else {
        sandbox_factory = [workspace](const EntryPoint& ep, int team_index,
                                      const std::string& agent_id) {
            auto dir = workspace / sanitize_component(ep.key()) /
                       ("a" + std::to_string(team_index));
            fs::create_directories(dir);
            return std::unique_ptr<cx::sandbox::Sandbox>(std::make_unique<cx::sandbox::MockSandbox>(
                "sbx-" + sanitize_component(agent_id), dir.string()));
        };
    }

    cx::trace::FileTraceSink sink(options.trace_path);

    json challenges = json::array();
    for (const auto& [key, _] : ground_truth.challenges()) challenges.push_back(key);
    sink.emit(EventKind::RunStarted, {{"run_id", run_id},
                                      {"config", config},
                                      {"entrypoints", entrypoints},
                                      {"challenges", challenges},
                                      {"playbook", config.playbook},
                                      {"seed", config.seed},
                                      {"frozen_clock", frozen_clock}});
    for (const auto& ep : entrypoints)
        sink.emit(EventKind::EntryPointDiscovered, {{"entrypoint", ep}});

    cx::orch::OrchestratorDeps deps;
    deps.config = config;
    deps.ground_truth = ground_truth;
    deps.backend = backend.get();
    deps.sandbox_factory = std::move(sandbox_factory);
    deps.sink = &sink;
    deps.prompts = cx::agent::PromptSet::load(config.prompts_dir);

    cx::orch::Orchestrator orchestrator(std::move(deps));
    auto results = orchestrator.run(entrypoints);

    RunOutcome outcome;
    outcome.run_id = run_id;
    outcome.total = static_cast<int>(results.size());
    json by_outcome = json::object();
    for (const auto& r : results) {
        std::string key = cx::domain::to_string(r.outcome);
        by_outcome[key] = by_outcome.value(key, 0) + 1;
        if (r.outcome == cx::domain::SubgraphOutcome::Solved) ++outcome.solved;
    }
    sink.emit(EventKind::RunEnded,
              {{"run_id", run_id}, {"outcomes", by_outcome}, {"entrypoints", results.size()}});
    sink.flush();

    cx::util::write_file(options.results_path,
                         json{{"run_id", run_id}, {"results", results}}.dump(2) + "\n");
    if (env) env->stop();
    return outcome;
}

}  // namespace cx::runner

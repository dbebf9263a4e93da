#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "domain/manifest.hpp"
#include "domain/types.hpp"
#include "gateway/scripted.hpp"
#include "orch/orchestrator.hpp"
#include "trace/sink.hpp"

namespace cx::testing {

// Repository root, for shipped configs and fixtures.
std::string source_path(const std::string& rel);

// Fresh scratch directory under the system temp root.
std::filesystem::path scratch_dir(const std::string& tag);

// Randomized scripted chain scenario for the state-machine property suite.
struct ChainScenario {
    cx::domain::RunConfig config;
    cx::gateway::ScriptedPlaybook playbook;
    cx::domain::GroundTruth ground_truth;
    std::vector<cx::domain::EntryPoint> entrypoints;
};
ChainScenario make_random_scenario(std::mt19937_64& rng, int entrypoint_count = 1);

struct ScenarioRun {
    std::vector<cx::trace::TraceEvent> events;
    std::vector<cx::domain::SubgraphResult> results;
    std::size_t global_state_entries = 0;
};
// Runs the scenario fully in memory (mock sandboxes, no network).
ScenarioRun run_scenario(const ChainScenario& scenario);

// State-machine invariants over a finished run; returns human-readable
// violations (empty means all invariants hold).
std::vector<std::string> check_invariants(const ScenarioRun& run,
                                          const cx::domain::RunConfig& config);

}  // namespace cx::testing

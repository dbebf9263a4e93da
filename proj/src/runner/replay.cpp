#include "runner/replay.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "domain/config.hpp"
#include "runner/run.hpp"
#include "trace/sink.hpp"
#include "util/fs.hpp"

namespace cx::runner {

namespace fs = std::filesystem;
using cx::trace::EventKind;
using cx::trace::TraceEvent;
using json = nlohmann::json;

namespace {

const std::set<std::string> kVolatileKeys = {"wall_clock", "started", "ended", "duration_ms"};

json strip_volatile(const json& value) {
    if (value.is_object()) {
        json out = json::object();
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (kVolatileKeys.count(it.key())) continue;
            out[it.key()] = strip_volatile(it.value());
        }
        return out;
    }
    if (value.is_array()) {
        json out = json::array();
        for (const auto& v : value) out.push_back(strip_volatile(v));
        return out;
    }
    return value;
}

}  // namespace

std::string normalize_trace(const std::vector<TraceEvent>& events) {
    // agent -> entrypoint attribution
    std::map<std::string, std::string> agent_ep;
    for (const auto& e : events) {
        if (e.kind == EventKind::AgentSpawned)
            agent_ep[e.payload.at("agent_id").get<std::string>()] =
                e.payload.at("entrypoint").get<cx::domain::EntryPoint>().key();
    }
    auto ep_of = [&](const TraceEvent& e) -> std::string {
        if (e.kind == EventKind::RunStarted || e.kind == EventKind::RunEnded ||
            e.kind == EventKind::EntryPointDiscovered)
            return "";  // run level
        if (e.payload.contains("entrypoint"))
            return e.payload.at("entrypoint").get<cx::domain::EntryPoint>().key();
        if (e.payload.contains("agent_id")) {
            auto it = agent_ep.find(e.payload.at("agent_id").get<std::string>());
            if (it != agent_ep.end()) return it->second;
        }
        return "";
    };

    std::vector<std::string> run_level;
    std::map<std::string, std::vector<std::string>> per_subgraph;
    for (const auto& e : events) {
        json line{{"kind", cx::trace::to_string(e.kind)}, {"payload", strip_volatile(e.payload)}};
        std::string key = ep_of(e);
        if (key.empty()) run_level.push_back(line.dump());
        else per_subgraph[key].push_back(line.dump());
    }

    std::string out;
    for (const auto& line : run_level) out += line + "\n";
    for (const auto& [key, lines] : per_subgraph) {
        out += "--- subgraph " + key + "\n";
        for (const auto& line : lines) out += line + "\n";
    }
    return out;
}

ReplayResult replay(const std::string& trace_path) {
    auto recorded = cx::trace::load_trace(trace_path);
    if (recorded.empty() || recorded.front().kind != EventKind::RunStarted)
        throw std::runtime_error("trace does not begin with RunStarted: " + trace_path);
    const json& started = recorded.front().payload;

    json config_json = started.value("config", json::object());
    if (config_json.value("backend_kind", std::string{"scripted"}) != "scripted")
        throw std::runtime_error("replay requires a scripted-backend run");

    if (started.contains("frozen_clock") && started.at("frozen_clock").is_number()) {
        auto epoch = started.at("frozen_clock").get<std::int64_t>();
        if (epoch > 0)
            ::setenv("EXPLORER_SIM_FROZEN_CLOCK", std::to_string(epoch).c_str(), 1);
    }

    std::string run_id = started.value("run_id", std::string{"replay"});
    fs::path scratch = fs::temp_directory_path() / ("explorer-replay-" + sanitize_component(run_id));
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    // Materialize inputs for do_run from the recording.
    fs::path config_path = scratch / "config.json";
    cx::util::write_file(config_path.string(), config_json.dump(2));
    fs::path eps_path = scratch / "entrypoints.json";
    cx::util::write_file(eps_path.string(), started.at("entrypoints").dump(2));

    RunOptions opts;
    opts.config_path = config_path.string();
    opts.entrypoints_path = eps_path.string();
    opts.trace_path = (scratch / "trace.jsonl").string();
    opts.results_path = (scratch / "results.json").string();
    opts.run_dir = (scratch / "runs").string();
    opts.run_id = run_id;
    opts.force = true;
    do_run(opts);

    auto replayed = cx::trace::load_trace(opts.trace_path);
    std::string expect = normalize_trace(recorded);
    std::string got = normalize_trace(replayed);

    ReplayResult result;
    result.replay_trace_path = opts.trace_path;
    result.identical = expect == got;
    if (!result.identical) {
        // locate the first differing normalized line
        std::istringstream a(expect), b(got);
        std::string la, lb;
        int line = 0;
        while (true) {
            ++line;
            bool ea = !std::getline(a, la);
            bool eb = !std::getline(b, lb);
            if (ea && eb) break;
            if (ea != eb || la != lb) {
                result.divergence = "line " + std::to_string(line) + ":\n  recorded: " +
                                    (ea ? "<eof>" : la) + "\n  replayed: " + (eb ? "<eof>" : lb);
                break;
            }
        }
    }
    return result;
}

}  // namespace cx::runner

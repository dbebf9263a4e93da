#include "domain/config.hpp"

#include <fstream>
#include <set>

#include "util/toml_lite.hpp"

namespace cx::domain {

namespace {

using Kind = ConfigError::Kind;

[[noreturn]] void out_of_range(const std::string& key, const std::string& why) {
    throw ConfigError(Kind::OutOfRange, key, "config key '" + key + "' out of range: " + why);
}

const std::set<std::string> kKnownKeys = {
    "parallel_subgraphs", "team_size", "base_budget", "max_extensions",
    "reflection_thresholds", "critic_after_failures", "dead_end_attempts",
    "dead_end_min_severity", "pricing_table", "ground_truth_manifest",
    "scan_targets", "model", "backend_kind", "playbook", "sandbox_kind",
    "container_image", "engine_endpoint", "simenv_manifest", "prompts_dir",
    "seed"};

}  // namespace

RunConfig validate_config(const json& raw) {
    if (!raw.is_object())
        throw ConfigError(Kind::Parse, "", "config document must be a table/object");
    for (auto it = raw.begin(); it != raw.end(); ++it) {
        if (!kKnownKeys.count(it.key()))
            throw ConfigError(Kind::Parse, it.key(), "unknown config key '" + it.key() + "'");
    }

    RunConfig cfg;
    try {
        from_json(raw, cfg);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(Kind::Parse, "", std::string("malformed config value: ") + e.what());
    }

    if (cfg.parallel_subgraphs < 1) out_of_range("parallel_subgraphs", "must be >= 1");
    if (cfg.team_size < 1) out_of_range("team_size", "must be >= 1");
    if (cfg.base_budget <= Money{}) out_of_range("base_budget", "must be > 0");
    if (cfg.max_extensions < 0) out_of_range("max_extensions", "must be >= 0");
    if (cfg.critic_after_failures < 1) out_of_range("critic_after_failures", "must be >= 1");
    if (cfg.dead_end_attempts < 1) out_of_range("dead_end_attempts", "must be >= 1");

    std::int64_t prev = 0;
    for (auto ppm : cfg.reflection_thresholds_ppm) {
        if (ppm <= 0 || ppm >= 1'000'000)
            out_of_range("reflection_thresholds", "each fraction must lie in (0,1)");
        if (ppm <= prev)
            throw ConfigError(Kind::NonMonotonicThresholds, "reflection_thresholds",
                              "reflection_thresholds must be strictly increasing");
        prev = ppm;
    }

    for (const auto& [model, pricing] : cfg.pricing_table) {
        if (pricing.input_per_mtok < Money{} || pricing.output_per_mtok < Money{})
            out_of_range("pricing_table." + model, "prices must be >= 0");
    }
    // Fail-fast on an unpriced model: charging mid-run would be too late.
    if (!cfg.pricing_table.count(cfg.model))
        throw ConfigError(Kind::MissingKey, "pricing_table." + cfg.model,
                          "no pricing entry for model '" + cfg.model + "'");

    if (cfg.backend_kind != "scripted" && cfg.backend_kind != "wire")
        out_of_range("backend_kind", "must be 'scripted' or 'wire'");
    if (cfg.sandbox_kind != "mock" && cfg.sandbox_kind != "container")
        out_of_range("sandbox_kind", "must be 'mock' or 'container'");

    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(Kind::Parse, "", "cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    json doc;
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") {
        try {
            doc = cx::util::parse_toml(text);
        } catch (const std::exception& e) {
            throw ConfigError(Kind::Parse, "", std::string("TOML parse error: ") + e.what());
        }
    } else {
        doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
        if (doc.is_discarded())
            throw ConfigError(Kind::Parse, "", "JSON parse error in " + path);
    }
    return validate_config(doc);
}

}  // namespace cx::domain

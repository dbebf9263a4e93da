#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "domain/manifest.hpp"

namespace cx::simenv {

using json = nlohmann::json;

enum class ServiceType { cmd_injection_blacklist, path_traversal, auth_bypass_logic, noise_static };
std::string to_string(ServiceType t);
ServiceType service_type_from_string(const std::string& s);

struct ServiceSpec {
    int port = 0;
    ServiceType kind = ServiceType::noise_static;
    std::string flag;   // required for vulnerable kinds, forbidden for noise
    std::string name;   // challenge name in the derived ground truth
    json params = json::object();  // kind-specific knobs
};

struct SimenvError : std::runtime_error {
    enum class Kind { PortInUse, BadManifest };
    Kind kind;
    SimenvError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

std::vector<ServiceSpec> manifest_from_json(const json& doc);  // validates invariants
std::vector<ServiceSpec> load_manifest(const std::string& path);
json manifest_to_json(const std::vector<ServiceSpec>& manifest);

// Deterministic mixed-kind manifest (vulnerable + noise) for scale tests.
std::vector<ServiceSpec> generate_manifest(int count, std::uint64_t seed, int base_port = 8040);

cx::domain::GroundTruth derive_ground_truth(const std::vector<ServiceSpec>& manifest,
                                            const std::string& host);

// EXPLORER_SIM_FROZEN_CLOCK (epoch seconds) freezes date rendering.
std::int64_t sim_clock_epoch();

// A running set of loopback HTTP services. Stateless across requests:
// handlers own immutable copies of their spec.
class Environment {
public:
    Environment(const Environment&) = delete;
    Environment& operator=(const Environment&) = delete;
    Environment(Environment&&) noexcept;
    Environment& operator=(Environment&&) noexcept;
    ~Environment();

    // Binds every service; throws SimenvError{PortInUse} if any port is taken.
    static Environment serve(std::vector<ServiceSpec> manifest, std::string host = "127.0.0.1");

    void stop();
    bool running() const;
    const std::vector<ServiceSpec>& manifest() const;
    const std::string& host() const;
    cx::domain::GroundTruth ground_truth() const;

private:
    Environment();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace cx::simenv

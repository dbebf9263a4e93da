#pragma once

#include <optional>
#include <vector>

#include "domain/types.hpp"
#include "trace/sink.hpp"

namespace cx::recon {

using cx::domain::EntryPoint;
using cx::domain::ServiceKind;

struct ScanTarget {
    std::string host;
    std::vector<int> ports;       // explicit list, already expanded
    int connect_timeout_ms = 500;
    enum class Probe { tcp_connect, http_get } probe = Probe::http_get;
};

// Targets file: JSON array of {host, ports: [..] and/or port_range:
// {from, to}, connect_timeout_ms?, probe?}. Throws on malformed input.
std::vector<ScanTarget> parse_targets(const nlohmann::json& doc);
std::vector<ScanTarget> load_targets(const std::string& path);

// Port-number heuristics applied when a live port does not speak HTTP.
ServiceKind classify_service(int port, bool http_ok);

// Lossy banner sanitation: printable bytes survive, the rest become '?';
// capped at 1024 bytes.
std::string sanitize_banner(const std::string& raw);

// One GET probe; falls back to a raw banner read. Returns the fingerprint
// for an already-accepting port.
std::pair<ServiceKind, std::string> fingerprint(const std::string& host, int port,
                                                int timeout_ms);

// Scans every target and returns the attack surface map, ordered by
// ascending (host, port). At most 64 connection attempts run at once.
// Unresolvable hosts are skipped with a warning. When a sink is given,
// every result emits an EntryPointDiscovered event.
std::vector<EntryPoint> scan(const std::vector<ScanTarget>& targets,
                             cx::trace::TraceSink* sink = nullptr,
                             std::vector<std::string>* warnings = nullptr);

}  // namespace cx::recon

#pragma once

#include <memory>

#include <nlohmann/json.hpp>

#include "sandbox/sandbox.hpp"

namespace cx::sandbox {

struct EngineConfig {
    // Unix socket path ("/var/run/docker.sock") or "http://host:port".
    std::string endpoint = "/var/run/docker.sock";
    std::string image = "explorer-tools:latest";
    std::string network_mode = "bridge";
    int api_timeout_s = 30;
};

// Thin client for the container engine HTTP API: create + start on
// construction, exec via /containers/{id}/exec with the multiplexed stream
// demuxed into stdout/stderr, remove on destroy.
class DockerSandbox : public Sandbox {
public:
    DockerSandbox(std::string id_hint, std::string workspace, EngineConfig cfg);
    ~DockerSandbox() override;

    std::string backend_kind() const override { return "container"; }
    ExecResult exec(const std::string& command, std::chrono::milliseconds timeout) override;
    void destroy() override;

    const std::string& container_id() const { return container_id_; }

    // Splits an engine stream into (stdout, stderr) frames. Exposed for the
    // protocol tests.
    static std::pair<std::string, std::string> demux_stream(const std::string& raw);

private:
    nlohmann::json engine_post(const std::string& path, const nlohmann::json& body,
                               int expect_status);
    EngineConfig cfg_;
    std::string container_id_;
};

}  // namespace cx::sandbox

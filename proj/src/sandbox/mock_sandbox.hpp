#pragma once

#include <map>

#include "sandbox/sandbox.hpp"

namespace cx::sandbox {

// In-process executor with a virtual filesystem and a small command table.
// curl-style fetches go through the injected HttpFetcher (loopback HTTP by
// default), which is how agent probes reach the simenv.
class MockSandbox : public Sandbox {
public:
    MockSandbox(std::string id, std::string workspace, HttpFetcher fetcher = loopback_http_fetcher());

    std::string backend_kind() const override { return "mock"; }
    ExecResult exec(const std::string& command, std::chrono::milliseconds timeout) override;
    void destroy() override;

    void plant_file(const std::string& path, std::string content);
    bool has_file(const std::string& path) const { return vfs_.count(path) > 0; }

private:
    std::map<std::string, std::string> vfs_;
    HttpFetcher fetcher_;
};

}  // namespace cx::sandbox

#pragma once

#include <memory>

#include "gateway/backend.hpp"

namespace cx::gateway {

struct WireConfig {
    std::string base_url;  // scheme://host[:port][/prefix], chat-completions dialect
    std::string api_key;   // sent as a bearer token; never read from config files
    int max_attempts = 3;
    int backoff_base_ms = 250;
    int timeout_s = 120;
    int max_concurrent = 8;  // global in-flight request cap
};

// Provider-agnostic chat-completions client. Only the documented request
// and response fields are written or read; anything else a gateway returns
// is ignored.
class WireBackend : public Backend {
public:
    explicit WireBackend(WireConfig cfg);
    ~WireBackend() override;

    // Reads EXPLORER_API_BASE / EXPLORER_API_KEY.
    static WireConfig config_from_env();

    ChatResponse complete(const ChatRequest& request) override;

    // Wire codecs, exposed for the contract tests.
    static json request_to_wire(const ChatRequest& request);
    static ChatResponse response_from_wire(const json& body);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace cx::gateway

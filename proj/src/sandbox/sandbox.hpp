#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace cx::sandbox {

// Per-stream output cap; model context budgets make unbounded tool output
// useless anyway.
inline constexpr std::size_t kStreamCap = 64 * 1024;
inline constexpr const char* kTruncationMarker = "\n...[output truncated at 64 KiB]";

std::string cap_stream(std::string s);

struct ExecResult {
    int exit_code = 0;
    std::string out;  // stdout, capped
    std::string err;  // stderr, capped
    std::chrono::milliseconds duration{0};
};

struct SandboxError : std::runtime_error {
    enum class Kind { EngineUnreachable, ImageMissing, SandboxGone, BadPath };
    Kind kind;
    SandboxError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// One isolated execution environment, owned by exactly one agent from
// creation to destroy().
class Sandbox {
public:
    virtual ~Sandbox() = default;

    const std::string& id() const { return id_; }
    const std::string& workspace_path() const { return workspace_; }
    std::int64_t created_at_ms() const { return created_at_ms_; }
    virtual std::string backend_kind() const = 0;

    virtual ExecResult exec(const std::string& command, std::chrono::milliseconds timeout) = 0;
    // Persists evidence under the host workspace; rel_path must stay inside it.
    virtual void write_file(const std::string& rel_path, const std::string& content);
    // Idempotent; evidence files already persisted survive.
    virtual void destroy() = 0;
    bool destroyed() const { return destroyed_; }

protected:
    Sandbox(std::string id, std::string workspace);
    void require_live() const;
    void mark_destroyed() { destroyed_ = true; }

private:
    std::string id_;
    std::string workspace_;
    std::int64_t created_at_ms_;
    bool destroyed_ = false;
};

// status code + body; 0 status means the connection itself failed.
using HttpFetcher = std::function<std::pair<int, std::string>(const std::string& url)>;
HttpFetcher loopback_http_fetcher();

}  // namespace cx::sandbox

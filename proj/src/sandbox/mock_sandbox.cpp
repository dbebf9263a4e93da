#include "sandbox/mock_sandbox.hpp"

#include <filesystem>
#include <thread>

#include <httplib.h>

#include "util/fs.hpp"

namespace cx::sandbox {

std::string cap_stream(std::string s) {
    if (s.size() <= kStreamCap) return s;
    s.resize(kStreamCap);
    return s + kTruncationMarker;
}

Sandbox::Sandbox(std::string id, std::string workspace)
    : id_(std::move(id)), workspace_(std::move(workspace)), created_at_ms_(cx::util::now_ms()) {}

void Sandbox::require_live() const {
    if (destroyed_)
        throw SandboxError(SandboxError::Kind::SandboxGone, "sandbox " + id_ + " is gone");
}

void Sandbox::write_file(const std::string& rel_path, const std::string& content) {
    require_live();
    namespace fs = std::filesystem;
    if (rel_path.empty() || rel_path.front() == '/')
        throw SandboxError(SandboxError::Kind::BadPath, "evidence path must be relative");
    fs::path target = fs::path(workspace_) / rel_path;
    fs::path normal = target.lexically_normal();
    auto base = fs::path(workspace_).lexically_normal();
    auto rel = normal.lexically_relative(base);
    if (rel.empty() || rel.native().rfind("..", 0) == 0)
        throw SandboxError(SandboxError::Kind::BadPath,
                           "evidence path escapes the workspace: " + rel_path);
    cx::util::write_file(normal.string(), content);
}

HttpFetcher loopback_http_fetcher() {
    return [](const std::string& url) -> std::pair<int, std::string> {
        auto scheme_end = url.find("://");
        std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
        auto path_start = url.find('/', host_start);
        std::string base = url.substr(0, path_start);
        std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client client(base);
        client.set_connection_timeout(5);
        client.set_read_timeout(10);
        auto res = client.Get(path);
        if (!res) return {0, ""};
        return {res->status, res->body};
    };
}

MockSandbox::MockSandbox(std::string id, std::string workspace, HttpFetcher fetcher)
    : Sandbox(std::move(id), std::move(workspace)), fetcher_(std::move(fetcher)) {}

void MockSandbox::plant_file(const std::string& path, std::string content) {
    vfs_[path] = std::move(content);
}

void MockSandbox::destroy() {
    if (destroyed()) return;  // double destroy is a no-op
    vfs_.clear();
    mark_destroyed();
}

namespace {

// Whitespace split with single/double quote grouping; no expansions.
std::vector<std::string> tokenize(const std::string& command) {
    std::vector<std::string> out;
    std::string cur;
    bool in_word = false;
    char quote = 0;
    for (char ch : command) {
        if (quote) {
            if (ch == quote) quote = 0;
            else cur += ch;
        } else if (ch == '\'' || ch == '"') {
            quote = ch;
            in_word = true;
        } else if (ch == ' ' || ch == '\t') {
            if (in_word) {
                out.push_back(cur);
                cur.clear();
                in_word = false;
            }
        } else {
            cur += ch;
            in_word = true;
        }
    }
    if (in_word) out.push_back(cur);
    return out;
}

}  // namespace

ExecResult MockSandbox::exec(const std::string& command, std::chrono::milliseconds timeout) {
    require_live();
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
    };

    ExecResult result;
    auto argv = tokenize(command);
    if (argv.empty()) {
        result.duration = elapsed();
        return result;
    }
    const std::string& prog = argv[0];

    if (prog == "curl") {
        std::string url;
        bool include_status = false;
        for (std::size_t i = 1; i < argv.size(); ++i) {
            if (argv[i] == "-s" || argv[i] == "-L") continue;
            if (argv[i] == "-i") include_status = true;
            else if (!argv[i].empty() && argv[i][0] != '-') url = argv[i];
        }
        if (url.empty()) {
            result.exit_code = 2;
            result.err = "curl: no URL specified\n";
        } else {
            auto [status, body] = fetcher_(url);
            if (status == 0) {
                result.exit_code = 7;
                result.err = "curl: (7) Failed to connect to host\n";
            } else {
                if (include_status) result.out = "HTTP/1.1 " + std::to_string(status) + "\n\n";
                result.out += body;
            }
        }
    } else if (prog == "cat") {
        for (std::size_t i = 1; i < argv.size(); ++i) {
            auto it = vfs_.find(argv[i]);
            if (it == vfs_.end()) {
                result.err += "cat: " + argv[i] + ": No such file or directory\n";
                result.exit_code = 1;
            } else {
                result.out += it->second;
            }
        }
    } else if (prog == "echo") {
        for (std::size_t i = 1; i < argv.size(); ++i) {
            if (i > 1) result.out += ' ';
            result.out += argv[i];
        }
        result.out += '\n';
    } else if (prog == "ls") {
        std::string prefix = argv.size() > 1 ? argv[1] : "/";
        for (const auto& [path, _] : vfs_)
            if (path.rfind(prefix, 0) == 0) result.out += path + "\n";
    } else if (prog == "sleep") {
        double seconds = argv.size() > 1 ? std::atof(argv[1].c_str()) : 0;
        auto want = std::chrono::milliseconds(static_cast<std::int64_t>(seconds * 1000));
        if (want > timeout) {
            std::this_thread::sleep_for(timeout);
            result.exit_code = -1;
            result.err = "command timed out\n";
            result.duration = elapsed();
            return result;
        }
        std::this_thread::sleep_for(want);
    } else {
        result.exit_code = 127;
        result.err = "sh: 1: " + prog + ": not found\n";
    }

    if (elapsed() > timeout) result.exit_code = -1;
    result.out = cap_stream(std::move(result.out));
    result.err = cap_stream(std::move(result.err));
    result.duration = elapsed();
    return result;
}

}  // namespace cx::sandbox

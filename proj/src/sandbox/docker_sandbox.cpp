#include "sandbox/docker_sandbox.hpp"

#include <sys/socket.h>

#include <httplib.h>

namespace cx::sandbox {

namespace {

using nlohmann::json;

std::unique_ptr<httplib::Client> make_engine_client(const EngineConfig& cfg) {
    std::unique_ptr<httplib::Client> client;
    if (cfg.endpoint.rfind("http://", 0) == 0 || cfg.endpoint.rfind("https://", 0) == 0) {
        client = std::make_unique<httplib::Client>(cfg.endpoint);
    } else {
        client = std::make_unique<httplib::Client>(cfg.endpoint);
        client->set_address_family(AF_UNIX);
    }
    client->set_connection_timeout(cfg.api_timeout_s);
    client->set_read_timeout(cfg.api_timeout_s);
    return client;
}

}  // namespace

std::pair<std::string, std::string> DockerSandbox::demux_stream(const std::string& raw) {
    // Engine attach framing: 1 byte stream type, 3 bytes padding, 4 bytes
    // big-endian payload length, then the payload.
    std::string out, err;
    std::size_t i = 0;
    while (i + 8 <= raw.size()) {
        unsigned char type = static_cast<unsigned char>(raw[i]);
        std::uint32_t len = (static_cast<std::uint32_t>(static_cast<unsigned char>(raw[i + 4])) << 24) |
                            (static_cast<std::uint32_t>(static_cast<unsigned char>(raw[i + 5])) << 16) |
                            (static_cast<std::uint32_t>(static_cast<unsigned char>(raw[i + 6])) << 8) |
                            static_cast<std::uint32_t>(static_cast<unsigned char>(raw[i + 7]));
        i += 8;
        std::size_t take = std::min<std::size_t>(len, raw.size() - i);
        if (type == 2) err.append(raw, i, take);
        else out.append(raw, i, take);
        i += take;
    }
    if (i == 0 && !raw.empty()) out = raw;  // TTY mode: no framing
    return {out, err};
}

static json engine_get(const EngineConfig& cfg, const std::string& path) {
    auto client = make_engine_client(cfg);
    auto res = client->Get(path);
    if (!res)
        throw SandboxError(SandboxError::Kind::EngineUnreachable,
                           "container engine unreachable at " + cfg.endpoint);
    json parsed = json::parse(res->body, nullptr, false);
    return parsed.is_discarded() ? json::object() : parsed;
}

json DockerSandbox::engine_post(const std::string& path, const json& body, int expect_status) {
    auto client = make_engine_client(cfg_);
    auto res = client->Post(path, body.dump(), "application/json");
    if (!res)
        throw SandboxError(SandboxError::Kind::EngineUnreachable,
                           "container engine unreachable at " + cfg_.endpoint);
    if (res->status == 404 && path.find("/containers/create") != std::string::npos)
        throw SandboxError(SandboxError::Kind::ImageMissing,
                           "image not found: " + cfg_.image);
    if (res->status != expect_status && res->status != 200 && res->status != 201 &&
        res->status != 204)
        throw SandboxError(SandboxError::Kind::EngineUnreachable,
                           "engine returned HTTP " + std::to_string(res->status) + " for " + path +
                               ": " + res->body);
    if (res->body.empty()) return json::object();
    json parsed = json::parse(res->body, nullptr, false);
    return parsed.is_discarded() ? json::object() : parsed;
}

DockerSandbox::DockerSandbox(std::string id_hint, std::string workspace, EngineConfig cfg)
    : Sandbox(std::move(id_hint), std::move(workspace)), cfg_(std::move(cfg)) {
    json create_body{
        {"Image", cfg_.image},
        {"Cmd", json::array({"sleep", "infinity"})},
        {"HostConfig",
         {{"Binds", json::array({workspace_path() + ":/workspace"})},
          {"NetworkMode", cfg_.network_mode}}},
    };
    json created = engine_post("/containers/create?name=" + id(), create_body, 201);
    if (!created.contains("Id"))
        throw SandboxError(SandboxError::Kind::EngineUnreachable,
                           "engine create returned no container Id");
    container_id_ = created.at("Id").get<std::string>();
    engine_post("/containers/" + container_id_ + "/start", json::object(), 204);
}

DockerSandbox::~DockerSandbox() {
    try {
        destroy();
    } catch (...) {
        // teardown failures are logged by destroy(); never escape a dtor
    }
}

ExecResult DockerSandbox::exec(const std::string& command, std::chrono::milliseconds timeout) {
    require_live();
    auto start = std::chrono::steady_clock::now();

    json exec_body{{"AttachStdout", true},
                   {"AttachStderr", true},
                   {"Tty", false},
                   {"Cmd", json::array({"/bin/sh", "-c", command})}};
    json created = engine_post("/containers/" + container_id_ + "/exec", exec_body, 201);
    std::string exec_id = created.at("Id").get<std::string>();

    auto client = make_engine_client(cfg_);
    client->set_read_timeout(static_cast<time_t>(timeout.count() / 1000 + 1));
    auto res = client->Post("/exec/" + exec_id + "/start",
                            json{{"Detach", false}, {"Tty", false}}.dump(), "application/json");

    ExecResult result;
    result.duration = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    if (!res) {
        result.exit_code = -1;
        result.err = "command timed out\n";
        return result;
    }

    auto [out, err] = demux_stream(res->body);
    result.out = cap_stream(std::move(out));
    result.err = cap_stream(std::move(err));

    json inspect = engine_get(cfg_, "/exec/" + exec_id + "/json");
    result.exit_code = inspect.value("ExitCode", 0);
    return result;
}

void DockerSandbox::destroy() {
    if (destroyed()) return;
    mark_destroyed();
    if (container_id_.empty()) return;
    try {
        auto client = make_engine_client(cfg_);
        client->Delete("/containers/" + container_id_ + "?force=true");
    } catch (const std::exception&) {
        // best effort; the engine reaps force-removed containers anyway
    }
}

}  // namespace cx::sandbox

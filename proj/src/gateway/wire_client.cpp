#include "gateway/wire_client.hpp"

#include <chrono>
#include <semaphore>
#include <thread>

#include <httplib.h>

#include "util/fs.hpp"

namespace cx::gateway {

namespace {

// Splits "http://host:port/v1" into the client base and the path prefix.
std::pair<std::string, std::string> split_base_url(const std::string& url) {
    auto scheme_end = url.find("://");
    std::size_t path_start =
        url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    std::string prefix = url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {url.substr(0, path_start), prefix};
}

}  // namespace

struct WireBackend::Impl {
    WireConfig cfg;
    std::string client_base;
    std::string path_prefix;
    std::counting_semaphore<4096> slots;

    explicit Impl(WireConfig c)
        : cfg(std::move(c)), slots(std::max(1, cfg.max_concurrent)) {
        std::tie(client_base, path_prefix) = split_base_url(cfg.base_url);
    }
};

WireBackend::WireBackend(WireConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {
    if (impl_->cfg.base_url.empty())
        throw BackendError(BackendError::Kind::Unavailable,
                           "wire backend requires EXPLORER_API_BASE");
}

WireBackend::~WireBackend() = default;

WireConfig WireBackend::config_from_env() {
    WireConfig cfg;
    cfg.base_url = cx::util::getenv_opt("EXPLORER_API_BASE").value_or("");
    cfg.api_key = cx::util::getenv_opt("EXPLORER_API_KEY").value_or("");
    return cfg;
}

json WireBackend::request_to_wire(const ChatRequest& request) {
    json messages = json::array();
    for (const auto& m : request.messages) {
        json wire;
        // A critic note is an engine construct; on the wire it is a user turn.
        Role role = m.role == Role::critic_note ? Role::user : m.role;
        wire["role"] = to_string(role);
        wire["content"] = m.content;
        if (!m.tool_calls.empty()) {
            json calls = json::array();
            for (const auto& tc : m.tool_calls) {
                calls.push_back({{"id", tc.id},
                                 {"type", "function"},
                                 {"function", {{"name", tc.name}, {"arguments", tc.arguments.dump()}}}});
            }
            wire["tool_calls"] = std::move(calls);
        }
        if (!m.tool_call_id.empty()) wire["tool_call_id"] = m.tool_call_id;
        messages.push_back(std::move(wire));
    }

    json body{{"model", request.model},
              {"messages", std::move(messages)},
              {"temperature", request.temperature},
              {"max_tokens", request.max_output_tokens}};
    if (!request.tools.empty()) body["tools"] = request.tools;
    return body;
}

ChatResponse WireBackend::response_from_wire(const json& body) {
    ChatResponse resp;
    try {
        const json& choice = body.at("choices").at(0);
        const json& msg = choice.at("message");
        resp.message.role = Role::assistant;
        if (msg.contains("content") && msg.at("content").is_string())
            resp.message.content = msg.at("content").get<std::string>();
        if (msg.contains("tool_calls")) {
            for (const auto& tc : msg.at("tool_calls")) {
                ToolCall call;
                call.id = tc.value("id", std::string{});
                call.name = tc.at("function").at("name").get<std::string>();
                const std::string args = tc.at("function").value("arguments", std::string{"{}"});
                call.arguments = json::parse(args, nullptr, false);
                if (call.arguments.is_discarded())
                    throw std::runtime_error("tool call arguments are not valid JSON");
                resp.message.tool_calls.push_back(std::move(call));
            }
        }
        if (body.contains("usage")) {
            const json& u = body.at("usage");
            resp.usage.input_tokens =
                u.contains("prompt_tokens") ? u.at("prompt_tokens").get<std::int64_t>()
                                            : u.value("input_tokens", std::int64_t{0});
            resp.usage.output_tokens =
                u.contains("completion_tokens") ? u.at("completion_tokens").get<std::int64_t>()
                                                : u.value("output_tokens", std::int64_t{0});
        }
        std::string finish = choice.value("finish_reason", std::string{"stop"});
        if (finish == "tool_calls") resp.finish_kind = FinishKind::tool_calls;
        else if (finish == "length") resp.finish_kind = FinishKind::length;
        else resp.finish_kind = FinishKind::stop;
        if (resp.usage.input_tokens < 0 || resp.usage.output_tokens < 0)
            throw std::runtime_error("negative usage counts");
    } catch (const std::exception& e) {
        throw BackendError(BackendError::Kind::MalformedResponse,
                           std::string("malformed chat response: ") + e.what());
    }
    return resp;
}

ChatResponse WireBackend::complete(const ChatRequest& request) {
    if (request.messages.empty() || request.messages.front().role != Role::system)
        throw std::invalid_argument("chat request must start with a system message");

    impl_->slots.acquire();
    struct Release {
        std::counting_semaphore<4096>& s;
        ~Release() { s.release(); }
    } release{impl_->slots};

    const json body = request_to_wire(request);
    const std::string path = impl_->path_prefix + "/chat/completions";

    std::unique_ptr<BackendError> last_error;
    for (int attempt = 1; attempt <= impl_->cfg.max_attempts; ++attempt) {
        if (attempt > 1) {
            int delay = impl_->cfg.backoff_base_ms << (attempt - 2);
            if (last_error && last_error->kind == BackendError::Kind::RateLimited &&
                last_error->retry_after_ms > 0) {
                delay = std::max(delay, last_error->retry_after_ms);
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }

        httplib::Client client(impl_->client_base);
        client.set_connection_timeout(impl_->cfg.timeout_s);
        client.set_read_timeout(impl_->cfg.timeout_s);
        httplib::Headers headers;
        if (!impl_->cfg.api_key.empty())
            headers.emplace("Authorization", "Bearer " + impl_->cfg.api_key);

        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = std::make_unique<BackendError>(
                BackendError::Kind::Timeout,
                "request failed: " + httplib::to_string(res.error()));
            continue;
        }
        if (res->status == 429) {
            auto err = std::make_unique<BackendError>(BackendError::Kind::RateLimited,
                                                      "rate limited", res->status);
            if (res->has_header("Retry-After"))
                err->retry_after_ms =
                    std::atoi(res->get_header_value("Retry-After").c_str()) * 1000;
            last_error = std::move(err);
            continue;
        }
        if (res->status != 200) {
            last_error = std::make_unique<BackendError>(
                BackendError::Kind::HttpStatus,
                "chat completion returned HTTP " + std::to_string(res->status), res->status);
            continue;
        }

        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded()) {
            last_error = std::make_unique<BackendError>(BackendError::Kind::MalformedResponse,
                                                        "response body is not JSON");
            continue;
        }
        try {
            return response_from_wire(parsed);
        } catch (const BackendError& e) {
            last_error = std::make_unique<BackendError>(e);
            continue;
        }
    }
    throw *last_error;
}

}  // namespace cx::gateway

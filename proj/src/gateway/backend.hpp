#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cx::gateway {

using json = nlohmann::json;

enum class Role { system, user, assistant, tool, critic_note };
std::string to_string(Role r);
Role role_from_string(const std::string& s);

struct ToolCall {
    std::string id;
    std::string name;       // one of the five registered tools
    json arguments;         // validated against the tool schema at dispatch

    bool operator==(const ToolCall&) const = default;
};

struct Message {
    Role role = Role::user;
    std::string content;
    std::vector<ToolCall> tool_calls;
    std::string tool_call_id;  // required when role == tool

    bool operator==(const Message&) const = default;
};

void to_json(json& j, const ToolCall& v);
void from_json(const json& j, ToolCall& v);
void to_json(json& j, const Message& v);
void from_json(const json& j, Message& v);

struct Usage {
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
};

// Which node of the workflow is calling. Never sent on the wire; the
// scripted backend keys its decision table on it.
enum class CallPurpose { agent, supervisor, critic, fate, extractor };
std::string to_string(CallPurpose p);

struct ChatRequest {
    std::string model;
    std::vector<Message> messages;  // nonempty; first message is the system prompt
    json tools = json::array();     // tool schema list, wire format
    double temperature = 0.0;
    int max_output_tokens = 4096;

    CallPurpose purpose = CallPurpose::agent;
    int team_index = -1;  // chain position of the calling agent, -1 when n/a
    int round = 0;        // 1-based model-call counter within the conversation
    std::string target_host;  // entrypoint under exploration, when applicable
    int target_port = 0;
};

enum class FinishKind { stop, tool_calls, length };

struct ChatResponse {
    Message message;  // assistant role
    Usage usage;
    FinishKind finish_kind = FinishKind::stop;
};

struct BackendError : std::runtime_error {
    enum class Kind { HttpStatus, MalformedResponse, Timeout, RateLimited, Unavailable };
    Kind kind;
    int http_status = 0;
    int retry_after_ms = 0;  // RateLimited hint
    BackendError(Kind k, const std::string& msg, int status = 0)
        : std::runtime_error(msg), kind(k), http_status(status) {}
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

}  // namespace cx::gateway

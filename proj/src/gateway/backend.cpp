#include "gateway/backend.hpp"

#include <stdexcept>

namespace cx::gateway {

std::string to_string(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
        case Role::tool: return "tool";
        case Role::critic_note: return "critic_note";
    }
    return "user";
}

Role role_from_string(const std::string& s) {
    if (s == "system") return Role::system;
    if (s == "user") return Role::user;
    if (s == "assistant") return Role::assistant;
    if (s == "tool") return Role::tool;
    if (s == "critic_note") return Role::critic_note;
    throw std::invalid_argument("unknown message role: " + s);
}

std::string to_string(CallPurpose p) {
    switch (p) {
        case CallPurpose::agent: return "agent";
        case CallPurpose::supervisor: return "supervisor";
        case CallPurpose::critic: return "critic";
        case CallPurpose::fate: return "fate";
        case CallPurpose::extractor: return "extractor";
    }
    return "agent";
}

void to_json(json& j, const ToolCall& v) {
    j = json{{"id", v.id}, {"name", v.name}, {"arguments", v.arguments}};
}

void from_json(const json& j, ToolCall& v) {
    v.id = j.value("id", std::string{});
    v.name = j.at("name").get<std::string>();
    v.arguments = j.value("arguments", json::object());
}

void to_json(json& j, const Message& v) {
    j = json{{"role", to_string(v.role)}, {"content", v.content}};
    if (!v.tool_calls.empty()) j["tool_calls"] = v.tool_calls;
    if (!v.tool_call_id.empty()) j["tool_call_id"] = v.tool_call_id;
}

void from_json(const json& j, Message& v) {
    v.role = role_from_string(j.at("role").get<std::string>());
    v.content = j.value("content", std::string{});
    v.tool_calls = j.value("tool_calls", std::vector<ToolCall>{});
    v.tool_call_id = j.value("tool_call_id", std::string{});
}

}  // namespace cx::gateway

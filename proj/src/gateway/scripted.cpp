#include "gateway/scripted.hpp"

#include <algorithm>
#include <stdexcept>

#include "util/fs.hpp"

namespace cx::gateway {

namespace {

CallPurpose purpose_from_string(const std::string& s) {
    if (s == "agent") return CallPurpose::agent;
    if (s == "supervisor") return CallPurpose::supervisor;
    if (s == "critic") return CallPurpose::critic;
    if (s == "fate") return CallPurpose::fate;
    if (s == "extractor") return CallPurpose::extractor;
    throw std::invalid_argument("unknown playbook purpose: " + s);
}

PlaybookRule::Action parse_action(const json& j) {
    PlaybookRule::Action a;
    a.text = j.value("text", std::string{});
    if (j.contains("tool")) {
        ToolCall tc;
        tc.name = j.at("tool").at("name").get<std::string>();
        tc.arguments = j.at("tool").value("arguments", json::object());
        a.tool_calls.push_back(std::move(tc));
    }
    if (j.contains("tools")) {
        for (const auto& t : j.at("tools")) {
            ToolCall tc;
            tc.name = t.at("name").get<std::string>();
            tc.arguments = t.value("arguments", json::object());
            a.tool_calls.push_back(std::move(tc));
        }
    }
    if (j.contains("usage")) {
        a.usage.input_tokens = j.at("usage").value("input", std::int64_t{0});
        a.usage.output_tokens = j.at("usage").value("output", std::int64_t{0});
    }
    return a;
}

// True when rule `a` fires on every request rule `b` would fire on, i.e.
// `b` can never be reached if `a` precedes it.
bool subsumes(const PlaybookRule& a, const PlaybookRule& b) {
    if (a.purpose && (!b.purpose || *a.purpose != *b.purpose)) return false;
    if (a.agent_index && (!b.agent_index || *a.agent_index != *b.agent_index)) return false;
    if (a.round && (!b.round || *a.round != *b.round)) return false;
    if (a.observation_contains) {
        if (!b.observation_contains) return false;
        if (b.observation_contains->find(*a.observation_contains) == std::string::npos)
            return false;
    }
    return true;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace

ScriptedPlaybook ScriptedPlaybook::from_json(const json& doc) {
    ScriptedPlaybook pb;
    pb.name = doc.value("name", std::string{"unnamed"});
    pb.default_action = doc.contains("default")
                            ? parse_action(doc.at("default"))
                            : PlaybookRule::Action{"", {ToolCall{"", "finish", json::object()}}, {10, 5}};

    for (const auto& r : doc.value("rules", json::array())) {
        PlaybookRule rule;
        if (r.contains("purpose")) rule.purpose = purpose_from_string(r.at("purpose").get<std::string>());
        if (r.contains("agent_index")) rule.agent_index = r.at("agent_index").get<int>();
        if (r.contains("round")) rule.round = r.at("round").get<int>();
        if (r.contains("observation_contains"))
            rule.observation_contains = r.at("observation_contains").get<std::string>();
        if (r.contains("respond")) {
            rule.actions.emplace_back(1.0, parse_action(r.at("respond")));
        } else if (r.contains("choose")) {
            for (const auto& c : r.at("choose"))
                rule.actions.emplace_back(c.at("weight").get<double>(), parse_action(c.at("respond")));
            if (rule.actions.empty())
                throw std::invalid_argument("playbook rule has empty 'choose' list");
        } else {
            throw std::invalid_argument("playbook rule needs 'respond' or 'choose'");
        }
        pb.rules.push_back(std::move(rule));
    }

    for (std::size_t j = 0; j < pb.rules.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (subsumes(pb.rules[i], pb.rules[j])) {
                pb.warnings.push_back("rule " + std::to_string(j + 1) + " is unreachable (shadowed by rule " +
                                      std::to_string(i + 1) + ")");
                break;
            }
        }
    }
    return pb;
}

ScriptedPlaybook ScriptedPlaybook::load(const std::string& path) {
    std::string text = cx::util::read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("playbook parse error at " + path + ":" +
                                 std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
    }
    try {
        return from_json(doc);
    } catch (const std::exception& e) {
        throw std::runtime_error("playbook " + path + ": " + e.what());
    }
}

ScriptedPlaybook ScriptedPlaybook::finish_only() {
    ScriptedPlaybook pb;
    pb.name = "finish_only";
    pb.default_action = PlaybookRule::Action{"nothing to try", {ToolCall{"", "finish", json::object()}}, {10, 5}};
    return pb;
}

ScriptedBackend::ScriptedBackend(ScriptedPlaybook playbook, std::uint64_t seed)
    : playbook_(std::move(playbook)), seed_(seed) {}

namespace {

// Scripted actions may reference the live context: {{target_host}},
// {{target_port}}, and {{observed_flag}} (first HTB{...} token in the last
// message). Substitution is pure, so replay determinism holds.
std::string substitute_placeholders(std::string text, const ChatRequest& request,
                                    const std::string& last) {
    auto replace_all = [&](const std::string& from, const std::string& to) {
        std::size_t pos = 0;
        while ((pos = text.find(from, pos)) != std::string::npos) {
            text.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all("{{target_host}}", request.target_host);
    replace_all("{{target_port}}", std::to_string(request.target_port));
    if (text.find("{{observed_flag}}") != std::string::npos) {
        std::string flag;
        auto open = last.find("HTB{");
        if (open != std::string::npos) {
            auto close = last.find('}', open);
            if (close != std::string::npos) flag = last.substr(open, close - open + 1);
        }
        replace_all("{{observed_flag}}", flag);
    }
    return text;
}

json substitute_in_json(const json& value, const ChatRequest& request, const std::string& last) {
    if (value.is_string())
        return substitute_placeholders(value.get<std::string>(), request, last);
    if (value.is_object()) {
        json out = json::object();
        for (auto it = value.begin(); it != value.end(); ++it)
            out[it.key()] = substitute_in_json(it.value(), request, last);
        return out;
    }
    if (value.is_array()) {
        json out = json::array();
        for (const auto& v : value) out.push_back(substitute_in_json(v, request, last));
        return out;
    }
    return value;
}

}  // namespace

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
    if (request.messages.empty() || request.messages.front().role != Role::system)
        throw std::invalid_argument("chat request must start with a system message");

    const std::string& last = request.messages.back().content;

    const PlaybookRule::Action* chosen = nullptr;
    for (const auto& rule : playbook_.rules) {
        if (rule.purpose && *rule.purpose != request.purpose) continue;
        if (rule.agent_index && *rule.agent_index != request.team_index) continue;
        if (rule.round && *rule.round != request.round) continue;
        if (rule.observation_contains && last.find(*rule.observation_contains) == std::string::npos)
            continue;

        if (rule.actions.size() == 1) {
            chosen = &rule.actions.front().second;
        } else {
            std::uint64_t h = fnv1a(0xcbf29ce484222325ULL, &seed_, sizeof seed_);
            auto purpose = to_string(request.purpose);
            h = fnv1a(h, purpose.data(), purpose.size());
            h = fnv1a(h, &request.team_index, sizeof request.team_index);
            h = fnv1a(h, &request.round, sizeof request.round);
            h = fnv1a(h, request.target_host.data(), request.target_host.size());
            h = fnv1a(h, &request.target_port, sizeof request.target_port);
            h = fnv1a(h, last.data(), last.size());
            double u = static_cast<double>(h % 1'000'000'007ULL) / 1'000'000'007.0;

            double total = 0;
            for (const auto& [w, _] : rule.actions) total += w;
            double x = u * total;
            for (const auto& [w, action] : rule.actions) {
                x -= w;
                if (x <= 0) {
                    chosen = &action;
                    break;
                }
            }
            if (!chosen) chosen = &rule.actions.back().second;
        }
        break;
    }
    if (!chosen) chosen = &playbook_.default_action;

    ChatResponse resp;
    resp.message.role = Role::assistant;
    resp.message.content = substitute_placeholders(chosen->text, request, last);
    int k = 0;
    for (const auto& tc : chosen->tool_calls) {
        ToolCall out = tc;
        out.arguments = substitute_in_json(out.arguments, request, last);
        if (out.id.empty())
            out.id = "tc-" + std::to_string(request.round) + "-" + std::to_string(k++);
        resp.message.tool_calls.push_back(std::move(out));
    }
    resp.usage = chosen->usage;
    resp.finish_kind = resp.message.tool_calls.empty() ? FinishKind::stop : FinishKind::tool_calls;
    return resp;
}

}  // namespace cx::gateway

#include "agent/runtime.hpp"

#include <httplib.h>

#include "util/fs.hpp"

namespace cx::agent {

using cx::domain::AgentRecord;
using cx::domain::ExitReason;
using cx::domain::FlagSubmission;
using cx::gateway::ChatRequest;
using cx::gateway::ChatResponse;
using cx::gateway::Message;
using cx::gateway::Role;
using cx::gateway::ToolCall;
using cx::trace::EventKind;

namespace {

// Budget is the sole limiter by design; this ceiling only stops a
// zero-cost scripted loop from spinning forever.
constexpr int kMaxRounds = 10000;

constexpr std::size_t kTraceOutputCap = 4096;

std::string cap_for_trace(std::string s) {
    if (s.size() <= kTraceOutputCap) return s;
    s.resize(kTraceOutputCap);
    return s + "\n...[truncated]";
}

std::string percent_label(std::int64_t ppm) {
    // 500000 -> "50", 825000 -> "82.5"
    double pct = static_cast<double>(ppm) / 10'000.0;
    char buf[32];
    if (pct == static_cast<std::int64_t>(pct))
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(pct));
    else
        std::snprintf(buf, sizeof buf, "%.1f", pct);
    return buf;
}

void scrape_failed_approaches(const std::string& content, std::vector<std::string>& out) {
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto eol = content.find('\n', pos);
        std::string line = cx::util::trim(
            content.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos));
        if (line.rfind("FAILED:", 0) == 0) {
            std::string approach = cx::util::trim(line.substr(7));
            if (!approach.empty()) out.push_back(approach);
        }
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
}

std::pair<int, std::string> http_fetch(const std::string& method, const std::string& url,
                                       const std::string& body) {
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    std::string base = url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    client.set_connection_timeout(5);
    client.set_read_timeout(15);
    httplib::Result res = method == "POST"
                              ? client.Post(path, body, "application/x-www-form-urlencoded")
                              : client.Get(path);
    if (!res) return {0, ""};
    return {res->status, res->body};
}

}  // namespace

const cx::gateway::json& tool_schemas() {
    static const cx::gateway::json schemas = [] {
        auto fn = [](const char* name, const char* desc, cx::gateway::json props,
                     cx::gateway::json required) {
            return cx::gateway::json{
                {"type", "function"},
                {"function",
                 {{"name", name},
                  {"description", desc},
                  {"parameters",
                   {{"type", "object"}, {"properties", std::move(props)}, {"required", std::move(required)}}}}}};
        };
        return cx::gateway::json::array({
            fn("shell_exec", "Run a shell command inside your sandbox.",
               {{"command", {{"type", "string"}}},
                {"timeout_ms", {{"type", "integer"}, {"minimum", 1}}}},
               {"command"}),
            fn("http_request", "Issue a single HTTP request to the target.",
               {{"method", {{"type", "string"}, {"enum", {"GET", "POST"}}}},
                {"url", {{"type", "string"}}},
                {"body", {{"type", "string"}}}},
               {"url"}),
            fn("write_file", "Persist an evidence file under your workspace.",
               {{"path", {{"type", "string"}}}, {"content", {{"type", "string"}}}},
               cx::gateway::json::array({"path", "content"})),
            fn("submit_flag", "Submit a candidate flag for the target.",
               {{"value", {{"type", "string"}}}}, {"value"}),
            fn("finish", "Stop: nothing further worth trying.",
               {{"reason", {{"type", "string"}}}}, cx::gateway::json::array()),
        });
    }();
    return schemas;
}

void inject_reflection(std::vector<Message>& conversation, std::int64_t threshold_ppm,
                       const PromptSet& prompts, cx::trace::TraceSink& sink,
                       const std::string& agent_id) {
    Message prompt;
    prompt.role = Role::user;
    prompt.content =
        PromptSet::render(prompts.get("reflection"), {{"percent", percent_label(threshold_ppm)}});
    conversation.push_back(std::move(prompt));
    sink.emit(EventKind::Reflection,
              {{"agent_id", agent_id}, {"threshold", static_cast<double>(threshold_ppm) / 1e6}});
}

FlagSubmission submit_flag(const std::string& value, const cx::domain::EntryPoint& entrypoint,
                           const cx::domain::GroundTruth& manifest, cx::trace::TraceSink& sink,
                           const std::string& agent_id, int round_index) {
    FlagSubmission sub;
    sub.agent_id = agent_id;
    sub.entrypoint = entrypoint;
    sub.value = value;
    sub.correct = cx::domain::check_flag(value, entrypoint, manifest);
    sub.round_index = round_index;
    auto ev = sink.emit(EventKind::FlagSubmitted, {{"agent_id", agent_id},
                                                   {"entrypoint", entrypoint},
                                                   {"value", value},
                                                   {"correct", sub.correct},
                                                   {"round_index", round_index}});
    sub.wall_clock_ms = ev.wall_clock_ms;
    return sub;
}

AgentRunOutput run_agent(const AgentContext& ctx) {
    const auto& config = *ctx.config;
    AgentRunOutput output;
    AgentRecord& record = output.record;
    record.agent_id = ctx.agent_id;
    record.team_index = ctx.team_index;
    record.entrypoint = ctx.entrypoint;

    auto emit = [&](EventKind kind, cx::gateway::json payload) {
        auto ev = ctx.sink->emit(kind, std::move(payload));
        output.events.push_back(ev);
        return ev;
    };

    BudgetLedger ledger(config.base_budget, config.reflection_thresholds_ppm,
                        config.max_extensions);
    const auto& pricing = config.pricing_table.at(config.model);

    // System prompt: purpose, toolset, host:port constraints.
    std::vector<Message>& conversation = output.conversation;
    {
        Message system;
        system.role = Role::system;
        system.content = PromptSet::render(
            ctx.prompts->get("agent_system"),
            {{"host", ctx.entrypoint.host},
             {"port", std::to_string(ctx.entrypoint.port)},
             {"service", cx::domain::to_string(ctx.entrypoint.service_kind)}});
        conversation.push_back(std::move(system));

        std::string directive_block;
        if (ctx.directive) {
            directive_block = "Supervisor directive (confidence " +
                              std::to_string(ctx.directive->confidence).substr(0, 4) + "): " +
                              ctx.directive->hypothesis + "\n";
            if (!ctx.directive->rationale.empty())
                directive_block += "Rationale: " + ctx.directive->rationale + "\n";
            if (!ctx.directive->suggested_techniques.empty()) {
                directive_block += "Suggested techniques:";
                for (const auto& t : ctx.directive->suggested_techniques)
                    directive_block += " " + t + ";";
                directive_block += "\n";
            }
        }
        std::string handoff_block;
        if (!ctx.prior_record.empty())
            handoff_block = "Exploration record from the previous agent:\n" + ctx.prior_record + "\n";

        Message task;
        task.role = Role::user;
        task.content = PromptSet::render(
            ctx.prompts->get("agent_task"),
            {{"host", ctx.entrypoint.host},
             {"port", std::to_string(ctx.entrypoint.port)},
             {"service", cx::domain::to_string(ctx.entrypoint.service_kind)},
             {"banner", ctx.entrypoint.banner},
             {"directive_block", directive_block},
             {"handoff_block", handoff_block}});
        conversation.push_back(std::move(task));
    }

    bool solved = false;
    bool finished = false;
    bool pending_reflection = false;

    while (true) {
        // Cap check precedes every call; the call in flight may overshoot.
        if (ledger.exhausted()) {
            std::string reflection =
                record.reflection_notes.empty() ? "" : record.reflection_notes.back();
            record.cost = ledger.spent();
            record.extensions_granted = ledger.extensions();
            Fate fate = ctx.decide_fate ? ctx.decide_fate(record, reflection) : Fate::HandOff;
            if (fate == Fate::Extend && ledger.can_extend()) {
                ledger.extend();
                record.extensions_granted = ledger.extensions();
                emit(EventKind::BudgetExtended, {{"agent_id", ctx.agent_id},
                                                 {"extensions", ledger.extensions()},
                                                 {"new_cap", ledger.cap().dollars()}});
                continue;
            }
            switch (fate) {
                case Fate::GiveUp: record.exit_reason = ExitReason::GiveUp; break;
                case Fate::BudgetExhausted: record.exit_reason = ExitReason::BudgetExhausted; break;
                default: record.exit_reason = ExitReason::HandOff; break;
            }
            break;
        }
        if (record.rounds >= kMaxRounds) {
            record.exit_reason = ExitReason::Error;
            break;
        }

        ChatRequest request;
        request.model = config.model;
        request.messages = conversation;
        request.tools = tool_schemas();
        request.purpose = cx::gateway::CallPurpose::agent;
        request.team_index = ctx.team_index;
        request.round = record.rounds + 1;
        request.target_host = ctx.entrypoint.host;
        request.target_port = ctx.entrypoint.port;

        ChatResponse response;
        try {
            response = ctx.backend->complete(request);
        } catch (const std::exception& e) {
            // The gateway already retried; a surviving failure ends the agent.
            record.exit_reason = ExitReason::Error;
            record.failed_approaches.push_back(std::string("backend failure: ") + e.what());
            break;
        }

        record.rounds += 1;
        emit(EventKind::ModelCall, {{"agent_id", ctx.agent_id},
                                    {"purpose", "agent"},
                                    {"model", config.model},
                                    {"round", record.rounds},
                                    {"usage",
                                     {{"input_tokens", response.usage.input_tokens},
                                      {"output_tokens", response.usage.output_tokens}}}});
        auto crossed = ledger.charge(usage_cost(response.usage, pricing));

        conversation.push_back(response.message);
        if (pending_reflection && !response.message.content.empty()) {
            record.reflection_notes.push_back(response.message.content);
            pending_reflection = false;
        }
        scrape_failed_approaches(response.message.content, record.failed_approaches);

        // Tool dispatch: one call per turn; extras are rejected as
        // observations so flaky backends stay comparable.
        bool sandbox_failed = false;
        for (std::size_t t = 0; t < response.message.tool_calls.size(); ++t) {
            const ToolCall& call = response.message.tool_calls[t];
            Message observation;
            observation.role = Role::tool;
            observation.tool_call_id = call.id;

            if (t > 0) {
                observation.content = "tool error: one tool call per turn; ignored";
                conversation.push_back(std::move(observation));
                continue;
            }

            try {
                if (call.name == "shell_exec") {
                    if (!call.arguments.contains("command") ||
                        !call.arguments.at("command").is_string()) {
                        observation.content = "tool error: shell_exec requires string 'command'";
                    } else {
                        std::string command = call.arguments.at("command").get<std::string>();
                        auto timeout = std::chrono::milliseconds(
                            call.arguments.value("timeout_ms", 30'000));
                        auto result = ctx.sandbox->exec(command, timeout);
                        observation.content = result.out;
                        if (!result.err.empty()) observation.content += result.err;
                        emit(EventKind::ToolExec,
                             {{"agent_id", ctx.agent_id},
                              {"tool", "shell_exec"},
                              {"command", command},
                              {"exit_code", result.exit_code},
                              {"duration_ms", result.duration.count()},
                              {"output", cap_for_trace(observation.content)}});
                    }
                } else if (call.name == "http_request") {
                    if (!call.arguments.contains("url") || !call.arguments.at("url").is_string()) {
                        observation.content = "tool error: http_request requires string 'url'";
                    } else {
                        std::string method = call.arguments.value("method", std::string{"GET"});
                        std::string url = call.arguments.at("url").get<std::string>();
                        auto [status, body] = http_fetch(method, url,
                                                         call.arguments.value("body", std::string{}));
                        observation.content =
                            status == 0 ? "connection failed"
                                        : "HTTP " + std::to_string(status) + "\n" +
                                              cx::sandbox::cap_stream(std::move(body));
                        emit(EventKind::ToolExec,
                             {{"agent_id", ctx.agent_id},
                              {"tool", "http_request"},
                              {"command", method + " " + url},
                              {"exit_code", status},
                              {"duration_ms", 0},
                              {"output", cap_for_trace(observation.content)}});
                    }
                } else if (call.name == "write_file") {
                    if (!call.arguments.contains("path") || !call.arguments.contains("content")) {
                        observation.content = "tool error: write_file requires 'path' and 'content'";
                    } else {
                        std::string rel = call.arguments.at("path").get<std::string>();
                        std::string content = call.arguments.at("content").get<std::string>();
                        try {
                            ctx.sandbox->write_file(rel, content);
                            observation.content = "written: " + rel;
                            emit(EventKind::EvidenceWritten, {{"agent_id", ctx.agent_id},
                                                              {"path", rel},
                                                              {"bytes", content.size()}});
                        } catch (const cx::sandbox::SandboxError& e) {
                            if (e.kind == cx::sandbox::SandboxError::Kind::BadPath)
                                observation.content = std::string("tool error: ") + e.what();
                            else
                                throw;
                        }
                    }
                } else if (call.name == "submit_flag") {
                    if (!call.arguments.contains("value") ||
                        !call.arguments.at("value").is_string()) {
                        observation.content = "tool error: submit_flag requires string 'value'";
                    } else {
                        std::string value = call.arguments.at("value").get<std::string>();
                        FlagSubmission sub;
                        sub.agent_id = ctx.agent_id;
                        sub.entrypoint = ctx.entrypoint;
                        sub.value = value;
                        sub.correct = cx::domain::check_flag(value, ctx.entrypoint, *ctx.ground_truth);
                        sub.round_index = record.rounds;
                        auto ev = emit(EventKind::FlagSubmitted,
                                       {{"agent_id", ctx.agent_id},
                                        {"entrypoint", ctx.entrypoint},
                                        {"value", value},
                                        {"correct", sub.correct},
                                        {"round_index", record.rounds}});
                        sub.wall_clock_ms = ev.wall_clock_ms;
                        output.submissions.push_back(sub);
                        observation.content =
                            std::string("{\"success\": ") + (sub.correct ? "true" : "false") + "}";
                        if (sub.correct) solved = true;  // idempotent under duplicates
                    }
                } else if (call.name == "finish") {
                    finished = true;
                    observation.content = "acknowledged";
                } else {
                    observation.content = "tool error: unknown tool '" + call.name + "'";
                }
            } catch (const cx::sandbox::SandboxError& e) {
                record.exit_reason = ExitReason::Error;
                record.failed_approaches.push_back(std::string("sandbox failure: ") + e.what());
                sandbox_failed = true;
                observation.content = std::string("sandbox failure: ") + e.what();
            }
            conversation.push_back(std::move(observation));
        }
        if (sandbox_failed) break;

        if (response.message.tool_calls.empty() && !finished) {
            Message nudge;
            nudge.role = Role::user;
            nudge.content = "Continue. Use a tool, or call finish when you are done.";
            conversation.push_back(std::move(nudge));
        }

        // Thresholds fire after the turn's tools so a flag accepted in the
        // same call is already in effect when the critic speaks.
        for (auto ppm : crossed) {
            inject_reflection(conversation, ppm, *ctx.prompts, *ctx.sink, ctx.agent_id);
            pending_reflection = true;
            if (ctx.critic) {
                if (auto interjection = ctx.critic(record.rounds, ppm, conversation)) {
                    Message note;
                    note.role = Role::critic_note;
                    note.content = *interjection;
                    conversation.push_back(std::move(note));
                }
            }
        }

        if (solved) {
            record.exit_reason = ExitReason::Solved;
            break;
        }
        if (finished) {
            record.exit_reason = ExitReason::GiveUp;
            break;
        }
    }

    record.cost = ledger.spent();
    record.extensions_granted = ledger.extensions();
    return output;
}

}  // namespace cx::agent

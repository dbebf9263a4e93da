#include "extraction/findings.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

namespace cx::extraction {

using cx::domain::Severity;
using cx::gateway::ChatRequest;
using cx::gateway::Message;
using cx::gateway::Role;
using cx::trace::EventKind;
using nlohmann::json;

namespace {

void warn(const ExtractionContext& ctx, const std::string& msg) {
    if (ctx.warnings) ctx.warnings->push_back("extraction[" + ctx.agent_id + "]: " + msg);
}

bool evidence_ref_ok(const std::string& ref) {
    if (ref.empty() || ref.front() == '/') return false;
    auto normal = std::filesystem::path(ref).lexically_normal();
    std::string s = normal.string();
    return !s.empty() && s.rfind("..", 0) != 0;
}

}  // namespace

std::string render_compact_log(const std::vector<cx::trace::TraceEvent>& agent_log) {
    std::string out;
    for (const auto& e : agent_log) {
        switch (e.kind) {
            case EventKind::ToolExec:
                out += "$ " + e.payload.value("command", std::string{}) + "\n";
                out += e.payload.value("output", std::string{}) + "\n";
                break;
            case EventKind::FlagSubmitted:
                out += "submit_flag(" + e.payload.value("value", std::string{}) + ") -> " +
                       (e.payload.value("correct", false) ? "accepted" : "rejected") + "\n";
                break;
            case EventKind::EvidenceWritten:
                out += "[evidence] " + e.payload.value("path", std::string{}) + "\n";
                break;
            case EventKind::Reflection:
                out += "[reflection checkpoint]\n";
                break;
            default:
                break;
        }
    }
    return out;
}

std::optional<std::vector<Finding>> parse_extractor_reply(const std::string& text,
                                                          const ExtractionContext& ctx) {
    auto open = text.find('[');
    auto close = text.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open) return std::nullopt;
    json arr = json::parse(text.substr(open, close - open + 1), nullptr, false);
    if (arr.is_discarded() || !arr.is_array()) return std::nullopt;

    std::vector<Finding> findings;
    int k = 0;
    for (const auto& item : arr) {
        if (!item.is_object()) continue;
        Finding f;
        f.agent_id = ctx.agent_id;
        f.entrypoint = ctx.entrypoint;
        f.finding_id = ctx.agent_id + "-f" + std::to_string(k);
        f.title = item.value("title", std::string{});
        if (f.title.empty()) {
            warn(ctx, "dropped a finding without a title");
            continue;
        }
        f.description = item.value("description", std::string{});
        std::string sev = item.value("severity", std::string{"Info"});
        if (auto parsed = cx::domain::try_severity_from_string(sev)) {
            f.severity = *parsed;
        } else {
            warn(ctx, "unknown severity label '" + sev + "', degraded to Info");
            f.severity = Severity::Info;
        }
        f.confidence = std::clamp(item.value("confidence", 0.0), 0.0, 1.0);
        f.endpoints = item.value("endpoints", std::vector<std::string>{});
        if (item.contains("credentials") && item.at("credentials").is_array())
            f.credentials = item.at("credentials").get<std::vector<std::string>>();
        for (const auto& ref : item.value("evidence_refs", std::vector<std::string>{})) {
            if (evidence_ref_ok(ref)) f.evidence_refs.push_back(ref);
            else warn(ctx, "dropped evidence ref outside the agent workspace: " + ref);
        }
        findings.push_back(std::move(f));
        ++k;
    }
    return findings;
}

std::vector<Finding> extract_findings(const std::vector<cx::trace::TraceEvent>& agent_log,
                                      cx::gateway::Backend& backend,
                                      const ExtractionContext& ctx) {
    std::string log = render_compact_log(agent_log);
    if (log.size() > 60'000) log.resize(60'000);

    ChatRequest request;
    request.model = ctx.model;
    request.purpose = cx::gateway::CallPurpose::extractor;
    request.team_index = ctx.team_index;
    request.round = 1;
    Message system;
    system.role = Role::system;
    system.content = ctx.prompts->get("extractor_system");
    Message task;
    task.role = Role::user;
    task.content = cx::agent::PromptSet::render(
        ctx.prompts->get("extractor_task"),
        {{"agent_id", ctx.agent_id},
         {"host", ctx.entrypoint.host},
         {"port", std::to_string(ctx.entrypoint.port)},
         {"log", log}});
    request.messages = {system, task};

    std::vector<Finding> findings;
    auto emit_model_call = [&](const cx::gateway::ChatResponse& response) {
        if (!ctx.sink) return;
        ctx.sink->emit(cx::trace::EventKind::ModelCall,
                       {{"purpose", "extractor"},
                        {"agent_id", ctx.agent_id},
                        {"model", request.model},
                        {"usage",
                         {{"input_tokens", response.usage.input_tokens},
                          {"output_tokens", response.usage.output_tokens}}}});
    };
    try {
        auto response = backend.complete(request);
        emit_model_call(response);
        auto parsed = parse_extractor_reply(response.message.content, ctx);
        if (!parsed) {
            // One repair attempt, then degrade; extraction must never fail a run.
            request.messages.push_back(response.message);
            Message repair;
            repair.role = Role::user;
            repair.content = ctx.prompts->get("extractor_repair");
            request.messages.push_back(std::move(repair));
            request.round = 2;
            auto second = backend.complete(request);
            emit_model_call(second);
            parsed = parse_extractor_reply(second.message.content, ctx);
            if (!parsed) {
                warn(ctx, "extractor reply unparseable after repair; no findings recorded");
                parsed = std::vector<Finding>{};
            }
        }
        findings = std::move(*parsed);
    } catch (const std::exception& e) {
        warn(ctx, std::string("extractor backend failure: ") + e.what());
        return {};
    }

    if (ctx.sink) {
        for (const auto& f : findings)
            ctx.sink->emit(EventKind::FindingRecorded, {{"agent_id", ctx.agent_id},
                                                        {"finding", f}});
    }
    return findings;
}

std::vector<CorpusEntry> aggregate(const std::vector<Finding>& findings) {
    std::map<std::tuple<std::string, std::string, Severity>, CorpusEntry> merged;
    for (const auto& f : findings) {
        auto key = std::make_tuple(f.entrypoint.key(), f.title, f.severity);
        auto [it, inserted] = merged.try_emplace(key);
        if (inserted) it->second.finding = f;
        it->second.agent_ids.push_back(f.agent_id);
    }
    std::vector<CorpusEntry> out;
    for (auto& [_, entry] : merged) {
        std::sort(entry.agent_ids.begin(), entry.agent_ids.end());
        entry.agent_ids.erase(std::unique(entry.agent_ids.begin(), entry.agent_ids.end()),
                              entry.agent_ids.end());
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<CorpusEntry> aggregate(const std::vector<CorpusEntry>& corpus) {
    std::map<std::tuple<std::string, std::string, Severity>, CorpusEntry> merged;
    for (const auto& e : corpus) {
        auto key = std::make_tuple(e.finding.entrypoint.key(), e.finding.title, e.finding.severity);
        auto [it, inserted] = merged.try_emplace(key);
        if (inserted) it->second.finding = e.finding;
        for (const auto& id : e.agent_ids) it->second.agent_ids.push_back(id);
    }
    std::vector<CorpusEntry> out;
    for (auto& [_, entry] : merged) {
        std::sort(entry.agent_ids.begin(), entry.agent_ids.end());
        entry.agent_ids.erase(std::unique(entry.agent_ids.begin(), entry.agent_ids.end()),
                              entry.agent_ids.end());
        out.push_back(std::move(entry));
    }
    return out;
}

json corpus_to_json(const std::vector<CorpusEntry>& corpus) {
    json arr = json::array();
    for (const auto& e : corpus) {
        json j = e.finding;
        j["agent_ids"] = e.agent_ids;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace cx::extraction

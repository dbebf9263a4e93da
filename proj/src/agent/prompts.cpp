#include "agent/prompts.hpp"

#include <filesystem>
#include <stdexcept>
#include <vector>

#include "util/fs.hpp"

namespace cx::agent {

namespace {

const std::map<std::string, std::string> kBuiltins = {
    {"agent_system",
     "You are an autonomous offensive-security agent working inside an isolated sandbox.\n"
     "Scope: the single target {{host}}:{{port}} ({{service}}). Never touch anything else.\n"
     "Tools: shell_exec runs a shell command in your sandbox; http_request issues one HTTP "
     "request; write_file persists evidence under your workspace; submit_flag submits a "
     "candidate flag; finish ends your run when you are out of ideas.\n"
     "Work one hypothesis at a time. When an approach fails, record it on its own line as\n"
     "FAILED: <approach>\n"
     "Flags look like HTB{...}. Submit a flag the moment you capture one."},
    {"agent_task",
     "Target: {{host}}:{{port}} ({{service}})\n"
     "Banner: {{banner}}\n"
     "{{directive_block}}{{handoff_block}}"
     "Begin exploring the target."},
    {"reflection",
     "Budget checkpoint: {{percent}}% of your current budget is spent. Pause and reflect on "
     "the conversation so far — list the approaches that failed, name any unproductive "
     "patterns, and state the single most promising next step. Reply with that reflection "
     "before doing anything else."},
    {"fate_system",
     "You are the decision node attached to a security agent whose budget is exhausted. "
     "Using the agent's latest self-reflection, decide its fate. Reply with exactly one "
     "word: EXTEND to grant more budget, HANDOFF to yield to the next agent in the chain, "
     "or GIVEUP to abandon this line of attack."},
    {"fate_task",
     "Budget state: spent {{spent}} of cap {{cap}}, {{extensions}} extension(s) used out of "
     "{{max_extensions}}.\nLatest reflection:\n{{reflection}}"},
    {"supervisor_system",
     "You are the global supervisor of a chained security exploration. Synthesize the "
     "exploration history — security findings, failed approaches, surface notes — into the "
     "best hypothesis for the next agent. Respond with JSON: {\"hypothesis\": string, "
     "\"rationale\": string, \"confidence\": number in [0,1], \"suggested_techniques\": "
     "[string]}."},
    {"supervisor_task",
     "Target: {{host}}:{{port}}.\nExploration history:\n{{history}}"},
    {"critic_system",
     "You are the critic attached to a struggling exploration chain. The current path looks "
     "fruitless. Interject with direct, concrete advice that forces a pivot: name untried "
     "techniques, not encouragement."},
    {"critic_task",
     "The chain has produced {{failures}} failed agent(s) on {{host}}:{{port}} so far. "
     "Recent conversation excerpt:\n{{excerpt}}\nInterject now."},
    {"extractor_system",
     "You analyze the execution log of a terminated security agent, independent of its "
     "conversation. Extract structured findings: discovered endpoints, identified "
     "vulnerabilities, recovered credentials. Respond with a JSON array; each element is "
     "{\"title\": string, \"description\": string, \"severity\": one of Critical/High/"
     "Medium/Low/Info, \"confidence\": number in [0,1], \"endpoints\": [string], "
     "\"credentials\": [string], \"evidence_refs\": [string]}. Respond with [] if the log "
     "shows nothing of note."},
    {"extractor_task", "Execution log of agent {{agent_id}} on {{host}}:{{port}}:\n{{log}}"},
    {"extractor_repair",
     "Your previous reply was not valid JSON. Respond again with only the JSON array of "
     "findings, no prose."},
};

}  // namespace

PromptSet::PromptSet() : texts_(kBuiltins) {}

const std::vector<std::string>& PromptSet::known_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : kBuiltins) out.push_back(name);
        return out;
    }();
    return names;
}

PromptSet PromptSet::load(const std::string& dir) {
    PromptSet set;
    if (dir.empty()) return set;
    for (const auto& name : known_names()) {
        auto path = std::filesystem::path(dir) / (name + ".txt");
        if (std::filesystem::exists(path)) {
            std::string text = cx::util::read_file(path.string());
            while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
            set.texts_[name] = text;
        }
    }
    return set;
}

const std::string& PromptSet::get(const std::string& name) const {
    auto it = texts_.find(name);
    if (it == texts_.end()) throw std::out_of_range("unknown prompt template: " + name);
    return it->second;
}

std::string PromptSet::render(const std::string& tmpl,
                              const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        auto open = tmpl.find("{{", i);
        if (open == std::string::npos) {
            out.append(tmpl, i, std::string::npos);
            break;
        }
        out.append(tmpl, i, open - i);
        auto close = tmpl.find("}}", open);
        if (close == std::string::npos) {
            out.append(tmpl, open, std::string::npos);
            break;
        }
        std::string key = tmpl.substr(open + 2, close - open - 2);
        auto it = vars.find(key);
        out += it != vars.end() ? it->second : "";
        i = close + 2;
    }
    return out;
}

}  // namespace cx::agent

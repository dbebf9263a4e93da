#pragma once

#include <optional>

#include "agent/prompts.hpp"
#include "domain/types.hpp"
#include "gateway/backend.hpp"
#include "trace/sink.hpp"

namespace cx::extraction {

using cx::domain::Finding;

struct ExtractionContext {
    std::string agent_id;
    int team_index = -1;
    cx::domain::EntryPoint entrypoint;
    std::string model = "scripted";
    cx::trace::TraceSink* sink = nullptr;
    const cx::agent::PromptSet* prompts = nullptr;
    std::vector<std::string>* warnings = nullptr;  // optional collection point
};

// Renders an agent's trace slice into the compact log handed to the
// extractor model.
std::string render_compact_log(const std::vector<cx::trace::TraceEvent>& agent_log);

// Post-agent analysis: one extractor call over the compacted log, parsed
// into structured findings. The extractor shares no messages with the
// agent's conversation. Never throws: failures degrade to an empty list.
std::vector<Finding> extract_findings(const std::vector<cx::trace::TraceEvent>& agent_log,
                                      cx::gateway::Backend& backend,
                                      const ExtractionContext& ctx);

// Parses an extractor reply (JSON array, possibly wrapped in prose) into
// findings. Unknown severities degrade to Info with a warning; confidences
// clamp to [0,1]; evidence refs that escape the agent workspace are
// dropped. Returns nullopt when no JSON array can be recovered.
std::optional<std::vector<Finding>> parse_extractor_reply(const std::string& text,
                                                          const ExtractionContext& ctx);

struct CorpusEntry {
    Finding finding;  // representative instance
    std::vector<std::string> agent_ids;

    bool operator==(const CorpusEntry&) const = default;
};

// Deduplicates findings identical in (entrypoint, title, severity),
// pooling the reporting agents. Deterministic order (by key).
std::vector<CorpusEntry> aggregate(const std::vector<Finding>& findings);
// Idempotent closure over an existing corpus.
std::vector<CorpusEntry> aggregate(const std::vector<CorpusEntry>& corpus);

nlohmann::json corpus_to_json(const std::vector<CorpusEntry>& corpus);

}  // namespace cx::extraction

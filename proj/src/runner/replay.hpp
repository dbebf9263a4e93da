#pragma once

#include <string>
#include <vector>

#include "trace/events.hpp"

namespace cx::runner {

struct ReplayResult {
    bool identical = false;
    std::string divergence;  // first differing line, empty when identical
    std::string replay_trace_path;
};

// Canonical comparison form: volatile fields (timestamps, durations, seq)
// stripped, events grouped per subgraph with run-level events first. For a
// single-subgraph run this is the full trace minus timestamps; with
// parallel subgraphs it is invariant to scheduler interleaving.
std::string normalize_trace(const std::vector<cx::trace::TraceEvent>& events);

// Re-executes a recorded scripted run from its recorded playbook and seed
// and compares the produced trace against the recording.
ReplayResult replay(const std::string& trace_path);

}  // namespace cx::runner

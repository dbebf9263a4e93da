#pragma once

#include <string>

#include "agent/runtime.hpp"
#include "orch/directive.hpp"
#include "orch/global_state.hpp"

namespace cx::orch {

// Pulls the directive JSON out of a model reply; a reply that carries no
// parseable object becomes a low-confidence directive built from the raw
// text. Confidence is clamped to [0,1].
Directive parse_directive_response(const std::string& text);

// Marker-based fate parsing: EXTEND / HANDOFF / GIVEUP / EXHAUSTED.
// Anything else is HandOff, the safe default.
cx::agent::Fate parse_fate_response(const std::string& text);

std::string render_history(const std::vector<GlobalStateRecord::Entry>& history);

}  // namespace cx::orch

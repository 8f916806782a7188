#pragma once

// Trace extraction from governed runs, the well-governed trace predicate,
// trace composition under bind, and the line-oriented trace file format.

#include <string>
#include <string_view>

#include "govtree/category.hpp"
#include "govtree/events.hpp"
#include "govtree/governance.hpp"

namespace govtree {

/// The recorded events of a run: checks and I/O in execution order.
const Trace& trace_of_run(const RunOutcome& outcome);

/// Runs t, k(x) and bind(t, k) through govern(handler) under `policy` and
/// compares the bind trace with the concatenation element-wise. Unknown
/// (precondition-unmet) when t does not return within fuel.
BoundedVerdict check_trace_of_bind(const Program& t, const Morphism& k,
                                   const GovernancePolicy& policy, const Handler& handler,
                                   Fuel fuel);

enum class FlagReset : std::uint8_t {
  // A passing check licenses exactly one subsequent I/O event.
  AfterEachIO,
  // A passing check licenses all later I/O events.
  Never,
};

/// Folds a "passing check seen" flag over the trace, starting from false:
/// a passing check sets it, every I/O event requires it.
bool well_governed(const Trace& trace, FlagReset reset = FlagReset::AfterEachIO);

/// One event per line: `GOV <stage> <pass|fail>` or `IO <payload>`, LF endings.
std::string format_trace(const Trace& trace);

/// Throws ParseError.
Trace parse_trace(std::string_view text);

}  // namespace govtree

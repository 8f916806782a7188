#pragma once

// Independent small-step evaluator over program files. It walks the AST
// directly, with its own expression evaluator and policy tables, and is used
// as the differential oracle for the tree pipeline.

#include <cstdint>
#include <optional>
#include <string>

#include "govtree/events.hpp"
#include "govtree/program.hpp"

namespace govtree::reference {

struct ReferenceOptions {
  // Injected bug for harness mutation testing: Stdlib stops granting every
  // capability.
  bool flip_trust_comparison = false;
};

struct ReferenceOutcome {
  std::optional<Value> value;
  bool denied = false;
  Trace trace;
};

Value evaluate(const program::ExprPtr& e, const Value& binding);

ReferenceOutcome run(const program::ProgramFile& file, const program::PolicySpec& policy,
                     std::uint64_t handler_seed, const ReferenceOptions& options = {});

}  // namespace govtree::reference

#pragma once

// The governance operator: wraps a base handler so that every I/O event is
// preceded by a governance check, and a refused check diverges.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>

#include "govtree/directives.hpp"
#include "govtree/events.hpp"
#include "govtree/itree.hpp"

namespace govtree {

using GovTree = ITree<GovernedEvent>;

struct GovernedHandler {
  std::string label;
  std::function<GovTree(const DirectiveEvent&)> fn;

  GovTree operator()(const DirectiveEvent& d) const { return fn(d); }
};

/// Vis(Gov(stage d), b => b ? Vis(IO d, ret) : spin)
GovTree check_then_io(const DirectiveEvent& d);

/// The bundled operator. govern(h)(d) checks d, performs IO(d), then runs
/// h(d) with every directive h itself issues checked the same way.
GovernedHandler govern(const Handler& h);

/// interp(gh, t).
GovTree interpret(const GovernedHandler& gh, const Program& t);

/// Reference semantics without governance: IO(d) followed by h(d), with the
/// handler's own directives passed straight through as IO.
GovTree interpret_ungoverned(const Handler& h, const Program& t);

/// Answers every governance check with `true` and hides it as a silent step.
GovTree erase_gov(const GovTree& t);

enum class Decision : std::uint8_t { Allow, Deny };

struct GovernancePolicy {
  std::string name;
  std::function<Decision(const GovernanceStage&, const DirectiveEvent&)> decide;

  static GovernancePolicy permissive();
  static GovernancePolicy denying();
  /// Allows exactly the listed directive kinds.
  static GovernancePolicy allow_kinds(std::set<DirectiveKind> allowed);
};

struct RunOutcome {
  std::optional<Value> value;  // present iff Ret was reached within fuel
  Trace trace;
  bool denied = false;  // fuel ran out (or spin was reached) after a Deny
  Fuel remaining;
};

/// Drives a governed tree: checks are answered by `policy`, I/O events by a
/// deterministic environment seeded with `env_seed`.
RunOutcome run_governed(const GovTree& t, const GovernancePolicy& policy, Fuel fuel,
                        std::uint64_t env_seed = 0);

RunOutcome interpret_governed(const GovernedHandler& gh, const GovernancePolicy& policy,
                              const Program& t, Fuel fuel, std::uint64_t env_seed = 0);

/// Answer the environment gives to I/O event `d` in run_governed.
Value environment_answer(std::uint64_t env_seed, const DirectiveEvent& d);

/// Answers for governed events: both booleans for checks, sampled responses
/// for I/O.
struct GovernedSampler {
  ResponseSampler io;

  std::vector<Value> operator()(const GovernedEvent& e) const;
};

/// Counters filled in by gov_safe_check along every explored path.
struct GovSafeStats {
  std::size_t gov_nodes = 0;
  std::size_t io_nodes = 0;
  // I/O nodes whose continuations were explored with the approval flag cleared.
  std::size_t io_resets = 0;
};

/// Bounded check of the governed-safety predicate starting from flag `approved`.
/// Checks branch on both answers; I/O is legal only under approval and clears
/// it for the continuation.
BoundedVerdict gov_safe_check(const GovTree& t, bool approved, Fuel fuel,
                              const ResponseSampler& sampler = ResponseSampler(),
                              GovSafeStats* stats = nullptr);

template <class E>
ITree<E> spin() {
  return ITree<E>::spin();
}

}  // namespace govtree

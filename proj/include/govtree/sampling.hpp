#pragma once

// Seeded random directives, directive programs and base handlers shared by the
// conformance, safety and boundary campaigns.

#include <cstdint>
#include <random>

#include "govtree/directives.hpp"

namespace govtree {

/// The twelve kinds that need a capability.
std::span<const DirectiveKind> effectful_kinds();

DirectiveEvent random_directive(std::mt19937_64& rng);
DirectiveEvent random_directive_of(DirectiveKind kind, std::mt19937_64& rng);

/// A finite program of at most `depth` directives over all fourteen kinds.
/// Continuations branch on the answer, and leaves return a value derived from
/// the last answer, so answer changes are observable in the result.
Program random_directive_program(std::uint64_t seed, int depth);

/// Returns the mock answer with flagged content replaced by "[filtered]",
/// after logging the decision through an Observability directive.
Handler filtering_handler(std::uint64_t seed);
/// Records a RecordStep before answering like mock_handler(seed).
Handler delegating_handler(std::uint64_t seed);
Handler random_handler(std::mt19937_64& rng);

/// An extensionally equal copy of `h` under a different label.
Handler relabel(const Handler& h, std::string label);

}  // namespace govtree

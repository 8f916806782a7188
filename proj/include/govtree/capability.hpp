#pragma once

// Capability sets over the nine-member universe, the within_caps checker, the
// trust lattice, and capability-indexed morphisms with their composition
// rules, principality and the dual (capability + governance) guarantee.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "govtree/category.hpp"
#include "govtree/directives.hpp"
#include "govtree/governance.hpp"

namespace govtree {

class CapSet {
 public:
  static constexpr std::uint16_t kFullMask = (1u << kCapabilityCount) - 1;

  constexpr CapSet() = default;

  static constexpr CapSet empty() { return CapSet(); }
  static constexpr CapSet full() { return CapSet(kFullMask); }
  static constexpr CapSet singleton(Capability c) {
    return CapSet(static_cast<std::uint16_t>(1u << static_cast<unsigned>(c)));
  }
  /// Throws std::out_of_range for masks with bits outside the universe.
  static CapSet from_mask(std::uint16_t mask);
  static CapSet of(std::initializer_list<Capability> caps);

  constexpr bool contains(Capability c) const {
    return (mask_ >> static_cast<unsigned>(c)) & 1u;
  }
  constexpr std::uint16_t mask() const { return mask_; }
  std::size_t size() const;
  std::vector<Capability> members() const;

  friend constexpr bool operator==(CapSet, CapSet) = default;

  /// Sorted capability names, comma separated; "" for the empty set.
  std::string to_string() const;
  /// Inverse of to_string. Throws ParseError on unknown names.
  static CapSet parse(std::string_view text);

 private:
  constexpr explicit CapSet(std::uint16_t mask) : mask_(mask) {}

  std::uint16_t mask_ = 0;
};

CapSet cap_union(CapSet a, CapSet b);
CapSet cap_intersection(CapSet a, CapSet b);
bool cap_subset(CapSet a, CapSet b);

/// directive_in_caps: the directive needs no capability, or needs one in `caps`.
bool directive_in_caps(CapSet caps, const DirectiveEvent& d);

BoundedVerdict within_caps_check(CapSet caps, const Program& t, Fuel fuel,
                                 const ResponseSampler& sampler = ResponseSampler());

/// Values reachable at Ret nodes of `t` within the exploration budget. The flag
/// is false when some branch was cut off by fuel.
struct ReturnSet {
  std::vector<Value> values;
  bool complete = true;
};
ReturnSet reachable_returns(const Program& t, Fuel fuel, const ResponseSampler& sampler);

/// Checks the compositional closure of within_caps under bind: given that t
/// stays within caps1 and k(r) within caps2 for every sampled return r of t,
/// bind(t, k) stays within caps1 ∪ caps2. Also checks weakening to full caps.
/// Unmet preconditions yield Unknown(precondition-unmet).
BoundedVerdict check_bind_within_caps(const Program& t, const Morphism& k, CapSet caps1,
                                      CapSet caps2, Fuel fuel,
                                      const ResponseSampler& sampler = ResponseSampler());

/// For a program within the empty capability set, every directive it can emit
/// is bookkeeping-only (Observability, RecordStep).
BoundedVerdict no_ambient_effects_check(const Program& t, Fuel fuel,
                                        const ResponseSampler& sampler = ResponseSampler());

enum class TrustLevel : std::uint8_t { Untrusted, Tested, Evaluated, Reviewed, Stdlib, System };

inline constexpr std::size_t kTrustLevelCount = 6;

std::span<const TrustLevel> all_trust_levels();
int trust_value(TrustLevel t);
std::string_view trust_name(TrustLevel t);
std::optional<TrustLevel> trust_from_name(std::string_view name);
bool trust_le(TrustLevel a, TrustLevel b);
TrustLevel trust_max(TrustLevel a, TrustLevel b);
TrustLevel trust_min(TrustLevel a, TrustLevel b);

/// System and Stdlib grant everything; Untrusted keeps only the LLM capability
/// from `declared`; the levels in between grant `declared` as is.
CapSet allowed_cap_set(TrustLevel level, std::span<const Capability> declared);

/// Allows a directive iff it needs no capability or its capability is in
/// allowed_cap_set(level, declared).
GovernancePolicy trust_policy(TrustLevel level, std::vector<Capability> declared);

struct Constructed {
  friend bool operator==(Constructed, Constructed) = default;
};
struct Checked {
  std::size_t samples = 0;
  std::uint64_t fuel = 0;
  friend bool operator==(const Checked&, const Checked&) = default;
};
using CapEvidence = std::variant<Constructed, Checked>;

/// A morphism together with its capability bound and the evidence for it.
struct CapMorphism {
  Morphism morph;
  CapSet caps;
  CapEvidence evidence = Constructed{};
};

CapMorphism cap_identity();
CapMorphism cap_code(PureFn f);
CapMorphism cap_reason(ParamBuilder build, PureFn extract);
CapMorphism cap_memory(ParamBuilder build, PureFn extract);
CapMorphism cap_call(ParamBuilder build, PureFn extract);

CapMorphism cap_seq_compose(const CapMorphism& f, const CapMorphism& g);
CapMorphism cap_tensor(const CapMorphism& f, const CapMorphism& g);
CapMorphism cap_branch(std::function<bool(const Value&)> pred, const CapMorphism& f,
                       const CapMorphism& g);

/// Enlarges the bound. Evidence is kept: weakening preserves within_caps.
CapMorphism with_caps(CapMorphism cm, CapSet larger);

/// Wraps an arbitrary morphism after checking it on `inputs`. Returns nullopt
/// when any input Fails.
std::optional<CapMorphism> check_cap_morphism(Morphism morph, CapSet caps,
                                              std::span<const Value> inputs, Fuel fuel,
                                              const ResponseSampler& sampler = ResponseSampler());

/// Brute force over every strict subset of cm.caps: Holds iff each subset is
/// refuted by within_caps_check on some input.
BoundedVerdict principality_check(const CapMorphism& cm, std::span<const Value> inputs,
                                  Fuel fuel, const ResponseSampler& sampler = ResponseSampler());

/// For every input: within_caps(cm.caps, cm.morph(a)) and gov_safe of the
/// governed interpretation. The run under `policy` must also leave a trace
/// whose I/O stays within cm.caps.
BoundedVerdict dual_guarantee_check(const CapMorphism& cm, const Handler& handler,
                                    const GovernancePolicy& policy,
                                    std::span<const Value> inputs, Fuel fuel,
                                    const ResponseSampler& sampler = ResponseSampler());

}  // namespace govtree

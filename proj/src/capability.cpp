#include "govtree/capability.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

namespace govtree {

CapSet CapSet::from_mask(std::uint16_t mask) {
  if (mask & ~kFullMask) throw std::out_of_range("capability mask outside the universe");
  return CapSet(mask);
}

CapSet CapSet::of(std::initializer_list<Capability> caps) {
  CapSet s;
  for (Capability c : caps) s = cap_union(s, singleton(c));
  return s;
}

std::size_t CapSet::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<Capability> CapSet::members() const {
  std::vector<Capability> out;
  for (Capability c : all_capabilities()) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

std::string CapSet::to_string() const {
  std::vector<std::string_view> names;
  for (Capability c : members()) names.push_back(capability_name(c));
  std::sort(names.begin(), names.end());
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out;
}

CapSet CapSet::parse(std::string_view text) {
  CapSet s;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view name = text.substr(0, comma);
    auto cap = capability_from_name(name);
    if (!cap) throw ParseError("unknown capability: " + std::string(name));
    s = cap_union(s, singleton(*cap));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return s;
}

CapSet cap_union(CapSet a, CapSet b) { return CapSet::from_mask(a.mask() | b.mask()); }
CapSet cap_intersection(CapSet a, CapSet b) { return CapSet::from_mask(a.mask() & b.mask()); }
bool cap_subset(CapSet a, CapSet b) { return (a.mask() & ~b.mask()) == 0; }

bool directive_in_caps(CapSet caps, const DirectiveEvent& d) {
  auto need = capability_for_directive(d);
  return !need || caps.contains(*need);
}

namespace {

// Walks every sampled path of `t`; `visit` decides per Vis event whether the
// event is acceptable, returning a failure description otherwise.
template <class Visit, class OnRet>
BoundedVerdict walk(Program t, Fuel fuel, const ResponseSampler& sampler, const Visit& visit,
                    const OnRet& on_ret, detail::PathRecorder<DirectiveEvent>& path) {
  for (;;) {
    // spin emits nothing and never returns.
    if (t.is_spin()) return BoundedVerdict::holds();
    const auto& node = t.head();
    if (auto* r = std::get_if<Program::RetNode>(&node)) {
      on_ret(r->value);
      return BoundedVerdict::holds();
    }
    if (auto* tau = std::get_if<Program::TauNode>(&node)) {
      if (fuel.exhausted()) return BoundedVerdict::unknown(UnknownReason::FuelExhausted);
      fuel = fuel.spend();
      t = tau->next();
      continue;
    }
    auto& v = std::get<Program::VisNode>(node);
    if (std::optional<std::string> problem = visit(v.event)) {
      return BoundedVerdict::fails(path.snapshot(*problem));
    }
    if (fuel.exhausted()) return BoundedVerdict::unknown(UnknownReason::FuelExhausted);
    fuel = fuel.spend();
    BoundedVerdict acc = BoundedVerdict::holds();
    path.push_event("", v.event);
    for (const Value& x : sampler(v.event)) {
      path.push_answer(x);
      acc = conjoin(std::move(acc), walk(v.k(x), fuel, sampler, visit, on_ret, path));
      path.pop();
      if (acc.is_fails()) break;
    }
    path.pop();
    return acc;
  }
}

BoundedVerdict precondition(const BoundedVerdict& v) {
  if (v.is_fails()) return BoundedVerdict::unknown(UnknownReason::PreconditionUnmet);
  return v;
}

}  // namespace

BoundedVerdict within_caps_check(CapSet caps, const Program& t, Fuel fuel,
                                 const ResponseSampler& sampler) {
  detail::PathRecorder<DirectiveEvent> path;
  auto visit = [caps](const DirectiveEvent& d) -> std::optional<std::string> {
    if (directive_in_caps(caps, d)) return std::nullopt;
    return std::string(capability_name(*capability_for_directive(d))) + " not in {" +
           caps.to_string() + "}";
  };
  return walk(t, fuel, sampler, visit, [](const Value&) {}, path);
}

ReturnSet reachable_returns(const Program& t, Fuel fuel, const ResponseSampler& sampler) {
  ReturnSet out;
  detail::PathRecorder<DirectiveEvent> path;
  auto on_ret = [&out](const Value& v) {
    for (const auto& seen : out.values) {
      if (seen == v) return;
    }
    out.values.push_back(v);
  };
  auto verdict = walk(t, fuel, sampler, [](const DirectiveEvent&) -> std::optional<std::string> {
    return std::nullopt;
  }, on_ret, path);
  out.complete = verdict.is_holds();
  return out;
}

BoundedVerdict check_bind_within_caps(const Program& t, const Morphism& k, CapSet caps1,
                                      CapSet caps2, Fuel fuel, const ResponseSampler& sampler) {
  BoundedVerdict acc = precondition(within_caps_check(caps1, t, fuel, sampler));
  if (!acc.is_holds()) return acc;
  ReturnSet returns = reachable_returns(t, fuel, sampler);
  for (const Value& r : returns.values) {
    acc = conjoin(std::move(acc), precondition(within_caps_check(caps2, k(r), fuel, sampler)));
  }
  if (acc.is_unknown()) return acc;

  const CapSet joined = cap_union(caps1, caps2);
  const Program composite = bind(t, k);
  acc = conjoin(std::move(acc), within_caps_check(joined, composite, fuel, sampler));
  // Weakening of the first component and the full-caps lemma.
  acc = conjoin(std::move(acc), within_caps_check(joined, t, fuel, sampler));
  acc = conjoin(std::move(acc), within_caps_check(CapSet::full(), composite, fuel, sampler));
  return acc;
}

BoundedVerdict no_ambient_effects_check(const Program& t, Fuel fuel,
                                        const ResponseSampler& sampler) {
  BoundedVerdict pre = precondition(within_caps_check(CapSet::empty(), t, fuel, sampler));
  if (!pre.is_holds()) return pre;
  detail::PathRecorder<DirectiveEvent> path;
  auto visit = [](const DirectiveEvent& d) -> std::optional<std::string> {
    if (is_observability(d) || d.kind() == DirectiveKind::RecordStep) return std::nullopt;
    return "ambient effect " + encode_directive(d);
  };
  return walk(t, fuel, sampler, visit, [](const Value&) {}, path);
}

namespace {

constexpr std::array<TrustLevel, kTrustLevelCount> kTrustLevels = {
    TrustLevel::Untrusted, TrustLevel::Tested, TrustLevel::Evaluated,
    TrustLevel::Reviewed,  TrustLevel::Stdlib, TrustLevel::System,
};

constexpr std::array<std::string_view, kTrustLevelCount> kTrustNames = {
    "Untrusted", "Tested", "Evaluated", "Reviewed", "Stdlib", "System",
};

}  // namespace

std::span<const TrustLevel> all_trust_levels() { return kTrustLevels; }

int trust_value(TrustLevel t) { return static_cast<int>(t); }

std::string_view trust_name(TrustLevel t) { return kTrustNames[static_cast<std::size_t>(t)]; }

std::optional<TrustLevel> trust_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kTrustNames.size(); ++i) {
    if (kTrustNames[i] == name) return kTrustLevels[i];
  }
  return std::nullopt;
}

bool trust_le(TrustLevel a, TrustLevel b) { return trust_value(a) <= trust_value(b); }

TrustLevel trust_max(TrustLevel a, TrustLevel b) { return trust_value(a) <= trust_value(b) ? b : a; }

TrustLevel trust_min(TrustLevel a, TrustLevel b) { return trust_value(a) <= trust_value(b) ? a : b; }

CapSet allowed_cap_set(TrustLevel level, std::span<const Capability> declared) {
  if (trust_le(TrustLevel::Stdlib, level)) return CapSet::full();
  CapSet out;
  for (Capability c : declared) out = cap_union(out, CapSet::singleton(c));
  if (level == TrustLevel::Untrusted) {
    out = cap_intersection(out, CapSet::singleton(Capability::CapComputeLLMReason));
  }
  return out;
}

GovernancePolicy trust_policy(TrustLevel level, std::vector<Capability> declared) {
  const CapSet allowed = allowed_cap_set(level, declared);
  std::string name = "trust:" + std::string(trust_name(level)) + ":";
  for (std::size_t i = 0; i < declared.size(); ++i) {
    if (i) name += ',';
    name += capability_name(declared[i]);
  }
  return {name, [allowed](const GovernanceStage&, const DirectiveEvent& d) {
            return directive_in_caps(allowed, d) ? Decision::Allow : Decision::Deny;
          }};
}

CapMorphism cap_identity() { return {identity(), CapSet::empty(), Constructed{}}; }

CapMorphism cap_code(PureFn f) { return {code(std::move(f)), CapSet::empty(), Constructed{}}; }

CapMorphism cap_reason(ParamBuilder build, PureFn extract) {
  return {reason(std::move(build), std::move(extract)),
          CapSet::singleton(Capability::CapComputeLLMReason), Constructed{}};
}

CapMorphism cap_memory(ParamBuilder build, PureFn extract) {
  return {memory(std::move(build), std::move(extract)), CapSet::singleton(Capability::CapMemory),
          Constructed{}};
}

CapMorphism cap_call(ParamBuilder build, PureFn extract) {
  return {call(std::move(build), std::move(extract)),
          CapSet::singleton(Capability::CapMachineCall), Constructed{}};
}

namespace {

// Composite evidence: Constructed only when both parts were constructed.
CapEvidence combine(const CapEvidence& a, const CapEvidence& b) {
  if (std::holds_alternative<Constructed>(a) && std::holds_alternative<Constructed>(b)) {
    return Constructed{};
  }
  Checked out;
  for (const auto* e : {&a, &b}) {
    if (auto* c = std::get_if<Checked>(e)) {
      out.samples = out.samples == 0 ? c->samples : std::min(out.samples, c->samples);
      out.fuel = out.fuel == 0 ? c->fuel : std::min(out.fuel, c->fuel);
    }
  }
  return out;
}

}  // namespace

CapMorphism cap_seq_compose(const CapMorphism& f, const CapMorphism& g) {
  return {seq_compose(f.morph, g.morph), cap_union(f.caps, g.caps),
          combine(f.evidence, g.evidence)};
}

CapMorphism cap_tensor(const CapMorphism& f, const CapMorphism& g) {
  return {tensor(f.morph, g.morph), cap_union(f.caps, g.caps), combine(f.evidence, g.evidence)};
}

CapMorphism cap_branch(std::function<bool(const Value&)> pred, const CapMorphism& f,
                       const CapMorphism& g) {
  return {branch(std::move(pred), f.morph, g.morph), cap_union(f.caps, g.caps),
          combine(f.evidence, g.evidence)};
}

CapMorphism with_caps(CapMorphism cm, CapSet larger) {
  cm.caps = cap_union(cm.caps, larger);
  return cm;
}

std::optional<CapMorphism> check_cap_morphism(Morphism morph, CapSet caps,
                                              std::span<const Value> inputs, Fuel fuel,
                                              const ResponseSampler& sampler) {
  for (const Value& a : inputs) {
    if (within_caps_check(caps, morph(a), fuel, sampler).is_fails()) return std::nullopt;
  }
  return CapMorphism{std::move(morph), caps, Checked{inputs.size(), fuel.steps}};
}

BoundedVerdict principality_check(const CapMorphism& cm, std::span<const Value> inputs, Fuel fuel,
                                  const ResponseSampler& sampler) {
  const std::uint16_t mask = cm.caps.mask();
  if (mask == 0) return BoundedVerdict::holds();
  BoundedVerdict acc = BoundedVerdict::holds();
  for (std::uint16_t sub = (mask - 1) & mask;; sub = (sub - 1) & mask) {
    const CapSet smaller = CapSet::from_mask(sub);
    bool refuted = false;
    BoundedVerdict unresolved = BoundedVerdict::holds();
    for (const Value& a : inputs) {
      auto v = within_caps_check(smaller, cm.morph(a), fuel, sampler);
      if (v.is_fails()) {
        refuted = true;
        break;
      }
      unresolved = conjoin(std::move(unresolved), std::move(v));
    }
    if (!refuted) {
      if (unresolved.is_unknown()) {
        acc = conjoin(std::move(acc), std::move(unresolved));
      } else {
        return BoundedVerdict::fails(
            {"strict subset {" + smaller.to_string() + "} of {" + cm.caps.to_string() +
             "} suffices on every sampled input"});
      }
    }
    if (sub == 0) break;
  }
  return acc;
}

BoundedVerdict dual_guarantee_check(const CapMorphism& cm, const Handler& handler,
                                    const GovernancePolicy& policy,
                                    std::span<const Value> inputs, Fuel fuel,
                                    const ResponseSampler& sampler) {
  const GovernedHandler gh = govern(handler);
  BoundedVerdict acc = BoundedVerdict::holds();
  for (const Value& a : inputs) {
    Program t = cm.morph(a);
    auto caps_verdict = within_caps_check(cm.caps, t, fuel, sampler);
    if (caps_verdict.is_fails()) return caps_verdict;
    GovTree governed = interpret(gh, t);
    auto safe_verdict = gov_safe_check(governed, false, fuel, sampler);
    if (safe_verdict.is_fails()) return safe_verdict;
    acc = conjoin(conjoin(std::move(acc), std::move(caps_verdict)), std::move(safe_verdict));

    RunOutcome run = run_governed(governed, policy, fuel);
    for (const auto& ev : run.trace) {
      if (!ev.is_io()) continue;
      auto kind = directive_kind_from_tag(ev.io_tag());
      if (!kind) return BoundedVerdict::fails({"unknown I/O tag " + ev.text});
      auto need = capability_for_directive(*kind);
      if (need && !cm.caps.contains(*need)) {
        return BoundedVerdict::fails({"input " + a.to_string(), "run performed " + ev.text +
                                                                    " outside {" +
                                                                    cm.caps.to_string() + "}"});
      }
    }
  }
  return acc;
}

}  // namespace govtree

#include "govtree/governance.hpp"

namespace govtree {

GovernanceStage stage_of(const DirectiveEvent& d) {
  return GovernanceStage{std::string(directive_tag(d))};
}

std::string describe(const GovernedEvent& e) {
  if (e.is_gov()) return "GovCheck(" + e.check().stage.label + ")";
  return "IO(" + encode_directive(e.directive()) + ")";
}

std::string_view TraceEvent::io_tag() const {
  std::string_view v = text;
  return v.substr(0, v.find('{'));
}

namespace {

bool approved_answer(const Value& x) { return x.is_bool() && x.as_bool(); }

GovTree io_only(const DirectiveEvent& d) {
  return translate<GovernedEvent>(Program::trigger(d),
                                  [](const DirectiveEvent& e) { return GovernedEvent::io(e); });
}

}  // namespace

GovTree check_then_io(const DirectiveEvent& d) {
  return GovTree::vis(GovernedEvent::gov(GovCheck{stage_of(d), d}), [d](const Value& b) {
    if (!approved_answer(b)) return GovTree::spin();
    return GovTree::trigger(GovernedEvent::io(d));
  });
}

GovernedHandler govern(const Handler& h) {
  auto shared = std::make_shared<const Handler>(h);
  return GovernedHandler{
      "govern(" + h.label + ")", [shared](const DirectiveEvent& d) {
        // check_then_io(d) >>= (_ => interp(check_then_io, h(d))), with the bind
        // unfolded by hand: same nodes, fewer wrapper layers.
        return GovTree::vis(GovernedEvent::gov(GovCheck{stage_of(d), d}), [shared, d](const Value& b) {
          if (!approved_answer(b)) return GovTree::spin();
          return GovTree::vis(GovernedEvent::io(d), [shared, d](const Value&) {
            return interp<GovernedEvent>(check_then_io, (*shared)(d));
          });
        });
      }};
}

GovTree interpret(const GovernedHandler& gh, const Program& t) {
  return interp<GovernedEvent>(gh.fn, t);
}

GovTree interpret_ungoverned(const Handler& h, const Program& t) {
  auto direct = [h](const DirectiveEvent& d) {
    return bind(io_only(d), [h, d](const Value&) {
      return translate<GovernedEvent>(h(d),
                                      [](const DirectiveEvent& e) { return GovernedEvent::io(e); });
    });
  };
  return interp<GovernedEvent>(direct, t);
}

GovTree erase_gov(const GovTree& t) {
  if (t.is_spin()) return GovTree::spin();
  return GovTree::lazy([t]() -> GovTree::Node {
    const auto& node = t.head();
    if (auto* r = std::get_if<GovTree::RetNode>(&node)) return *r;
    if (auto* tau = std::get_if<GovTree::TauNode>(&node)) {
      return GovTree::TauNode{[next = tau->next] { return erase_gov(next()); }};
    }
    auto& v = std::get<GovTree::VisNode>(node);
    if (v.event.is_gov()) {
      return GovTree::TauNode{[k = v.k] { return erase_gov(k(Value(true))); }};
    }
    return GovTree::VisNode{v.event, [k = v.k](const Value& x) { return erase_gov(k(x)); }};
  });
}

GovernancePolicy GovernancePolicy::permissive() {
  return {"permissive", [](const GovernanceStage&, const DirectiveEvent&) { return Decision::Allow; }};
}

GovernancePolicy GovernancePolicy::denying() {
  return {"deny", [](const GovernanceStage&, const DirectiveEvent&) { return Decision::Deny; }};
}

GovernancePolicy GovernancePolicy::allow_kinds(std::set<DirectiveKind> allowed) {
  std::string name = "allow:";
  bool first = true;
  for (DirectiveKind k : allowed) {
    if (!first) name += ',';
    name += directive_tag(k);
    first = false;
  }
  return {name, [allowed = std::move(allowed)](const GovernanceStage&, const DirectiveEvent& d) {
            return allowed.count(d.kind()) ? Decision::Allow : Decision::Deny;
          }};
}

Value environment_answer(std::uint64_t env_seed, const DirectiveEvent& d) {
  return sample_answer(env_seed, 0, d);
}

RunOutcome run_governed(const GovTree& t, const GovernancePolicy& policy, Fuel fuel,
                        std::uint64_t env_seed) {
  RunOutcome out;
  bool saw_deny = false;
  GovTree cur = t;
  for (;;) {
    if (cur.is_spin()) {
      // Only silent steps remain; the run would burn all remaining fuel.
      out.denied = saw_deny;
      out.remaining = Fuel{0};
      return out;
    }
    const auto& node = cur.head();
    if (auto* r = std::get_if<GovTree::RetNode>(&node)) {
      out.value = r->value;
      out.remaining = fuel;
      return out;
    }
    if (fuel.exhausted()) {
      out.denied = saw_deny;
      out.remaining = fuel;
      return out;
    }
    fuel = fuel.spend();
    if (auto* tau = std::get_if<GovTree::TauNode>(&node)) {
      cur = tau->next();
      continue;
    }
    auto& v = std::get<GovTree::VisNode>(node);
    if (v.event.is_gov()) {
      const auto& check = v.event.check();
      const bool allow = policy.decide(check.stage, check.subject) == Decision::Allow;
      if (!allow) saw_deny = true;
      out.trace.push_back(TraceEvent::gov_check(check.stage, allow));
      cur = v.k(Value(allow));
    } else {
      const auto& d = v.event.directive();
      out.trace.push_back(TraceEvent::io(d));
      cur = v.k(environment_answer(env_seed, d));
    }
  }
}

RunOutcome interpret_governed(const GovernedHandler& gh, const GovernancePolicy& policy,
                              const Program& t, Fuel fuel, std::uint64_t env_seed) {
  return run_governed(interpret(gh, t), policy, fuel, env_seed);
}

std::vector<Value> GovernedSampler::operator()(const GovernedEvent& e) const {
  if (e.is_gov()) return {Value(true), Value(false)};
  return io(e.directive());
}

namespace {

BoundedVerdict gov_safe_go(GovTree t, bool approved, Fuel fuel, const ResponseSampler& sampler,
                           GovSafeStats* stats, detail::PathRecorder<GovernedEvent>& path) {
  for (;;) {
    if (t.is_spin()) return BoundedVerdict::holds();  // silent forever: no I/O
    const auto& node = t.head();
    if (std::holds_alternative<GovTree::RetNode>(node)) return BoundedVerdict::holds();
    if (auto* tau = std::get_if<GovTree::TauNode>(&node)) {
      if (fuel.exhausted()) return BoundedVerdict::unknown(UnknownReason::FuelExhausted);
      fuel = fuel.spend();
      t = tau->next();
      continue;
    }
    auto& v = std::get<GovTree::VisNode>(node);
    if (v.event.is_io() && !approved) {
      return BoundedVerdict::fails(path.snapshot(describe(v.event) + " without approval"));
    }
    if (fuel.exhausted()) return BoundedVerdict::unknown(UnknownReason::FuelExhausted);
    fuel = fuel.spend();
    BoundedVerdict acc = BoundedVerdict::holds();
    path.push_event("", v.event);
    if (v.event.is_gov()) {
      if (stats) ++stats->gov_nodes;
      for (bool answer : {true, false}) {
        path.push(answer ? "pass" : "fail");
        acc = conjoin(std::move(acc), gov_safe_go(v.k(Value(answer)), answer, fuel, sampler,
                                                  stats, path));
        path.pop();
        if (acc.is_fails()) break;
      }
    } else {
      const bool next_flag = false;
      if (stats) {
        ++stats->io_nodes;
        if (!next_flag) ++stats->io_resets;
      }
      for (const Value& x : sampler(v.event.directive())) {
        path.push_answer(x);
        acc = conjoin(std::move(acc), gov_safe_go(v.k(x), next_flag, fuel, sampler, stats, path));
        path.pop();
        if (acc.is_fails()) break;
      }
    }
    path.pop();
    return acc;
  }
}

}  // namespace

BoundedVerdict gov_safe_check(const GovTree& t, bool approved, Fuel fuel,
                              const ResponseSampler& sampler, GovSafeStats* stats) {
  detail::PathRecorder<GovernedEvent> path;
  return gov_safe_go(t, approved, fuel, sampler, stats, path);
}

}  // namespace govtree

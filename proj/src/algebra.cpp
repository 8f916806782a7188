#include "govtree/algebra.hpp"

#include <cstdio>
#include <random>

#include "govtree/category.hpp"
#include "govtree/sampling.hpp"

namespace govtree {

namespace {

Value perturb(const Value& x) {
  if (!x.is_response()) return x;
  Response r = x.as_response();
  r.status ^= 1;
  return r;
}

GovernedSampler sampler_for(std::uint64_t seed, const CampaignConfig& config) {
  return GovernedSampler{ResponseSampler(seed, config.samples_per_event)};
}

struct Trial {
  std::uint64_t seed;
  Program program;
  Handler handler;
};

Trial make_trial(const CampaignConfig& config, std::size_t index) {
  const std::uint64_t seed = trial_seed(config.seed, index);
  std::mt19937_64 rng(seed);
  const int depth = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(config.max_depth));
  Program p = random_directive_program(rng(), depth);
  Handler h = random_handler(rng);
  return Trial{seed, std::move(p), std::move(h)};
}

}  // namespace

GovernanceOperator mashin_operator() { return {"mashin", [](const Handler& h) { return govern(h); }}; }

GovernanceOperator no_check_operator() {
  return {"no_check", [](const Handler& h) {
            return GovernedHandler{"no_check(" + h.label + ")", [h](const DirectiveEvent& d) {
                                     return interpret_ungoverned(h, Program::trigger(d));
                                   }};
          }};
}

GovernanceOperator result_mangling_operator() {
  return {"result_mangling", [](const Handler& h) {
            Handler mangled{h.label, [h](const DirectiveEvent& d) {
                              return bind(h.fn(d), [](const Value& x) { return Program::ret(perturb(x)); });
                            }};
            GovernedHandler g = govern(mangled);
            g.label = "result_mangling(" + h.label + ")";
            return g;
          }};
}

GovernanceOperator fingerprinting_operator() {
  return {"fingerprinting", [](const Handler& h) {
            GovernedHandler inner = govern(h);
            return GovernedHandler{
                "fingerprinting(" + h.label + ")", [h, inner](const DirectiveEvent& d) {
                  GovCheck check{GovernanceStage{"handler:" + h.label}, d};
                  return GovTree::vis(GovernedEvent::gov(std::move(check)), [inner, d](const Value& b) {
                    if (!(b.is_bool() && b.as_bool())) return GovTree::spin();
                    return inner.fn(d);
                  });
                }};
          }};
}

GovernanceOperator trivial_operator() {
  return {"trivial", [](const Handler& h) {
            return GovernedHandler{"trivial(" + h.label + ")",
                                   [](const DirectiveEvent&) { return GovTree::ret(Unit{}); }};
          }};
}

std::vector<GovernanceOperator> all_operators() {
  return {mashin_operator(), no_check_operator(), result_mangling_operator(), fingerprinting_operator(),
          trivial_operator()};
}

std::optional<GovernanceOperator> operator_by_name(std::string_view name) {
  for (auto& op : all_operators()) {
    if (op.name == name) return op;
  }
  return std::nullopt;
}

void VerdictSummary::add(const BoundedVerdict& v, std::size_t trial) {
  ++trials;
  if (v.is_holds()) {
    ++holds;
  } else if (v.is_fails()) {
    ++fails;
    if (failing_trials.size() < kMaxRecorded) failing_trials.push_back(trial);
    if (first_witness.empty()) first_witness = v.to_string();
  } else {
    ++unknowns;
  }
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t index) {
  return mix_seed(seed, static_cast<std::uint64_t>(index));
}

VerdictSummary check_G1(const GovernanceOperator& op, const CampaignConfig& config) {
  VerdictSummary s;
  for (std::size_t i = 0; i < config.trials; ++i) {
    Trial t = make_trial(config, i);
    GovTree governed = interpret(op.transform(t.handler), t.program);
    s.add(gov_safe_check(governed, false, Fuel{config.fuel}, sampler_for(t.seed, config).io), i);
  }
  return s;
}

VerdictSummary check_G2(const GovernanceOperator& op, const CampaignConfig& config) {
  VerdictSummary s;
  for (std::size_t i = 0; i < config.trials; ++i) {
    Trial t = make_trial(config, i);
    GovTree governed = erase_gov(interpret(op.transform(t.handler), t.program));
    GovTree plain = interpret_ungoverned(t.handler, t.program);
    s.add(eutt_bounded(governed, plain, Fuel{config.fuel}, sampler_for(t.seed, config)), i);
  }
  return s;
}

VerdictSummary check_G3(const GovernanceOperator& op, const CampaignConfig& config) {
  VerdictSummary s;
  for (std::size_t i = 0; i < config.trials; ++i) {
    Trial t = make_trial(config, i);
    Handler twin = relabel(t.handler, t.handler.label + "/copy");
    GovTree a = interpret(op.transform(t.handler), t.program);
    GovTree b = interpret(op.transform(twin), t.program);
    s.add(eutt_bounded(a, b, Fuel{config.fuel}, sampler_for(t.seed, config)), i);
  }
  return s;
}

namespace {

// The governed run of a translated register machine must reproduce the
// registers of the direct loop in its last Observability message.
BoundedVerdict convergence_trial(const GovernanceOperator& op, std::uint64_t seed,
                                 const CampaignConfig& config) {
  std::mt19937_64 rng(seed);
  RegisterProgram machine;
  machine.registers = 1 + rng() % 2;
  const std::size_t length = rng() % 6;
  for (std::size_t i = 0; i < length; ++i) {
    switch (rng() % 4) {
      case 0: machine.instructions.push_back(RegisterInstr::halt()); break;
      case 1: machine.instructions.push_back(RegisterInstr::inc(rng() % machine.registers)); break;
      default: {
        const std::size_t reg = rng() % machine.registers;
        machine.instructions.push_back(RegisterInstr::dec_jz(reg, rng() % (length + 1)));
      }
    }
  }
  const std::uint64_t steps = rng() % 20;
  Program p = translate_register_program(machine, steps);
  Handler h = random_handler(rng);
  BoundedVerdict safe = gov_safe_check(interpret(op.transform(h), p), false, Fuel{config.fuel},
                                       sampler_for(seed, config).io);
  if (safe.is_fails()) return safe;

  RegisterRun direct = run_register_program(machine, steps);
  RunOutcome run = run_governed(interpret(op.transform(mock_handler(seed)), p),
                                GovernancePolicy::permissive(), Fuel{config.fuel}, seed);
  if (!run.value) return conjoin(std::move(safe), BoundedVerdict::unknown(UnknownReason::FuelExhausted));
  std::optional<std::vector<std::int64_t>> last;
  std::uint64_t emitted = 0;
  for (const auto& ev : run.trace) {
    if (ev.is_gov_check() || ev.io_tag() != "Observability") continue;
    auto d = decode_directive(ev.text);
    if (auto regs = parse_register_step(d.fields()[0])) {
      last = regs;
      ++emitted;
    }
  }
  const std::vector<std::int64_t> initial(machine.registers, 0);
  const auto& final_regs = last ? *last : initial;
  if (emitted != direct.steps || final_regs != direct.registers || !(*run.value == Value(Unit{}))) {
    return BoundedVerdict::fails({"register machine result not preserved by the governed run"});
  }
  return safe;
}

BoundedVerdict goal_trial(const GovernanceOperator& op, const Trial& t, const CampaignConfig& config) {
  const auto policy = GovernancePolicy::permissive();
  RunOutcome governed = run_governed(interpret(op.transform(t.handler), t.program), policy,
                                     Fuel{config.fuel}, t.seed);
  RunOutcome plain = run_governed(interpret_ungoverned(t.handler, t.program), policy,
                                  Fuel{config.fuel}, t.seed);
  if (!governed.value || !plain.value) return BoundedVerdict::unknown(UnknownReason::FuelExhausted);
  if (*governed.value == *plain.value) return BoundedVerdict::holds();
  return BoundedVerdict::fails(
      {"governed value " + governed.value->to_string() + " vs ungoverned " + plain.value->to_string()});
}

}  // namespace

DerivedSummary check_derived(const GovernanceOperator& op, const CampaignConfig& config) {
  DerivedSummary out;
  const auto effectful = effectful_kinds();
  for (std::size_t i = 0; i < config.trials; ++i) {
    const std::uint64_t seed = trial_seed(config.seed, i);
    out.convergence.add(convergence_trial(op, seed, config), i);

    std::mt19937_64 rng(seed);
    const std::uint64_t program_seed = rng();
    const int depth = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(config.max_depth));
    Program p = random_directive_program(program_seed, depth);
    Handler filter = filtering_handler(rng() % 1000);
    out.subsumption_pos.add(gov_safe_check(interpret(op.transform(filter), p), false, Fuel{config.fuel},
                                           sampler_for(seed, config).io),
                            i);

    DirectiveEvent d = random_directive_of(effectful[i % effectful.size()], rng);
    GovTree bare = GovTree::trigger(GovernedEvent::io(d));
    BoundedVerdict neg = gov_safe_check(bare, false, Fuel{config.fuel}, sampler_for(seed, config).io);
    out.subsumption_neg.add(neg.is_fails() ? BoundedVerdict::holds()
                                           : BoundedVerdict::fails({"bare " + describe(d) + " accepted"}),
                            i);

    out.goal_preservation.add(goal_trial(op, make_trial(config, i), config), i);
  }
  return out;
}

bool ConformanceReport::all_pass() const {
  return axioms_pass() && derived.convergence.passed() && derived.subsumption_pos.passed() &&
         derived.subsumption_neg.passed() && derived.goal_preservation.passed();
}

std::string ConformanceReport::render() const {
  std::string out = "operator: " + operator_name + "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-18s %8s %8s %8s %8s  %s\n", "property", "trials", "holds", "fails",
                "unknown", "status");
  out += line;
  const std::pair<const char*, const VerdictSummary*> rows[] = {
      {"G1", &g1},
      {"G2", &g2},
      {"G3", &g3},
      {"convergence", &derived.convergence},
      {"subsumption_pos", &derived.subsumption_pos},
      {"subsumption_neg", &derived.subsumption_neg},
      {"goal_preservation", &derived.goal_preservation},
  };
  for (const auto& [name, s] : rows) {
    std::snprintf(line, sizeof line, "%-18s %8zu %8zu %8zu %8zu  %s\n", name, s->trials, s->holds, s->fails,
                  s->unknowns, s->passed() ? "pass" : "FAIL");
    out += line;
  }
  for (const auto& [name, s] : rows) {
    if (s->passed()) continue;
    out += std::string(name) + " failing trials:";
    for (auto t : s->failing_trials) out += " " + std::to_string(t);
    out += "\n  first witness: " + s->first_witness + "\n";
  }
  return out;
}

ConformanceReport run_conformance(const GovernanceOperator& op, const CampaignConfig& config) {
  ConformanceReport r;
  r.operator_name = op.name;
  r.g1 = check_G1(op, config);
  r.g2 = check_G2(op, config);
  r.g3 = check_G3(op, config);
  r.derived = check_derived(op, config);
  return r;
}

}  // namespace govtree

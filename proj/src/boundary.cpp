#include "govtree/boundary.hpp"

#include <cstdio>
#include <random>

#include "govtree/program.hpp"
#include "govtree/sampling.hpp"

namespace govtree {

namespace {

ResponseSampler io_sampler(std::uint64_t seed, const CampaignConfig& config) {
  return ResponseSampler(seed, config.samples_per_event);
}

program::GeneratorOptions expressible(const CampaignConfig& config) {
  program::GeneratorOptions o;
  o.max_depth = config.max_depth < 4 ? config.max_depth : 4;
  o.allow_register = false;
  return o;
}

BoundedVerdict bare_io_rejected(const DirectiveEvent& d, Fuel fuel, const ResponseSampler& sampler) {
  BoundedVerdict v = gov_safe_check(GovTree::trigger(GovernedEvent::io(d)), false, fuel, sampler);
  if (v.is_fails()) return BoundedVerdict::holds();
  return BoundedVerdict::fails({"bare " + describe(d) + " accepted"});
}

BoundedVerdict cognitive_trial(std::size_t role, std::uint64_t seed, const CampaignConfig& config) {
  using namespace program;
  Rng rng(seed);
  NodePtr node;
  std::string expected;
  if (role == 0) {
    node = std::make_shared<const Node>(Node{CodeNode{random_expr(rng, "x", 2)}});
  } else {
    static constexpr DirectiveKind kRoles[] = {DirectiveKind::LLMCall, DirectiveKind::MemoryOp,
                                               DirectiveKind::CallMachine};
    PrimitiveNode p{kRoles[role - 1], {}, random_expr(rng, "r", 2)};
    for (std::size_t i = 0; i < directive_fields(p.kind).size(); ++i) p.params.push_back(random_expr(rng, "x", 1));
    expected = std::string(directive_tag(p.kind));
    node = std::make_shared<const Node>(Node{std::move(p)});
  }
  Program t = compile(node)(random_value(rng, 2));
  GovTree governed = interpret(govern(mock_handler(seed)), t);
  BoundedVerdict safe = gov_safe_check(governed, false, Fuel{config.fuel}, io_sampler(seed, config));
  if (!safe.is_holds()) return safe;
  RunOutcome run = run_governed(governed, GovernancePolicy::permissive(), Fuel{config.fuel}, seed);
  if (!run.value) return BoundedVerdict::fails({"primitive run did not terminate"});
  std::size_t io = 0;
  for (const auto& ev : run.trace) {
    if (ev.is_gov_check()) continue;
    if (ev.io_tag() != expected) return BoundedVerdict::fails({"unexpected I/O " + ev.text});
    ++io;
  }
  if (io != (expected.empty() ? 0u : 1u)) return BoundedVerdict::fails({"primitive role not realized"});
  return BoundedVerdict::holds();
}

}  // namespace

BoundedVerdict register_agreement(const RegisterProgram& machine, std::uint64_t steps,
                                  const Handler& handler, Fuel fuel) {
  Program p = translate_register_program(machine, steps);
  GovTree governed = interpret(govern(handler), p);
  BoundedVerdict safe = gov_safe_check(governed, false, fuel, ResponseSampler(0, 1));
  if (safe.is_fails()) return safe;
  RunOutcome run = run_governed(governed, GovernancePolicy::permissive(), fuel);
  if (!run.value) return conjoin(std::move(safe), BoundedVerdict::unknown(UnknownReason::FuelExhausted));
  RegisterRun direct = run_register_program(machine, steps);
  std::vector<std::int64_t> regs(machine.registers, 0);
  std::uint64_t emitted = 0;
  // Handlers may log their own Observability messages; steps start with "pc=".
  static const std::string step_prefix = [] {
    std::string s = encode_directive(observability("pc="));
    s.pop_back();
    return s;
  }();
  const TraceEvent* last = nullptr;
  for (const auto& ev : run.trace) {
    if (ev.is_gov_check() || !ev.text.starts_with(step_prefix)) continue;
    last = &ev;
    ++emitted;
  }
  if (last) {
    auto step = parse_register_step(decode_directive(last->text).fields()[0]);
    if (!step) return BoundedVerdict::fails({"unreadable register step " + last->text});
    regs = *step;
  }
  if (emitted != direct.steps) {
    return BoundedVerdict::fails({"governed run took " + std::to_string(emitted) + " steps, direct loop " +
                                  std::to_string(direct.steps)});
  }
  if (regs != direct.registers) return BoundedVerdict::fails({"final registers differ"});
  return safe;
}

RegisterSweep exhaustive_register_sweep(std::size_t max_length, std::size_t registers, std::uint64_t fuel) {
  RegisterSweep sweep;
  const Handler handler = mock_handler(0);
  const Fuel budget{16 * fuel + 64};
  for (std::size_t length = 0; length <= max_length; ++length) {
    std::vector<RegisterInstr> alphabet{RegisterInstr::halt()};
    for (std::size_t r = 0; r < registers; ++r) {
      alphabet.push_back(RegisterInstr::inc(r));
      for (std::size_t t = 0; t <= length; ++t) alphabet.push_back(RegisterInstr::dec_jz(r, t));
    }
    std::vector<std::size_t> digits(length, 0);
    for (;;) {
      RegisterProgram machine;
      machine.registers = registers;
      for (auto d : digits) machine.instructions.push_back(alphabet[d]);
      ++sweep.programs;
      BoundedVerdict v = register_agreement(machine, fuel, handler, budget);
      if (v.is_holds()) {
        ++sweep.agreed;
      } else if (sweep.disagreements.size() < 5) {
        std::string text;
        for (const auto& ins : machine.instructions) text += (text.empty() ? "" : "; ") + program::format_instruction(ins);
        sweep.disagreements.push_back("[" + text + "]: " + v.to_string());
      }
      if (run_register_program(machine, fuel).halted) ++sweep.halted;
      std::size_t i = 0;
      while (i < length && ++digits[i] == alphabet.size()) digits[i++] = 0;
      if (i == length) break;
    }
  }
  return sweep;
}

CoterminousReport run_coterminous(const CampaignConfig& config) {
  CoterminousReport r;
  const auto effectful = effectful_kinds();
  for (std::size_t k = 0; k < effectful.size(); ++k) {
    std::mt19937_64 rng(trial_seed(config.seed, k));
    r.nontrivial.add(bare_io_rejected(random_directive_of(effectful[k], rng), Fuel{config.fuel},
                                      io_sampler(config.seed, config)),
                     k);
  }
  for (std::size_t i = 0; i < config.trials; ++i) {
    const std::uint64_t seed = trial_seed(config.seed, i);
    program::Rng rng(seed);

    auto file = program::random_program_file(rng, expressible(config));
    Program p = program::compile(file.root)(file.input);
    Handler h = random_handler(rng);
    r.safety.add(gov_safe_check(interpret(govern(h), p), false, Fuel{config.fuel}, io_sampler(seed, config)), i);

    const std::size_t length = rng() % 6;
    const std::size_t registers = 1 + rng() % 2;
    RegisterProgram machine = program::random_register_program(rng, length, registers);
    const std::uint64_t steps = rng() % 51;
    Handler machine_handler = random_handler(rng);
    r.turing.add(register_agreement(machine, steps, machine_handler, Fuel{config.fuel}), i);

    auto filtered = program::random_program_file(rng, expressible(config));
    Program q = program::compile(filtered.root)(filtered.input);
    r.subsumption_pos.add(gov_safe_check(interpret(govern(filtering_handler(seed % 1000)), q), false,
                                         Fuel{config.fuel}, io_sampler(seed, config)),
                          i);
    r.subsumption_neg.add(bare_io_rejected(random_directive(rng), Fuel{config.fuel}, io_sampler(seed, config)),
                          i);

    r.cognitive.add(cognitive_trial(i % 4, seed, config), i);
  }
  return r;
}

bool CoterminousReport::passed() const {
  return safety.passed() && nontrivial.passed() && nontrivial.holds == effectful_kinds().size() &&
         turing.passed() && subsumption_pos.passed() && subsumption_neg.passed() &&
         subsumption_neg.holds > 0 && cognitive.passed();
}

std::string CoterminousReport::render() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-18s %8s %8s %8s %8s  %s\n", "field", "trials", "holds", "fails",
                "unknown", "status");
  out += line;
  const std::pair<const char*, const VerdictSummary*> rows[] = {
      {"ct_safety", &safety},
      {"ct_nontrivial", &nontrivial},
      {"ct_turing", &turing},
      {"ct_subsumption+", &subsumption_pos},
      {"ct_subsumption-", &subsumption_neg},
      {"ct_cognitive", &cognitive},
  };
  for (const auto& [name, s] : rows) {
    std::snprintf(line, sizeof line, "%-18s %8zu %8zu %8zu %8zu  %s\n", name, s->trials, s->holds, s->fails,
                  s->unknowns, s->passed() ? "pass" : "FAIL");
    out += line;
  }
  std::snprintf(line, sizeof line, "bare I/O rejected for %zu/%zu effectful directive kinds\n", nontrivial.holds,
                effectful_kinds().size());
  out += line;
  for (const auto& [name, s] : rows) {
    if (s->passed()) continue;
    out += std::string(name) + " failing trials:";
    for (auto t : s->failing_trials) out += " " + std::to_string(t);
    out += "\n  first witness: " + s->first_witness + "\n";
  }
  out += std::string("result: ") + (passed() ? "pass" : "FAIL") + "\n";
  return out;
}

}  // namespace govtree

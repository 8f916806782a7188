// Acceptance gate: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "govtree/algebra.hpp"
#include "govtree/boundary.hpp"
#include "govtree/capability.hpp"
#include "govtree/category.hpp"
#include "govtree/diff.hpp"
#include "govtree/ledger.hpp"
#include "govtree/program.hpp"
#include "govtree/sampling.hpp"
#include "govtree/trace.hpp"

using namespace govtree;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
int only = 0;  // when set, run just this criterion

void criterion(int n, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  if (only != 0 && only != n) return;
  const auto start = std::chrono::steady_clock::now();
  Outcome o = body();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = budget_seconds <= 0 || secs <= budget_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s criterion %d: %s -- %s (%.1fs%s)\n", pass ? "PASS" : "FAIL", n, title, o.detail.c_str(), secs,
              in_time ? "" : ", over time budget");
  std::fflush(stdout);
}

std::string summary(const VerdictSummary& s) {
  return std::to_string(s.trials) + " trials, " + std::to_string(s.holds) + " holds, " + std::to_string(s.fails) +
         " fails, " + std::to_string(s.unknowns) + " unknown";
}

Value nested(program::Rng& rng, int leaves) {
  Value v = program::random_value(rng, 1);
  for (int i = 1; i < leaves; ++i) {
    Value next = program::random_value(rng, 1);
    v = Value::pair(std::move(v), std::move(next));
  }
  return v;
}

Outcome g1_campaign() {
  CampaignConfig c;
  c.trials = 10000;
  c.seed = 1;
  c.max_depth = 8;
  VerdictSummary s = check_G1(mashin_operator(), c);
  return {s.trials == 10000 && s.fails == 0, summary(s)};
}

Outcome negative_soundness() {
  std::size_t rejected = 0;
  std::mt19937_64 rng(2);
  for (DirectiveKind k : effectful_kinds()) {
    GovTree bare = GovTree::trigger(GovernedEvent::io(random_directive_of(k, rng)));
    if (gov_safe_check(bare, false, Fuel{100}).is_fails()) ++rejected;
  }
  return {rejected == 12, std::to_string(rejected) + "/12 bare I/O trees rejected"};
}

Outcome differential() {
  DiffOptions o;
  o.trials = 10000;
  o.seed = 3;
  DiffReport r = run_diff(o);
  DiffOptions bugged = o;
  bugged.trials = 2000;
  bugged.reference.flip_trust_comparison = true;
  DiffReport b = run_diff(bugged);
  std::string detail = std::to_string(r.trials) + " programs, " + std::to_string(r.disagreements.size()) +
                       " disagreements, " + std::to_string(r.io_events) + " I/O events, " +
                       std::to_string(r.denied) + " denied; injected-bug reference: " +
                       std::to_string(b.disagreements.size()) + " disagreements in " + std::to_string(b.trials);
  if (!r.disagreements.empty()) detail += "; first: " + r.disagreements.front().what;
  return {r.trials >= 10000 && r.disagreements.empty() && !b.disagreements.empty(), detail};
}

Outcome coherence() {
  program::Rng rng(4);
  std::vector<Value> quads, triples, units;
  for (int i = 0; i < 1000; ++i) {
    quads.push_back(nested(rng, 4));
    triples.push_back(nested(rng, 3));
    Value a = program::random_value(rng, 1);
    units.push_back(Value::pair(std::move(a), Value(Unit{})));
    Value b = program::random_value(rng, 1);
    units.back() = Value::pair(units.back(), std::move(b));
  }
  BoundedVerdict p = check_pentagon(quads, Fuel{1000});
  BoundedVerdict t = check_triangle(units, Fuel{1000});
  BoundedVerdict h = check_hexagon(triples, Fuel{1000});
  return {p.is_holds() && t.is_holds() && h.is_holds(),
          "pentagon " + p.to_string() + ", triangle " + t.to_string() + ", hexagon " + h.to_string() +
              " over 1000 tuples each"};
}

Outcome capability_algebra() {
  std::size_t violations = 0;
  std::size_t checks = 0;
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++violations;
  };
  const CapSet bottom = CapSet::empty();
  const CapSet top = CapSet::full();
  for (std::uint16_t a = 0; a < 512; ++a) {
    const CapSet A = CapSet::from_mask(a);
    expect(cap_subset(A, A));
    expect(cap_union(A, A) == A);
    expect(cap_intersection(A, A) == A);
    expect(cap_subset(bottom, A) && cap_subset(A, top));
    expect(cap_union(A, bottom) == A && cap_union(A, top) == top);
    for (std::uint16_t b = 0; b < 512; ++b) {
      const CapSet B = CapSet::from_mask(b);
      const CapSet U = cap_union(A, B);
      expect(U == cap_union(B, A));
      expect(cap_subset(A, U) && cap_subset(B, U));
      expect(cap_subset(A, B) == (U == B));
      expect(!(cap_subset(A, B) && cap_subset(B, A)) || A == B);
      expect(cap_intersection(A, B) == cap_intersection(B, A));
      expect(cap_union(A, cap_intersection(A, B)) == A);
      for (std::uint16_t c = 0; c < 512; ++c) {
        const CapSet C = CapSet::from_mask(c);
        expect(cap_union(U, C) == cap_union(A, cap_union(B, C)));
        expect(!(cap_subset(A, B) && cap_subset(B, C)) || cap_subset(A, C));
      }
    }
  }
  const std::size_t lattice_checks = checks;
  for (TrustLevel a : all_trust_levels()) {
    for (TrustLevel b : all_trust_levels()) {
      expect(trust_le(a, b) || trust_le(b, a));
      expect(!(trust_le(a, b) && trust_le(b, a)) || a == b);
      const TrustLevel mx = trust_max(a, b);
      const TrustLevel mn = trust_min(a, b);
      expect(trust_le(a, mx) && trust_le(b, mx) && (mx == a || mx == b));
      expect(trust_le(mn, a) && trust_le(mn, b) && (mn == a || mn == b));
      for (TrustLevel c : all_trust_levels()) {
        expect(!(trust_le(a, b) && trust_le(b, c)) || trust_le(a, c));
        expect(!(trust_le(a, c) && trust_le(b, c)) || trust_le(mx, c));
      }
    }
  }
  return {violations == 0, std::to_string(lattice_checks) + " lattice checks over 512 subsets, " +
                               std::to_string(checks - lattice_checks) + " trust checks over 36 pairs, " +
                               std::to_string(violations) + " violations"};
}

Outcome cap_composites() {
  program::Rng rng(6);
  const ResponseSampler sampler(6);
  std::size_t fails = 0, unknowns = 0, holds = 0;
  std::size_t composites = 0;
  program::GeneratorOptions opts;
  opts.max_depth = 3;
  while (composites < 5000) {
    auto f = program::random_node(rng, opts);
    auto g = program::random_node(rng, opts);
    Value input = program::random_value(rng, 2);
    const CapSet cf = program::static_caps(f);
    const CapSet cg = program::static_caps(g);
    BoundedVerdict v = BoundedVerdict::holds();
    if (composites % 2 == 0) {
      v = check_bind_within_caps(program::compile(f)(input), program::compile(g), cf, cg, Fuel{5000}, sampler);
    } else {
      CapMorphism t = cap_tensor(program::compile_cap(f), program::compile_cap(g));
      v = t.caps == cap_union(cf, cg) ? within_caps_check(t.caps, t.morph(input), Fuel{5000}, sampler)
                                      : BoundedVerdict::fails({"tensor caps are not the union"});
    }
    ++composites;
    if (v.is_fails()) ++fails;
    else if (v.is_holds()) ++holds;
    else ++unknowns;
  }
  // Primitive profiles, each principal.
  auto params = [](const Value& x) { return std::vector<std::string>{x.to_string(), "p"}; };
  auto mem_params = [](const Value& x) { return std::vector<std::string>{"get", x.to_string(), ""}; };
  auto keep = [](const Value& r) { return r; };
  struct Profile {
    const char* name;
    CapMorphism cm;
    CapSet expected;
  };
  const Profile profiles[] = {
      {"code", cap_code(keep), CapSet::empty()},
      {"reason", cap_reason(params, keep), CapSet::singleton(Capability::CapComputeLLMReason)},
      {"memory", cap_memory(mem_params, keep), CapSet::singleton(Capability::CapMemory)},
      {"call", cap_call(params, keep), CapSet::singleton(Capability::CapMachineCall)},
  };
  const std::vector<Value> inputs{Value(1), Value("a"), Value(Unit{})};
  std::size_t profile_ok = 0;
  for (const auto& p : profiles) {
    bool ok = p.cm.caps == p.expected;
    for (const auto& in : inputs) ok = ok && within_caps_check(p.cm.caps, p.cm.morph(in), Fuel{100}, sampler).is_holds();
    ok = ok && principality_check(p.cm, inputs, Fuel{100}, sampler).is_holds();
    if (ok) ++profile_ok;
  }
  return {fails == 0 && profile_ok == 4,
          std::to_string(composites) + " composites (" + std::to_string(holds) + " holds, " + std::to_string(fails) +
              " fails, " + std::to_string(unknowns) + " unknown); primitive profiles principal: " +
              std::to_string(profile_ok) + "/4"};
}

Outcome no_ambient() {
  program::Rng rng(7);
  program::GeneratorOptions opts;
  opts.allow_primitives = false;
  std::size_t violations = 0, unknowns = 0, programs = 0;
  while (programs < 1000) {
    auto file = program::random_program_file(rng, opts);
    if (!(program::static_caps(file.root) == CapSet::empty())) continue;
    ++programs;
    Program t = program::compile(file.root)(file.input);
    BoundedVerdict v = no_ambient_effects_check(t, Fuel{5000});
    BoundedVerdict w = within_caps_check(CapSet::empty(), t, Fuel{5000});
    if (v.is_fails() || w.is_fails()) ++violations;
    else if (!v.is_holds() || !w.is_holds()) ++unknowns;
  }
  return {violations == 0, std::to_string(programs) + " empty-capability programs, " + std::to_string(violations) +
                               " violations, " + std::to_string(unknowns) + " unknown"};
}

Outcome trace_and_ledger() {
  program::Rng rng(8);
  program::GeneratorOptions opts;
  opts.max_depth = 3;
  std::size_t bind_ok = 0, bind_fail = 0, pairs = 0;
  while (pairs < 1000) {
    auto file = program::random_program_file(rng, opts);
    auto k = program::random_node(rng, opts);
    auto policy = program::make_policy(program::random_policy(rng));
    const std::uint64_t hs = rng() % 1000;
    BoundedVerdict v = check_trace_of_bind(program::compile(file.root)(file.input), program::compile(k), policy,
                                           mock_handler(hs), Fuel{100000});
    if (!v.is_holds() && !v.is_fails()) continue;  // first half did not terminate
    ++pairs;
    if (v.is_holds()) ++bind_ok;
    else ++bind_fail;
  }
  std::size_t valid = 0, complete = 0;
  std::vector<Ledger> nonempty;
  for (int i = 0; i < 1000; ++i) {
    auto file = program::random_program_file(rng, opts);
    auto policy = program::make_policy(program::random_policy(rng));
    RunOutcome run = interpret_governed(govern(mock_handler(rng() % 1000)), policy,
                                        program::compile(file.root)(file.input), Fuel{100000});
    Ledger l = trace_to_ledger(trace_of_run(run));
    if (ledger_valid(l)) ++valid;
    Ledger back = parse_ledger(format_ledger(l));
    if (ledger_events(l) == run.trace && ledger_events(back) == run.trace && ledger_valid(back)) ++complete;
    if (!l.entries.empty() && nonempty.size() < 100) nonempty.push_back(std::move(l));
  }
  std::size_t mutations = 0, detected = 0;
  for (std::size_t i = 0; mutations < 10000; ++i) {
    const Ledger& l = nonempty[i % nonempty.size()];
    TamperReport r = tamper_check(l, 100, 9 + i);
    mutations += r.mutations;
    detected += r.detected;
  }
  const bool pass = bind_fail == 0 && valid == 1000 && complete == 1000 && detected == mutations;
  return {pass, "trace_of_bind " + std::to_string(bind_ok) + "/" + std::to_string(pairs) + ", valid ledgers " +
                    std::to_string(valid) + "/1000, complete " + std::to_string(complete) + "/1000, tamper " +
                    std::to_string(detected) + "/" + std::to_string(mutations) + " detected"};
}

Outcome conformance() {
  CampaignConfig c;
  c.trials = 500;
  c.seed = 10;
  struct Expectation {
    GovernanceOperator op;
    bool g1_fails, g2_fails, g3_fails;
  };
  const Expectation cases[] = {
      {mashin_operator(), false, false, false},
      {no_check_operator(), true, false, false},
      {result_mangling_operator(), false, true, false},
      {fingerprinting_operator(), false, false, true},
  };
  bool pass = true;
  std::string detail;
  for (const auto& e : cases) {
    VerdictSummary g1 = check_G1(e.op, c), g2 = check_G2(e.op, c), g3 = check_G3(e.op, c);
    const bool ok = (g1.fails > 0) == e.g1_fails && (g2.fails > 0) == e.g2_fails && (g3.fails > 0) == e.g3_fails;
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += e.op.name + " fails G1/G2/G3 = " + std::to_string(g1.fails) + "/" + std::to_string(g2.fails) + "/" +
              std::to_string(g3.fails);
  }
  return {pass, detail};
}

Outcome boundary() {
  CampaignConfig c;
  c.trials = 1000;
  c.seed = 11;
  CoterminousReport r = run_coterminous(c);
  RegisterSweep sweep = exhaustive_register_sweep(5, 2, 50);
  std::string detail = "coterminous " + std::string(r.passed() ? "pass" : "FAIL") + " (nontrivial " +
                       std::to_string(r.nontrivial.holds) + "/12); register sweep " + std::to_string(sweep.agreed) +
                       "/" + std::to_string(sweep.programs) + " agree, " + std::to_string(sweep.halted) +
                       " halt within fuel 50";
  if (!sweep.disagreements.empty()) detail += "; first: " + sweep.disagreements.front();
  return {r.passed() && sweep.agreed == sweep.programs, detail};
}

void overhead_benchmark() {
  program::Rng rng(12);
  std::vector<std::pair<Program, Handler>> work;
  for (int i = 0; i < 2000; ++i) {
    Handler h = mock_handler(rng() % 1000);
    work.emplace_back(random_directive_program(rng(), 8), h);
  }
  auto time_runs = [&](bool governed) {
    const auto start = std::chrono::steady_clock::now();
    for (const auto& [p, h] : work) {
      GovTree t = governed ? interpret(govern(h), p) : interpret_ungoverned(h, p);
      run_governed(t, GovernancePolicy::permissive(), Fuel{100000});
    }
    return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count() /
           static_cast<double>(work.size());
  };
  const double plain = time_runs(false);
  const double gov = time_runs(true);
  std::printf("INFO overhead: ungoverned %.1f us/run, governed %.1f us/run (informational, no bound)\n", plain, gov);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) only = std::atoi(argv[1]);
  criterion(1, "G1 safety campaign, 10,000 programs, zero Fails", 60, g1_campaign);
  criterion(2, "negative soundness, bare I/O fails for 12/12 effectful kinds", 0, negative_soundness);
  criterion(3, "differential testing, 10,000 programs, zero disagreements", 300, differential);
  criterion(4, "coherence: pentagon, triangle, hexagon", 0, coherence);
  criterion(5, "capability lattice (512 subsets) and trust lattice (36 pairs)", 0, capability_algebra);
  criterion(6, "bind/tensor within_caps composites, primitive profiles, principality", 0, cap_composites);
  criterion(7, "no ambient effects for empty-capability programs", 0, no_ambient);
  criterion(8, "trace_of_bind, ledger validity, tamper detection, completeness", 0, trace_and_ledger);
  criterion(9, "conformance discrimination across operators", 0, conformance);
  criterion(10, "boundary report and exhaustive register sweep", 120, boundary);
  if (only == 0) overhead_benchmark();
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}

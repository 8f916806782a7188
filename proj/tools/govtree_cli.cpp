// govtree: run governed programs, verify ledgers, and drive the property campaigns.
//
// Exit codes: 0 value / all checks pass, 1 verification failure or bad input,
// 2 denied, 3 fuel exhausted.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "govtree/algebra.hpp"
#include "govtree/boundary.hpp"
#include "govtree/capability.hpp"
#include "govtree/category.hpp"
#include "govtree/diff.hpp"
#include "govtree/ledger.hpp"
#include "govtree/program.hpp"
#include "govtree/trace.hpp"

namespace {

using namespace govtree;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kDenied = 2;
constexpr int kOutOfFuel = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write " + path);
}

std::uint64_t default_seed() {
  const char* env = std::getenv("GOVTREE_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw std::runtime_error("GOVTREE_SEED must be a decimal integer");
  return v;
}

std::string verdict_line(const char* name, const BoundedVerdict& v) {
  return std::string(name) + ": " + v.to_string() + "\n";
}

struct RunArgs {
  std::string program;
  std::string policy = "permissive";
  std::optional<std::uint64_t> handler_seed;
  std::uint64_t fuel = 100000;
  std::string trace_out;
  std::string ledger_out;
};

int cmd_run(const RunArgs& a, std::uint64_t seed) {
  const auto file = program::parse_program(read_file(a.program));
  const auto policy = program::PolicySpec::parse(a.policy);
  const std::uint64_t hseed = a.handler_seed.value_or(seed);
  Program p = program::compile(file.root)(file.input);
  RunOutcome run = interpret_governed(govern(mock_handler(hseed)), program::make_policy(policy), p, Fuel{a.fuel});
  if (!a.trace_out.empty()) write_file(a.trace_out, format_trace(run.trace));
  if (!a.ledger_out.empty()) write_file(a.ledger_out, format_ledger(trace_to_ledger(run.trace)));
  std::printf("events: %zu\n", run.trace.size());
  if (run.value) {
    std::printf("value: %s\n", run.value->to_string().c_str());
    return kOk;
  }
  if (run.denied) {
    std::printf("denied\n");
    return kDenied;
  }
  std::printf("fuel exhausted\n");
  return kOutOfFuel;
}

int cmd_verify(const std::string& path) {
  Ledger ledger;
  try {
    ledger = parse_ledger(read_file(path));
  } catch (const LedgerParseError& e) {
    if (e.entry()) {
      std::printf("invalid: entry %zu: %s\n", *e.entry(), e.what());
    } else {
      std::printf("invalid: %s\n", e.what());
    }
    return kFailed;
  }
  const auto v = ledger_valid(ledger);
  if (!v) {
    std::printf("invalid: entry %zu: %s\n", v.first_invalid.value_or(0), v.reason.c_str());
    return kFailed;
  }
  std::printf("valid: %zu entries\n", ledger.entries.size());
  return kOk;
}

int cmd_check(const std::string& path, const std::string& property, std::uint64_t seed, std::uint64_t fuel,
              std::size_t samples) {
  const auto file = program::parse_program(read_file(path));
  Program p = program::compile(file.root)(file.input);
  const ResponseSampler sampler(seed, samples);
  std::string report;
  bool failed = false;
  if (property == "safety") {
    BoundedVerdict v = gov_safe_check(interpret(govern(mock_handler(seed)), p), false, Fuel{fuel}, sampler);
    report += verdict_line("gov_safe", v);
    failed = v.is_fails();
  } else {
    const CapSet caps = program::static_caps(file.root);
    report += "caps: {" + caps.to_string() + "}\n";
    BoundedVerdict within = within_caps_check(caps, p, Fuel{fuel}, sampler);
    report += verdict_line("within_caps", within);
    failed = within.is_fails();
    if (caps == CapSet::empty()) {
      BoundedVerdict quiet = no_ambient_effects_check(p, Fuel{fuel}, sampler);
      report += verdict_line("no_ambient_effects", quiet);
      failed = failed || quiet.is_fails();
    }
  }
  std::fputs(report.c_str(), stdout);
  return failed ? kFailed : kOk;
}

int cmd_coherence(std::uint64_t seed, std::size_t samples, std::uint64_t fuel) {
  program::Rng rng(seed);
  std::vector<Value> pent, tri, hex;
  for (std::size_t i = 0; i < samples; ++i) {
    Value a = program::random_value(rng), b = program::random_value(rng);
    Value c = program::random_value(rng), d = program::random_value(rng);
    pent.push_back(Value::pair(Value::pair(Value::pair(a, b), c), d));
    tri.push_back(Value::pair(Value::pair(a, Unit{}), b));
    hex.push_back(Value::pair(Value::pair(a, b), c));
  }
  const BoundedVerdict results[] = {check_pentagon(pent, Fuel{fuel}), check_triangle(tri, Fuel{fuel}),
                                    check_hexagon(hex, Fuel{fuel})};
  const char* names[] = {"pentagon", "triangle", "hexagon"};
  bool failed = false;
  std::printf("samples: %zu\n", samples);
  for (int i = 0; i < 3; ++i) {
    std::fputs(verdict_line(names[i], results[i]).c_str(), stdout);
    failed = failed || results[i].is_fails();
  }
  return failed ? kFailed : kOk;
}

int cmd_conformance(const std::string& name, const CampaignConfig& config) {
  std::vector<GovernanceOperator> ops;
  if (name == "all") {
    ops = all_operators();
  } else if (auto op = operator_by_name(name)) {
    ops.push_back(*op);
  } else {
    throw std::runtime_error("unknown operator '" + name + "'");
  }
  bool failed = false;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    ConformanceReport r = run_conformance(ops[i], config);
    if (i) std::printf("\n");
    std::fputs(r.render().c_str(), stdout);
    failed = failed || !r.all_pass();
  }
  return failed ? kFailed : kOk;
}

int cmd_boundary(const CampaignConfig& config, std::size_t sweep_length, std::size_t sweep_registers,
                 std::uint64_t sweep_fuel) {
  CoterminousReport r = run_coterminous(config);
  std::fputs(r.render().c_str(), stdout);
  RegisterSweep sweep = exhaustive_register_sweep(sweep_length, sweep_registers, sweep_fuel);
  std::printf("register sweep (length <= %zu, %zu registers, fuel %llu): %zu programs, %zu agree, %zu halt\n",
              sweep_length, sweep_registers, static_cast<unsigned long long>(sweep_fuel), sweep.programs,
              sweep.agreed, sweep.halted);
  for (const auto& d : sweep.disagreements) std::printf("  disagreement %s\n", d.c_str());
  return r.passed() && sweep.agreed == sweep.programs ? kOk : kFailed;
}

int cmd_diff(DiffOptions options) {
  DiffReport r = run_diff(options);
  std::fputs(r.render().c_str(), stdout);
  return r.disagreements.empty() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"govtree: governed execution of interaction-tree programs"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "Seed for all randomness (default: $GOVTREE_SEED or 0)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a program file under a policy");
  run_cmd->add_option("program", run.program, "Program file")->required();
  run_cmd->add_option("--policy", run.policy, "permissive | deny | allow:Tag,... | trust:Level:Cap,...");
  run_cmd->add_option("--handler-seed", run.handler_seed, "Mock handler seed (default: --seed)");
  run_cmd->add_option("--fuel", run.fuel, "Step budget");
  run_cmd->add_option("--trace-out", run.trace_out, "Write the trace here");
  run_cmd->add_option("--ledger-out", run.ledger_out, "Write the hash-chained ledger here");

  std::string ledger_path;
  auto* verify_cmd = app.add_subcommand("verify", "Validate a ledger file");
  verify_cmd->add_option("ledger", ledger_path, "Ledger file")->required();

  std::string check_path, property = "safety";
  std::uint64_t check_fuel = 4000;
  std::size_t check_samples = 2;
  auto* check_cmd = app.add_subcommand("check", "Check a program for governed safety or its capability bound");
  check_cmd->add_option("program", check_path, "Program file")->required();
  check_cmd->add_option("property", property, "safety | caps")->check(CLI::IsMember({"safety", "caps"}));
  check_cmd->add_option("--fuel", check_fuel, "Exploration budget");
  check_cmd->add_option("--samples", check_samples, "Sampled answers per I/O event");

  std::size_t coherence_samples = 1000;
  std::uint64_t coherence_fuel = 1000;
  auto* coherence_cmd = app.add_subcommand("coherence", "Pentagon, triangle and hexagon on random tuples");
  coherence_cmd->add_option("--samples", coherence_samples, "Tuples per diagram");
  coherence_cmd->add_option("--fuel", coherence_fuel, "Budget per comparison");

  CampaignConfig campaign;
  std::string operator_name = "mashin";
  auto* conformance_cmd = app.add_subcommand("conformance", "G1/G2/G3 and derived properties for an operator");
  conformance_cmd->add_option("operator", operator_name,
                              "mashin | no_check | result_mangling | fingerprinting | trivial | all");
  conformance_cmd->add_option("--trials", campaign.trials, "Trials per property");
  conformance_cmd->add_option("--fuel", campaign.fuel, "Budget per trial");

  std::size_t sweep_length = 3, sweep_registers = 2;
  std::uint64_t sweep_fuel = 50;
  auto* boundary_cmd = app.add_subcommand("boundary", "Coterminous report and exhaustive register sweep");
  boundary_cmd->add_option("--trials", campaign.trials, "Trials per field");
  boundary_cmd->add_option("--fuel", campaign.fuel, "Budget per trial");
  boundary_cmd->add_option("--sweep-length", sweep_length, "Longest register program in the sweep");
  boundary_cmd->add_option("--sweep-registers", sweep_registers, "Registers in the sweep")
      ->check(CLI::Range(1, 4));
  boundary_cmd->add_option("--sweep-fuel", sweep_fuel, "Steps per register program");

  DiffOptions diff;
  auto* diff_cmd = app.add_subcommand("diff", "Differential test against the reference interpreter");
  diff_cmd->add_option("--trials", diff.trials, "Random programs");
  diff_cmd->add_option("--fuel", diff.fuel, "Budget per run");
  diff_cmd->add_flag("--inject-bug", diff.reference.flip_trust_comparison,
                     "Use a reference with one trust comparison flipped");

  // Subcommands also accept --seed after their name.
  for (auto* sub : {run_cmd, verify_cmd, check_cmd, coherence_cmd, conformance_cmd, boundary_cmd, diff_cmd}) {
    sub->add_option("--seed", seed_flag, "Seed for all randomness");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::uint64_t seed = seed_flag ? *seed_flag : default_seed();
    campaign.seed = seed;
    diff.seed = seed;
    if (*run_cmd) return cmd_run(run, seed);
    if (*verify_cmd) return cmd_verify(ledger_path);
    if (*check_cmd) return cmd_check(check_path, property, seed, check_fuel, check_samples);
    if (*coherence_cmd) return cmd_coherence(seed, coherence_samples, coherence_fuel);
    if (*conformance_cmd) return cmd_conformance(operator_name, campaign);
    if (*boundary_cmd) return cmd_boundary(campaign, sweep_length, sweep_registers, sweep_fuel);
    if (*diff_cmd) return cmd_diff(diff);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
  return kFailed;
}

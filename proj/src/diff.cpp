#include "govtree/diff.hpp"

#include "govtree/trace.hpp"

namespace govtree {

namespace {

std::string show(const std::optional<Value>& v) { return v ? v->to_string() : "none"; }

}  // namespace

std::string diff_one(const program::ProgramFile& file, const program::PolicySpec& policy,
                     std::uint64_t handler_seed, std::uint64_t fuel,
                     const reference::ReferenceOptions& options) {
  Program t = program::compile(file.root)(file.input);
  RunOutcome tree = interpret_governed(govern(mock_handler(handler_seed)), program::make_policy(policy), t,
                                       Fuel{fuel});
  reference::ReferenceOutcome ref = reference::run(file, policy, handler_seed, options);
  if (!tree.value && !tree.denied) return "tree pipeline ran out of fuel";
  if (tree.denied != ref.denied) {
    return std::string("denied: tree ") + (tree.denied ? "yes" : "no") + ", reference " + (ref.denied ? "yes" : "no");
  }
  if (!(tree.value == ref.value)) return "value: tree " + show(tree.value) + ", reference " + show(ref.value);
  if (tree.trace != ref.trace) {
    std::size_t i = 0;
    while (i < tree.trace.size() && i < ref.trace.size() && tree.trace[i] == ref.trace[i]) ++i;
    auto at = [i](const Trace& tr) {
      return i < tr.size() ? format_trace(Trace{tr[i]}).substr(0, format_trace(Trace{tr[i]}).size() - 1)
                           : std::string("<end>");
    };
    return "trace differs at event " + std::to_string(i) + ": tree " + at(tree.trace) + ", reference " +
           at(ref.trace);
  }
  return {};
}

DiffReport run_diff(const DiffOptions& options) {
  DiffReport report;
  for (std::size_t i = 0; i < options.trials; ++i) {
    program::Rng rng(mix_seed(options.seed, i));
    program::ProgramFile generated = program::random_program_file(rng);
    program::PolicySpec policy = program::random_policy(rng);
    const std::uint64_t handler_seed = rng() % 100000;
    // Both sides read the program back from its document form.
    program::ProgramFile file = program::parse_program(program::format_program(generated));
    ++report.trials;
    std::string why = diff_one(file, policy, handler_seed, options.fuel, options.reference);
    if (!why.empty()) {
      report.disagreements.push_back({i, why + " [policy " + policy.to_string() + ", handler seed " +
                                            std::to_string(handler_seed) + "]"});
      continue;
    }
    auto ref = reference::run(file, policy, handler_seed, options.reference);
    if (ref.denied) ++report.denied;
    for (const auto& ev : ref.trace) {
      if (!ev.is_gov_check()) ++report.io_events;
    }
  }
  return report;
}

std::string DiffReport::render() const {
  std::string out = "trials: " + std::to_string(trials) + "\n";
  out += "denied runs: " + std::to_string(denied) + "\n";
  out += "io events: " + std::to_string(io_events) + "\n";
  out += "disagreements: " + std::to_string(disagreements.size()) + "\n";
  const std::size_t shown = disagreements.size() < 10 ? disagreements.size() : 10;
  for (std::size_t i = 0; i < shown; ++i) {
    out += "  trial " + std::to_string(disagreements[i].trial) + ": " + disagreements[i].what + "\n";
  }
  return out;
}

}  // namespace govtree

#include "govtree/trace.hpp"

namespace govtree {

const Trace& trace_of_run(const RunOutcome& outcome) { return outcome.trace; }

BoundedVerdict check_trace_of_bind(const Program& t, const Morphism& k,
                                   const GovernancePolicy& policy, const Handler& handler,
                                   Fuel fuel) {
  const GovernedHandler gh = govern(handler);
  RunOutcome first = interpret_governed(gh, policy, t, fuel);
  if (!first.value) return BoundedVerdict::unknown(UnknownReason::PreconditionUnmet);
  RunOutcome second = interpret_governed(gh, policy, k(*first.value), fuel);
  RunOutcome whole = interpret_governed(gh, policy, bind(t, k), fuel);

  Trace expected = first.trace;
  expected.insert(expected.end(), second.trace.begin(), second.trace.end());
  const Trace& actual = whole.trace;
  for (std::size_t i = 0; i < std::max(expected.size(), actual.size()); ++i) {
    if (i >= expected.size() || i >= actual.size() || !(expected[i] == actual[i])) {
      return BoundedVerdict::fails({"trace position " + std::to_string(i) + " differs"});
    }
  }
  if (whole.value != second.value || whole.denied != second.denied) {
    return BoundedVerdict::fails({"outcome of bind differs from outcome of continuation"});
  }
  if (!second.value && !second.denied) {
    return BoundedVerdict::unknown(UnknownReason::FuelExhausted);
  }
  return BoundedVerdict::holds();
}

bool well_governed(const Trace& trace, FlagReset reset) {
  bool approved = false;
  for (const auto& ev : trace) {
    if (ev.is_gov_check()) {
      if (ev.passed) approved = true;
      continue;
    }
    if (!approved) return false;
    if (reset == FlagReset::AfterEachIO) approved = false;
  }
  return true;
}

std::string format_trace(const Trace& trace) {
  std::string out;
  for (const auto& ev : trace) {
    if (ev.is_gov_check()) {
      out += "GOV " + ev.text + (ev.passed ? " pass\n" : " fail\n");
    } else {
      out += "IO " + ev.text + "\n";
    }
  }
  return out;
}

Trace parse_trace(std::string_view text) {
  Trace out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    if (line.empty()) continue;
    auto bad = [&] { return ParseError("trace line " + std::to_string(line_no) + " malformed"); };
    if (line.substr(0, 3) == "IO ") {
      if (line.size() == 3) throw bad();
      out.push_back(TraceEvent::io(std::string(line.substr(3))));
    } else if (line.substr(0, 4) == "GOV ") {
      std::string_view rest = line.substr(4);
      auto sp = rest.find(' ');
      if (sp == std::string_view::npos || sp == 0) throw bad();
      std::string_view verdict = rest.substr(sp + 1);
      if (verdict != "pass" && verdict != "fail") throw bad();
      out.push_back(TraceEvent::gov_check(GovernanceStage{std::string(rest.substr(0, sp))},
                                          verdict == "pass"));
    } else {
      throw bad();
    }
  }
  return out;
}

}  // namespace govtree

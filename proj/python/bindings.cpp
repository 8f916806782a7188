#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "govtree/algebra.hpp"
#include "govtree/capability.hpp"
#include "govtree/diff.hpp"
#include "govtree/ledger.hpp"
#include "govtree/program.hpp"
#include "govtree/trace.hpp"

namespace py = pybind11;
using namespace govtree;

namespace {

py::dict run_program(const std::string& text, const std::string& policy, std::uint64_t seed, std::uint64_t fuel) {
  const auto file = program::parse_program(text);
  const auto spec = program::PolicySpec::parse(policy);
  Program p = program::compile(file.root)(file.input);
  RunOutcome run;
  {
    py::gil_scoped_release release;
    run = interpret_governed(govern(mock_handler(seed)), program::make_policy(spec), p, Fuel{fuel});
  }
  py::dict out;
  out["status"] = run.value ? "value" : run.denied ? "denied" : "fuel";
  out["value"] = run.value ? py::object(py::str(run.value->to_string())) : py::object(py::none());
  out["trace"] = format_trace(run.trace);
  out["ledger"] = format_ledger(trace_to_ledger(run.trace));
  return out;
}

py::tuple verify_ledger(const std::string& text) {
  try {
    const auto v = ledger_valid(parse_ledger(text));
    if (v) return py::make_tuple(true, py::none(), "");
    return py::make_tuple(false, v.first_invalid.value_or(0), v.reason);
  } catch (const LedgerParseError& e) {
    return py::make_tuple(false, e.entry() ? py::object(py::int_(*e.entry())) : py::object(py::none()), e.what());
  }
}

std::vector<std::string> program_caps(const std::string& text) {
  std::vector<std::string> names;
  const CapSet caps = program::static_caps(program::parse_program(text).root);
  for (Capability c : all_capabilities()) {
    if (caps.contains(c)) names.emplace_back(capability_name(c));
  }
  return names;
}

py::dict diff(std::size_t trials, std::uint64_t seed, std::uint64_t fuel, bool inject_bug) {
  DiffOptions o;
  o.trials = trials;
  o.seed = seed;
  o.fuel = fuel;
  o.reference.flip_trust_comparison = inject_bug;
  DiffReport r;
  {
    py::gil_scoped_release release;
    r = run_diff(o);
  }
  py::dict out;
  out["trials"] = r.trials;
  out["denied"] = r.denied;
  out["disagreements"] = r.disagreements.size();
  out["report"] = r.render();
  return out;
}

py::tuple conformance(const std::string& name, std::size_t trials, std::uint64_t seed) {
  auto op = operator_by_name(name);
  if (!op) throw py::value_error("unknown operator '" + name + "'");
  CampaignConfig c;
  c.trials = trials;
  c.seed = seed;
  ConformanceReport r = [&] {
    py::gil_scoped_release release;
    return run_conformance(*op, c);
  }();
  return py::make_tuple(r.all_pass(), r.render());
}

}  // namespace

PYBIND11_MODULE(_govtree, m) {
  m.doc() = "Governed execution of interaction-tree programs";
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("run", &run_program, py::arg("program"), py::arg("policy") = "permissive", py::arg("seed") = 0,
        py::arg("fuel") = 100000, "Run a program document; returns status, value, trace and ledger text.");
  m.def("verify_ledger", &verify_ledger, py::arg("text"),
        "Validate ledger text; returns (valid, first_invalid_entry, reason).");
  m.def("canonical_directive", [](const std::string& text) { return encode_directive(decode_directive(text)); },
        py::arg("text"), "Parse a directive and return its canonical encoding.");
  m.def(
      "directive_capability",
      [](const std::string& text) -> std::optional<std::string> {
        auto c = capability_for_directive(decode_directive(text));
        if (!c) return std::nullopt;
        return std::string(capability_name(*c));
      },
      py::arg("text"), "Capability required by a directive, or None for bookkeeping directives.");
  m.def(
      "sha256_hex",
      [](const py::bytes& data) {
        const std::string s = data;
        return to_hex(sha256({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}));
      },
      py::arg("data"));
  m.def("program_caps", &program_caps, py::arg("program"), "Static capability bound of a program document.");
  m.def("diff", &diff, py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("fuel") = 100000,
        py::arg("inject_bug") = false, "Differential test against the reference interpreter.");
  m.def("conformance", &conformance, py::arg("operator") = "mashin", py::arg("trials") = 200, py::arg("seed") = 0,
        "Run the algebra campaign for one operator; returns (all_pass, report).");
  m.def("operators", [] {
    std::vector<std::string> names;
    for (const auto& op : all_operators()) names.push_back(op.name);
    return names;
  });
}

#include "govtree/category.hpp"

#include <charconv>
#include <stdexcept>

#include "govtree/governance.hpp"

namespace govtree {

namespace {

Morphism primitive(DirectiveKind kind, ParamBuilder build, PureFn extract) {
  return [kind, build = std::move(build), extract = std::move(extract)](const Value& a) {
    return Program::vis(DirectiveEvent(kind, build(a)),
                        [extract](const Value& x) { return Program::ret(extract(x)); });
  };
}

}  // namespace

Morphism identity() {
  return [](const Value& a) { return Program::ret(a); };
}

Morphism code(PureFn f) {
  return [f = std::move(f)](const Value& a) { return Program::ret(f(a)); };
}

Morphism reason(ParamBuilder build, PureFn extract) {
  return primitive(DirectiveKind::LLMCall, std::move(build), std::move(extract));
}

Morphism memory(ParamBuilder build, PureFn extract) {
  return primitive(DirectiveKind::MemoryOp, std::move(build), std::move(extract));
}

Morphism call(ParamBuilder build, PureFn extract) {
  return primitive(DirectiveKind::CallMachine, std::move(build), std::move(extract));
}

Morphism seq_compose(Morphism f, Morphism g) {
  return [f = std::move(f), g = std::move(g)](const Value& a) { return bind(f(a), g); };
}

Morphism tensor(Morphism f, Morphism g) {
  return [f = std::move(f), g = std::move(g)](const Value& p) {
    Value c = pair_second(p);
    return bind(f(pair_first(p)), [g, c](const Value& b) {
      return bind(g(c), [b](const Value& d) { return Program::ret(Value::pair(b, d)); });
    });
  };
}

Morphism branch(std::function<bool(const Value&)> pred, Morphism then_arm, Morphism else_arm) {
  return [pred = std::move(pred), then_arm = std::move(then_arm),
          else_arm = std::move(else_arm)](const Value& a) {
    return pred(a) ? then_arm(a) : else_arm(a);
  };
}

Value pair_first(const Value& v) { return v.is_pair() ? v.first() : Value(Unit{}); }
Value pair_second(const Value& v) { return v.is_pair() ? v.second() : Value(Unit{}); }

Morphism associator() {
  return code([](const Value& v) {
    Value ab = pair_first(v);
    return Value::pair(pair_first(ab), Value::pair(pair_second(ab), pair_second(v)));
  });
}

Morphism associator_inverse() {
  return code([](const Value& v) {
    Value bc = pair_second(v);
    return Value::pair(Value::pair(pair_first(v), pair_first(bc)), pair_second(bc));
  });
}

Morphism left_unitor() {
  return code([](const Value& v) { return pair_second(v); });
}

Morphism left_unitor_inverse() {
  return code([](const Value& v) { return Value::pair(Unit{}, v); });
}

Morphism right_unitor() {
  return code([](const Value& v) { return pair_first(v); });
}

Morphism right_unitor_inverse() {
  return code([](const Value& v) { return Value::pair(v, Unit{}); });
}

Morphism braiding() {
  return code([](const Value& v) { return Value::pair(pair_second(v), pair_first(v)); });
}

BoundedVerdict check_morphisms_equal(const Morphism& f, const Morphism& g,
                                     std::span<const Value> samples, Fuel fuel,
                                     const ResponseSampler& sampler) {
  BoundedVerdict acc = BoundedVerdict::holds();
  for (const Value& a : samples) {
    auto v = eutt_bounded(f(a), g(a), fuel, sampler);
    if (v.is_fails()) {
      auto witness = v.witness();
      witness.insert(witness.begin(), "input " + a.to_string());
      return BoundedVerdict::fails(std::move(witness));
    }
    acc = conjoin(std::move(acc), std::move(v));
  }
  return acc;
}

BoundedVerdict check_pentagon(std::span<const Value> samples, Fuel fuel) {
  // ((A⊗B)⊗C)⊗D -> A⊗(B⊗(C⊗D)) along both sides of the diagram.
  Morphism top = seq_compose(seq_compose(tensor(associator(), identity()), associator()),
                             tensor(identity(), associator()));
  Morphism bottom = seq_compose(associator(), associator());
  return check_morphisms_equal(top, bottom, samples, fuel);
}

BoundedVerdict check_triangle(std::span<const Value> samples, Fuel fuel) {
  Morphism lhs = seq_compose(associator(), tensor(identity(), left_unitor()));
  Morphism rhs = tensor(right_unitor(), identity());
  return check_morphisms_equal(lhs, rhs, samples, fuel);
}

BoundedVerdict check_hexagon(std::span<const Value> samples, Fuel fuel) {
  Morphism lhs = seq_compose(seq_compose(associator(), braiding()), associator());
  Morphism rhs = seq_compose(seq_compose(tensor(braiding(), identity()), associator()),
                             tensor(identity(), braiding()));
  return check_morphisms_equal(lhs, rhs, samples, fuel);
}

BoundedVerdict interp_tensor_distribute_check(const Morphism& f, const Morphism& g,
                                              const Handler& handler,
                                              std::span<const Value> inputs, Fuel fuel,
                                              const ResponseSampler& sampler) {
  const GovernedHandler gh = govern(handler);
  const GovernancePolicy permissive = GovernancePolicy::permissive();
  BoundedVerdict acc = BoundedVerdict::holds();
  for (const Value& p : inputs) {
    const Value a = pair_first(p);
    const Value c = pair_second(p);
    GovTree lhs = interpret(gh, tensor(f, g)(p));
    GovTree rhs = bind(interpret(gh, f(a)), [gh, g, c](const Value& b) {
      return interpret(gh, bind(g(c), [b](const Value& d) {
                         return Program::ret(Value::pair(b, d));
                       }));
    });
    auto v = eutt_bounded(lhs, rhs, fuel, GovernedSampler{sampler});
    if (v.is_fails()) {
      auto witness = v.witness();
      witness.insert(witness.begin(), "input " + p.to_string());
      return BoundedVerdict::fails(std::move(witness));
    }
    acc = conjoin(std::move(acc), std::move(v));

    RunOutcome left = run_governed(lhs, permissive, fuel);
    RunOutcome right = run_governed(rhs, permissive, fuel);
    if (left.value != right.value || left.trace != right.trace || left.denied != right.denied) {
      return BoundedVerdict::fails({"input " + p.to_string(), "permissive runs differ"});
    }
  }
  return acc;
}

bool RegisterProgram::well_formed() const {
  for (const auto& ins : instructions) {
    if (ins.op == RegisterInstr::Op::Halt) continue;
    if (ins.reg >= registers) return false;
    if (ins.op == RegisterInstr::Op::DecJz && ins.target > instructions.size()) return false;
  }
  return true;
}

namespace {

// Executes the instruction at pc, returning the next pc; nullopt means halt.
std::optional<std::size_t> step(const RegisterProgram& p, std::size_t pc,
                                std::vector<std::int64_t>& regs) {
  if (pc >= p.instructions.size()) return std::nullopt;
  const auto& ins = p.instructions[pc];
  switch (ins.op) {
    case RegisterInstr::Op::Halt: return std::nullopt;
    case RegisterInstr::Op::Inc: ++regs[ins.reg]; return pc + 1;
    case RegisterInstr::Op::DecJz:
      if (regs[ins.reg] == 0) return ins.target;
      --regs[ins.reg];
      return pc + 1;
  }
  return std::nullopt;
}

std::vector<std::int64_t> initial_registers(const RegisterProgram& p,
                                            std::vector<std::int64_t> regs) {
  regs.resize(p.registers, 0);
  return regs;
}

Program translate_from(std::shared_ptr<const RegisterProgram> p, std::uint64_t fuel,
                       std::size_t pc, std::vector<std::int64_t> regs) {
  if (fuel == 0) return Program::ret(Unit{});
  auto next = step(*p, pc, regs);
  if (!next) return Program::ret(Unit{});
  return Program::vis(observability(format_register_step(pc, regs)),
                      [p, fuel, pc = *next, regs](const Value&) {
                        return translate_from(p, fuel - 1, pc, regs);
                      });
}

}  // namespace

Program translate_register_program(const RegisterProgram& p, std::uint64_t fuel, std::size_t pc,
                                   std::vector<std::int64_t> registers) {
  if (!p.well_formed()) throw std::invalid_argument("ill-formed register program");
  return translate_from(std::make_shared<const RegisterProgram>(p), fuel, pc,
                        initial_registers(p, std::move(registers)));
}

RegisterRun run_register_program(const RegisterProgram& p, std::uint64_t fuel,
                                 std::vector<std::int64_t> registers) {
  if (!p.well_formed()) throw std::invalid_argument("ill-formed register program");
  RegisterRun run;
  run.registers = initial_registers(p, std::move(registers));
  std::size_t pc = 0;
  while (run.steps < fuel) {
    auto next = step(p, pc, run.registers);
    if (!next) {
      run.halted = true;
      return run;
    }
    pc = *next;
    ++run.steps;
  }
  run.halted = pc >= p.instructions.size() ||
               p.instructions[pc].op == RegisterInstr::Op::Halt;
  return run;
}

std::string format_register_step(std::size_t pc, std::span<const std::int64_t> registers) {
  std::string out = "pc=" + std::to_string(pc) + " regs=";
  for (std::size_t i = 0; i < registers.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(registers[i]);
  }
  return out;
}

std::optional<std::vector<std::int64_t>> parse_register_step(std::string_view message) {
  auto pos = message.find("regs=");
  if (message.substr(0, 3) != "pc=" || pos == std::string_view::npos) return std::nullopt;
  std::string_view rest = message.substr(pos + 5);
  std::vector<std::int64_t> regs;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view num = rest.substr(0, comma);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || ptr != num.data() + num.size()) return std::nullopt;
    regs.push_back(value);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return regs;
}

}  // namespace govtree

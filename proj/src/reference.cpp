#include "govtree/reference.hpp"

#include <stdexcept>

namespace govtree::reference {

namespace {

using namespace govtree::program;

std::int64_t num(const Value& v) {
  if (v.is_unit()) return 0;
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) return v.as_int();
  if (v.is_string()) return static_cast<std::int64_t>(v.as_string().length());
  if (v.is_response()) return v.as_response().status;
  return num(v.first());
}

bool truthy(const Value& v) {
  if (v.is_unit()) return false;
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) return v.as_int() != 0;
  if (v.is_string()) return v.as_string().length() > 0;
  return true;
}

std::string text(const Value& v) {
  if (v.is_response()) return v.as_response().content;
  if (v.is_string()) return v.as_string();
  return v.to_string();
}

std::int64_t wrapping(std::uint64_t (*f)(std::uint64_t, std::uint64_t), std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(f(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)));
}

Value first_of(const Value& v) { return v.is_pair() ? v.first() : Value(Unit{}); }
Value second_of(const Value& v) { return v.is_pair() ? v.second() : Value(Unit{}); }

// Capability needed per directive tag; empty for bookkeeping directives.
std::string required_cap(DirectiveKind k) {
  switch (k) {
    case DirectiveKind::LLMCall: return "CapComputeLLMReason";
    case DirectiveKind::MemoryOp: return "CapMemory";
    case DirectiveKind::CallMachine:
    case DirectiveKind::MCPCall: return "CapMachineCall";
    case DirectiveKind::HTTPRequest:
    case DirectiveKind::GraphQLRequest: return "CapHTTP";
    case DirectiveKind::FileOp: return "CapFile";
    case DirectiveKind::DBOp: return "CapDB";
    case DirectiveKind::ExecOp: return "CapExec";
    case DirectiveKind::Broadcast:
    case DirectiveKind::EmitEvent: return "CapBroadcast";
    case DirectiveKind::WebSocketOp: return "CapWebSocket";
    case DirectiveKind::RecordStep:
    case DirectiveKind::Observability: return "";
  }
  return "";
}

int level_rank(TrustLevel t) {
  switch (t) {
    case TrustLevel::Untrusted: return 0;
    case TrustLevel::Tested: return 1;
    case TrustLevel::Evaluated: return 2;
    case TrustLevel::Reviewed: return 3;
    case TrustLevel::Stdlib: return 4;
    case TrustLevel::System: return 5;
  }
  return 0;
}

struct Denied {};

class Machine {
 public:
  Machine(const PolicySpec& policy, std::uint64_t seed, const ReferenceOptions& options)
      : policy_(policy), seed_(seed), options_(options) {}

  Trace trace;

  bool permits(const DirectiveEvent& d) const {
    switch (policy_.kind) {
      case PolicySpec::Kind::Permissive: return true;
      case PolicySpec::Kind::Deny: return false;
      case PolicySpec::Kind::AllowKinds: return policy_.allowed.find(d.kind()) != policy_.allowed.end();
      case PolicySpec::Kind::Trust: {
        const std::string need = required_cap(d.kind());
        if (need.empty()) return true;
        const int rank = level_rank(policy_.level);
        const bool grants_all = options_.flip_trust_comparison ? rank > 4 : rank >= 4;
        if (grants_all) return true;
        for (Capability c : policy_.declared) {
          if (capability_name(c) != need) continue;
          if (rank == 0) return need == "CapComputeLLMReason";
          return true;
        }
        return false;
      }
    }
    return false;
  }

  // One governed directive: check, record, perform, answer.
  Value perform(const DirectiveEvent& d) {
    const bool ok = permits(d);
    trace.push_back(TraceEvent::gov_check(GovernanceStage{std::string(directive_tag(d))}, ok));
    if (!ok) throw Denied{};
    trace.push_back(TraceEvent::io(encode_directive(d)));
    return mock_answer(seed_, d);
  }

  Value exec(const Node& n, const Value& input) {
    if (const auto* c = std::get_if<CodeNode>(&n.node)) return evaluate(c->f, input);
    if (const auto* p = std::get_if<PrimitiveNode>(&n.node)) {
      std::vector<std::string> fields;
      for (const auto& e : p->params) fields.push_back(text(evaluate(e, input)));
      Value answer = perform(DirectiveEvent(p->kind, std::move(fields)));
      return evaluate(p->extract, answer);
    }
    if (const auto* s = std::get_if<SeqNode>(&n.node)) {
      Value cur = input;
      for (const auto& step : s->steps) cur = exec(*step, cur);
      return cur;
    }
    if (const auto* t = std::get_if<TensorNode>(&n.node)) {
      Value a = exec(*t->left, first_of(input));
      Value b = exec(*t->right, second_of(input));
      return Value::pair(a, b);
    }
    if (const auto* b = std::get_if<BranchNode>(&n.node)) {
      return truthy(evaluate(b->pred, input)) ? exec(*b->then_arm, input) : exec(*b->else_arm, input);
    }
    const auto& r = std::get<RegisterNode>(n.node);
    std::vector<std::int64_t> regs(r.machine.registers, 0);
    std::size_t pc = 0;
    for (std::uint64_t left = r.fuel; left > 0; --left) {
      if (pc >= r.machine.instructions.size()) break;
      const auto& ins = r.machine.instructions[pc];
      const std::size_t at = pc;
      if (ins.op == RegisterInstr::Op::Halt) break;
      if (ins.op == RegisterInstr::Op::Inc) {
        regs[ins.reg] += 1;
        pc += 1;
      } else if (regs[ins.reg] == 0) {
        pc = ins.target;
      } else {
        regs[ins.reg] -= 1;
        pc += 1;
      }
      std::string msg = "pc=" + std::to_string(at) + " regs=";
      for (std::size_t i = 0; i < regs.size(); ++i) msg += (i ? "," : "") + std::to_string(regs[i]);
      perform(observability(msg));
    }
    return Unit{};
  }

 private:
  const PolicySpec& policy_;
  std::uint64_t seed_;
  const ReferenceOptions& options_;
};

}  // namespace

Value evaluate(const ExprPtr& e, const Value& binding) {
  if (const auto* v = std::get_if<Value>(&e->node)) return *v;
  if (std::holds_alternative<Expr::Var>(e->node)) return binding;
  const auto& c = std::get<Expr::Call>(e->node);
  auto arg = [&](std::size_t i) { return evaluate(c.args[i], binding); };
  switch (c.op) {
    case Op::Add: return wrapping([](std::uint64_t a, std::uint64_t b) { return a + b; }, num(arg(0)), num(arg(1)));
    case Op::Sub: return wrapping([](std::uint64_t a, std::uint64_t b) { return a - b; }, num(arg(0)), num(arg(1)));
    case Op::Mul: return wrapping([](std::uint64_t a, std::uint64_t b) { return a * b; }, num(arg(0)), num(arg(1)));
    case Op::Mod: {
      const std::int64_t a = num(arg(0));
      const std::int64_t b = num(arg(1));
      if (b == 0 || b == -1) return std::int64_t{0};
      return a - (a / b) * b;
    }
    case Op::Neg: return wrapping([](std::uint64_t, std::uint64_t b) { return ~b + 1; }, 0, num(arg(0)));
    case Op::Eq: return arg(0) == arg(1);
    case Op::Lt: return num(arg(0)) < num(arg(1));
    case Op::Not: return !truthy(arg(0));
    case Op::And: {
      const bool a = truthy(arg(0));
      const bool b = truthy(arg(1));
      return a && b;
    }
    case Op::Or: {
      const bool a = truthy(arg(0));
      const bool b = truthy(arg(1));
      return a || b;
    }
    case Op::If: {
      Value cond = arg(0);
      Value a = arg(1);
      Value b = arg(2);
      return truthy(cond) ? a : b;
    }
    case Op::Pair: return Value::pair(arg(0), arg(1));
    case Op::Fst: {
      Value v = arg(0);
      return v.is_pair() ? v.first() : v;
    }
    case Op::Snd: return second_of(arg(0));
    case Op::Concat: return text(arg(0)) + text(arg(1));
    case Op::Str: return text(arg(0));
    case Op::Len: return static_cast<std::int64_t>(text(arg(0)).length());
    case Op::Status: {
      Value v = arg(0);
      return v.is_response() ? v.as_response().status : std::int64_t{0};
    }
    case Op::Content: return text(arg(0));
    case Op::MakeResponse: {
      Response r;
      const std::string kind = text(arg(0));
      r.kind = ResponseKind::LLMResponse;
      for (std::size_t i = 0; i < kResponseKindCount; ++i) {
        if (response_kind_name(static_cast<ResponseKind>(i)) == kind) r.kind = static_cast<ResponseKind>(i);
      }
      r.status = num(arg(1));
      r.content = text(arg(2));
      return r;
    }
  }
  throw std::logic_error("unknown operation");
}

ReferenceOutcome run(const ProgramFile& file, const PolicySpec& policy, std::uint64_t handler_seed,
                     const ReferenceOptions& options) {
  Machine m(policy, handler_seed, options);
  ReferenceOutcome out;
  try {
    out.value = m.exec(*file.root, file.input);
  } catch (const Denied&) {
    out.denied = true;
  }
  out.trace = std::move(m.trace);
  return out;
}

}  // namespace govtree::reference

#include "govtree/program.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <stdexcept>

namespace govtree::program {

namespace {

struct OpInfo {
  Op op;
  std::string_view name;
  std::size_t arity;
};

constexpr std::array<OpInfo, 20> kOps{{
    {Op::Add, "add", 2},       {Op::Sub, "sub", 2},         {Op::Mul, "mul", 2},
    {Op::Mod, "mod", 2},       {Op::Neg, "neg", 1},         {Op::Eq, "eq", 2},
    {Op::Lt, "lt", 2},         {Op::Not, "not", 1},         {Op::And, "and", 2},
    {Op::Or, "or", 2},         {Op::If, "if", 3},           {Op::Pair, "pair", 2},
    {Op::Fst, "fst", 1},       {Op::Snd, "snd", 1},         {Op::Concat, "concat", 2},
    {Op::Str, "str", 1},       {Op::Len, "len", 1},         {Op::Status, "status", 1},
    {Op::Content, "content", 1}, {Op::MakeResponse, "response", 3},
}};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

std::optional<Op> op_from_name(std::string_view name) {
  for (const auto& o : kOps) {
    if (o.name == name) return o.op;
  }
  return std::nullopt;
}

// Coercions that keep every operation total.
std::int64_t as_i(const Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_bool()) return v.as_bool() ? 1 : 0;
  if (v.is_string()) return static_cast<std::int64_t>(v.as_string().size());
  if (v.is_pair()) return as_i(v.first());
  if (v.is_response()) return v.as_response().status;
  return 0;
}

bool as_b(const Value& v) {
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) return v.as_int() != 0;
  if (v.is_string()) return !v.as_string().empty();
  return !v.is_unit();
}

std::string as_s(const Value& v) {
  if (v.is_string()) return v.as_string();
  if (v.is_response()) return v.as_response().content;
  return v.to_string();
}

std::int64_t wrap(std::uint64_t u) { return static_cast<std::int64_t>(u); }

Value apply_op(Op op, const std::vector<Value>& a) {
  switch (op) {
    case Op::Add: return wrap(static_cast<std::uint64_t>(as_i(a[0])) + static_cast<std::uint64_t>(as_i(a[1])));
    case Op::Sub: return wrap(static_cast<std::uint64_t>(as_i(a[0])) - static_cast<std::uint64_t>(as_i(a[1])));
    case Op::Mul: return wrap(static_cast<std::uint64_t>(as_i(a[0])) * static_cast<std::uint64_t>(as_i(a[1])));
    case Op::Mod: {
      const auto x = as_i(a[0]);
      const auto y = as_i(a[1]);
      if (y == 0 || y == -1) return std::int64_t{0};
      return x % y;
    }
    case Op::Neg: return wrap(0 - static_cast<std::uint64_t>(as_i(a[0])));
    case Op::Eq: return a[0] == a[1];
    case Op::Lt: return as_i(a[0]) < as_i(a[1]);
    case Op::Not: return !as_b(a[0]);
    case Op::And: return as_b(a[0]) && as_b(a[1]);
    case Op::Or: return as_b(a[0]) || as_b(a[1]);
    case Op::If: return as_b(a[0]) ? a[1] : a[2];
    case Op::Pair: return Value::pair(a[0], a[1]);
    case Op::Fst: return a[0].is_pair() ? a[0].first() : a[0];
    case Op::Snd: return a[0].is_pair() ? a[0].second() : Value(Unit{});
    case Op::Concat: return as_s(a[0]) + as_s(a[1]);
    case Op::Str: return as_s(a[0]);
    case Op::Len: return static_cast<std::int64_t>(as_s(a[0]).size());
    case Op::Status: return a[0].is_response() ? a[0].as_response().status : std::int64_t{0};
    case Op::Content: return as_s(a[0]);
    case Op::MakeResponse: {
      Response r;
      r.kind = response_kind_from_name(as_s(a[0])).value_or(ResponseKind::LLMResponse);
      r.status = as_i(a[1]);
      r.content = as_s(a[2]);
      return r;
    }
  }
  return Unit{};
}

class ExprParser {
 public:
  ExprParser(std::string_view text, std::string_view vars) : s_(text), vars_(vars) {}

  ExprPtr parse_all() {
    ExprPtr e = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("expression: " + why + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '"') return lit(parse_string());
    if (c == '-' || (c >= '0' && c <= '9')) return lit(parse_int());
    if (!(c >= 'a' && c <= 'z') && c != '_') fail("unexpected character");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ((s_[pos_] >= 'a' && s_[pos_] <= 'z') || s_[pos_] == '_')) ++pos_;
    const std::string_view word = s_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      auto op = op_from_name(word);
      if (!op) fail("unknown operation '" + std::string(word) + "'");
      ++pos_;
      std::vector<ExprPtr> args;
      if (!eat(')')) {
        do {
          args.push_back(parse());
        } while (eat(','));
        if (!eat(')')) fail("expected ')'");
      }
      if (args.size() != op_arity(*op)) fail("wrong arity for '" + std::string(word) + "'");
      return call(*op, std::move(args));
    }
    if (word == "unit") return lit(Unit{});
    if (word == "true") return lit(true);
    if (word == "false") return lit(false);
    if (word.size() == 1 && vars_.find(word[0]) != std::string_view::npos) return var(word[0]);
    fail("unknown name '" + std::string(word) + "'");
  }

  std::int64_t parse_int() {
    const std::size_t start = pos_;
    if (s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) fail("bad integer");
    return v;
  }

  std::string parse_string() {
    ++pos_;
    std::string out;
    for (;;) {
      if (pos_ >= s_.size()) fail("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= s_.size()) fail("unterminated escape");
      const char e = s_[pos_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'x': {
          if (pos_ + 2 > s_.size()) fail("short hex escape");
          unsigned v = 0;
          auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + pos_ + 2, v, 16);
          if (ec != std::errc() || ptr != s_.data() + pos_ + 2) fail("bad hex escape");
          out += static_cast<char>(v);
          pos_ += 2;
          break;
        }
        default: fail("unknown escape");
      }
    }
  }

  std::string_view s_;
  std::string_view vars_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view op_name(Op op) { return info(op).name; }
std::size_t op_arity(Op op) { return info(op).arity; }

ExprPtr lit(Value v) { return std::make_shared<const Expr>(Expr{std::move(v)}); }
ExprPtr var(char name) { return std::make_shared<const Expr>(Expr{Expr::Var{name}}); }
ExprPtr call(Op op, std::vector<ExprPtr> args) {
  if (args.size() != op_arity(op)) throw std::invalid_argument("wrong arity for " + std::string(op_name(op)));
  return std::make_shared<const Expr>(Expr{Expr::Call{op, std::move(args)}});
}

ExprPtr parse_expr(std::string_view text, std::string_view allowed_vars) {
  return ExprParser(text, allowed_vars).parse_all();
}

std::string format_expr(const ExprPtr& e) {
  if (const auto* v = std::get_if<Value>(&e->node)) return v->to_string();
  if (const auto* x = std::get_if<Expr::Var>(&e->node)) return std::string(1, x->name);
  const auto& c = std::get<Expr::Call>(e->node);
  std::string out(op_name(c.op));
  out += '(';
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (i) out += ", ";
    out += format_expr(c.args[i]);
  }
  return out + ')';
}

PureFn compile_expr(const ExprPtr& e) {
  if (const auto* v = std::get_if<Value>(&e->node)) {
    return [v = *v](const Value&) { return v; };
  }
  if (std::holds_alternative<Expr::Var>(e->node)) {
    return [](const Value& x) { return x; };
  }
  const auto& c = std::get<Expr::Call>(e->node);
  std::vector<PureFn> args;
  for (const auto& a : c.args) args.push_back(compile_expr(a));
  return [op = c.op, args = std::move(args)](const Value& x) {
    std::vector<Value> vals;
    vals.reserve(args.size());
    for (const auto& f : args) vals.push_back(f(x));
    return apply_op(op, vals);
  };
}

std::string_view primitive_name(DirectiveKind kind) {
  switch (kind) {
    case DirectiveKind::LLMCall: return "reason";
    case DirectiveKind::MemoryOp: return "memory";
    case DirectiveKind::CallMachine: return "call";
    default: throw std::invalid_argument("not a primitive directive kind");
  }
}

RegisterInstr parse_instruction(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  auto number = [&](std::string_view w) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw ParseError("bad instruction operand '" + std::string(w) + "'");
    }
    return v;
  };
  if (words.size() == 1 && words[0] == "halt") return RegisterInstr::halt();
  if (words.size() == 2 && words[0] == "inc") return RegisterInstr::inc(number(words[1]));
  if (words.size() == 3 && words[0] == "decjz") {
    return RegisterInstr::dec_jz(number(words[1]), number(words[2]));
  }
  throw ParseError("bad instruction '" + std::string(text) + "'");
}

std::string format_instruction(const RegisterInstr& ins) {
  switch (ins.op) {
    case RegisterInstr::Op::Inc: return "inc " + std::to_string(ins.reg);
    case RegisterInstr::Op::DecJz:
      return "decjz " + std::to_string(ins.reg) + " " + std::to_string(ins.target);
    case RegisterInstr::Op::Halt: return "halt";
  }
  return "halt";
}

namespace {

using nlohmann::json;

NodePtr make_node(auto n) { return std::make_shared<const Node>(Node{std::move(n)}); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string string_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) throw ParseError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t uint_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_unsigned()) throw ParseError(std::string("field '") + name + "' must be a natural number");
  return v.get<std::uint64_t>();
}

NodePtr node_from_json(const json& j) {
  const std::string kind = string_field(j, "kind");
  if (kind == "code") return make_node(CodeNode{parse_expr(string_field(j, "f"), "x")});
  for (DirectiveKind dk : {DirectiveKind::LLMCall, DirectiveKind::MemoryOp, DirectiveKind::CallMachine}) {
    if (kind != primitive_name(dk)) continue;
    const auto& params = field(j, "params");
    if (!params.is_object()) throw ParseError("params must be an object");
    PrimitiveNode p{dk, {}, parse_expr(string_field(j, "extract"), "r")};
    const auto names = directive_fields(dk);
    if (params.size() != names.size()) throw ParseError("params do not match the directive schema");
    for (auto name : names) p.params.push_back(parse_expr(string_field(params, std::string(name).c_str()), "x"));
    return make_node(std::move(p));
  }
  if (kind == "seq") {
    const auto& steps = field(j, "steps");
    if (!steps.is_array() || steps.empty()) throw ParseError("seq needs a nonempty steps array");
    SeqNode s;
    for (const auto& step : steps) s.steps.push_back(node_from_json(step));
    return make_node(std::move(s));
  }
  if (kind == "tensor") {
    return make_node(TensorNode{node_from_json(field(j, "left")), node_from_json(field(j, "right"))});
  }
  if (kind == "branch") {
    return make_node(BranchNode{parse_expr(string_field(j, "pred"), "x"), node_from_json(field(j, "then")),
                                node_from_json(field(j, "else"))});
  }
  if (kind == "register_machine") {
    RegisterNode r;
    r.machine.registers = uint_field(j, "registers");
    r.fuel = uint_field(j, "fuel");
    const auto& ins = field(j, "instructions");
    if (!ins.is_array()) throw ParseError("instructions must be an array");
    for (const auto& i : ins) {
      if (!i.is_string()) throw ParseError("instructions must be strings");
      r.machine.instructions.push_back(parse_instruction(i.get<std::string>()));
    }
    if (r.machine.registers == 0 || !r.machine.well_formed()) throw ParseError("ill-formed register machine");
    return make_node(std::move(r));
  }
  throw ParseError("unknown node kind '" + kind + "'");
}

json node_to_json(const NodePtr& n) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        json j;
        if constexpr (std::is_same_v<T, CodeNode>) {
          j["kind"] = "code";
          j["f"] = format_expr(x.f);
        } else if constexpr (std::is_same_v<T, PrimitiveNode>) {
          j["kind"] = std::string(primitive_name(x.kind));
          json params = json::object();
          const auto names = directive_fields(x.kind);
          for (std::size_t i = 0; i < names.size(); ++i) params[std::string(names[i])] = format_expr(x.params[i]);
          j["params"] = std::move(params);
          j["extract"] = format_expr(x.extract);
        } else if constexpr (std::is_same_v<T, SeqNode>) {
          j["kind"] = "seq";
          j["steps"] = json::array();
          for (const auto& s : x.steps) j["steps"].push_back(node_to_json(s));
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          j["kind"] = "tensor";
          j["left"] = node_to_json(x.left);
          j["right"] = node_to_json(x.right);
        } else if constexpr (std::is_same_v<T, BranchNode>) {
          j["kind"] = "branch";
          j["pred"] = format_expr(x.pred);
          j["then"] = node_to_json(x.then_arm);
          j["else"] = node_to_json(x.else_arm);
        } else {
          j["kind"] = "register_machine";
          j["registers"] = x.machine.registers;
          j["fuel"] = x.fuel;
          j["instructions"] = json::array();
          for (const auto& i : x.machine.instructions) j["instructions"].push_back(format_instruction(i));
        }
        return j;
      },
      n->node);
}

ParamBuilder param_builder(const std::vector<ExprPtr>& params) {
  std::vector<PureFn> fs;
  for (const auto& p : params) fs.push_back(compile_expr(p));
  return [fs = std::move(fs)](const Value& x) {
    std::vector<std::string> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(as_s(f(x)));
    return out;
  };
}

}  // namespace

ProgramFile parse_program(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("program JSON: ") + e.what());
  }
  if (string_field(doc, "format") != "govtree-program/1") throw ParseError("unsupported program format");
  ProgramFile out;
  out.input = compile_expr(parse_expr(string_field(doc, "input"), ""))(Value(Unit{}));
  out.root = node_from_json(field(doc, "program"));
  return out;
}

std::string format_program(const ProgramFile& program) {
  json doc;
  doc["format"] = "govtree-program/1";
  doc["input"] = program.input.to_string();
  doc["program"] = node_to_json(program.root);
  return doc.dump(2) + "\n";
}

Morphism compile(const NodePtr& node) {
  return std::visit(
      [](const auto& x) -> Morphism {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CodeNode>) {
          return code(compile_expr(x.f));
        } else if constexpr (std::is_same_v<T, PrimitiveNode>) {
          auto build = param_builder(x.params);
          auto extract = compile_expr(x.extract);
          switch (x.kind) {
            case DirectiveKind::LLMCall: return reason(build, extract);
            case DirectiveKind::MemoryOp: return memory(build, extract);
            default: return govtree::call(build, extract);
          }
        } else if constexpr (std::is_same_v<T, SeqNode>) {
          Morphism m = compile(x.steps.front());
          for (std::size_t i = 1; i < x.steps.size(); ++i) m = seq_compose(m, compile(x.steps[i]));
          return m;
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          return tensor(compile(x.left), compile(x.right));
        } else if constexpr (std::is_same_v<T, BranchNode>) {
          auto pred = compile_expr(x.pred);
          return branch([pred](const Value& v) { return as_b(pred(v)); }, compile(x.then_arm),
                        compile(x.else_arm));
        } else {
          return [machine = x.machine, fuel = x.fuel](const Value&) {
            return translate_register_program(machine, fuel);
          };
        }
      },
      node->node);
}

CapSet static_caps(const NodePtr& node) {
  return std::visit(
      [](const auto& x) -> CapSet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PrimitiveNode>) {
          return CapSet::singleton(*capability_for_directive(x.kind));
        } else if constexpr (std::is_same_v<T, SeqNode>) {
          CapSet c;
          for (const auto& s : x.steps) c = cap_union(c, static_caps(s));
          return c;
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          return cap_union(static_caps(x.left), static_caps(x.right));
        } else if constexpr (std::is_same_v<T, BranchNode>) {
          return cap_union(static_caps(x.then_arm), static_caps(x.else_arm));
        } else {
          return CapSet::empty();
        }
      },
      node->node);
}

CapMorphism compile_cap(const NodePtr& node) {
  return std::visit(
      [&node](const auto& x) -> CapMorphism {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CodeNode>) {
          return cap_code(compile_expr(x.f));
        } else if constexpr (std::is_same_v<T, PrimitiveNode>) {
          auto build = param_builder(x.params);
          auto extract = compile_expr(x.extract);
          switch (x.kind) {
            case DirectiveKind::LLMCall: return cap_reason(build, extract);
            case DirectiveKind::MemoryOp: return cap_memory(build, extract);
            default: return cap_call(build, extract);
          }
        } else if constexpr (std::is_same_v<T, SeqNode>) {
          CapMorphism m = compile_cap(x.steps.front());
          for (std::size_t i = 1; i < x.steps.size(); ++i) m = cap_seq_compose(m, compile_cap(x.steps[i]));
          return m;
        } else if constexpr (std::is_same_v<T, TensorNode>) {
          return cap_tensor(compile_cap(x.left), compile_cap(x.right));
        } else if constexpr (std::is_same_v<T, BranchNode>) {
          auto pred = compile_expr(x.pred);
          return cap_branch([pred](const Value& v) { return as_b(pred(v)); }, compile_cap(x.then_arm),
                            compile_cap(x.else_arm));
        } else {
          // Register machines only emit Observability, which needs no capability.
          return CapMorphism{compile(node), CapSet::empty(), Constructed{}};
        }
      },
      node->node);
}

PolicySpec PolicySpec::parse(std::string_view text) {
  PolicySpec spec;
  auto split = [](std::string_view s) {
    std::vector<std::string_view> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
      auto comma = s.find(',', start);
      out.push_back(s.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  };
  if (text == "permissive") return spec;
  if (text == "deny") {
    spec.kind = Kind::Deny;
    return spec;
  }
  if (text.starts_with("allow:")) {
    spec.kind = Kind::AllowKinds;
    for (auto tag : split(text.substr(6))) {
      auto k = directive_kind_from_tag(tag);
      if (!k) throw ParseError("unknown directive tag '" + std::string(tag) + "'");
      spec.allowed.insert(*k);
    }
    return spec;
  }
  if (text.starts_with("trust:")) {
    spec.kind = Kind::Trust;
    auto rest = text.substr(6);
    auto colon = rest.find(':');
    auto level = trust_from_name(rest.substr(0, colon));
    if (!level) throw ParseError("unknown trust level in '" + std::string(text) + "'");
    spec.level = *level;
    if (colon != std::string_view::npos) {
      for (auto name : split(rest.substr(colon + 1))) {
        auto c = capability_from_name(name);
        if (!c) throw ParseError("unknown capability '" + std::string(name) + "'");
        spec.declared.push_back(*c);
      }
    }
    return spec;
  }
  throw ParseError("unknown policy '" + std::string(text) + "'");
}

std::string PolicySpec::to_string() const {
  switch (kind) {
    case Kind::Permissive: return "permissive";
    case Kind::Deny: return "deny";
    case Kind::AllowKinds: {
      std::string out = "allow:";
      bool first = true;
      for (auto k : allowed) {
        if (!first) out += ',';
        out += directive_tag(k);
        first = false;
      }
      return out;
    }
    case Kind::Trust: {
      std::string out = "trust:" + std::string(trust_name(level)) + ":";
      for (std::size_t i = 0; i < declared.size(); ++i) {
        if (i) out += ',';
        out += capability_name(declared[i]);
      }
      return out;
    }
  }
  return "permissive";
}

GovernancePolicy make_policy(const PolicySpec& spec) {
  switch (spec.kind) {
    case PolicySpec::Kind::Permissive: return GovernancePolicy::permissive();
    case PolicySpec::Kind::Deny: return GovernancePolicy::denying();
    case PolicySpec::Kind::AllowKinds: return GovernancePolicy::allow_kinds(spec.allowed);
    case PolicySpec::Kind::Trust: return trust_policy(spec.level, spec.declared);
  }
  return GovernancePolicy::permissive();
}

namespace {

std::uint64_t pick(Rng& rng, std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); }

std::string random_word(Rng& rng) {
  static constexpr std::array<std::string_view, 8> kWords{"a", "go", "sum", "key", "x y", "q\"t", "", "n\n1"};
  return std::string(kWords[pick(rng, kWords.size())]);
}

}  // namespace

Value random_value(Rng& rng, int depth) {
  switch (pick(rng, depth > 0 ? 6 : 4)) {
    case 0: return static_cast<std::int64_t>(pick(rng, 41)) - 20;
    case 1: return random_word(rng);
    case 2: return pick(rng, 2) == 0;
    case 3: return Unit{};
    case 4: {
      Value a = random_value(rng, depth - 1);
      return Value::pair(std::move(a), random_value(rng, depth - 1));
    }
    default: {
      Response r;
      r.kind = static_cast<ResponseKind>(pick(rng, kResponseKindCount));
      r.status = static_cast<std::int64_t>(pick(rng, 600));
      r.content = random_word(rng);
      return r;
    }
  }
}

ExprPtr random_expr(Rng& rng, std::string_view vars, int depth) {
  if (depth <= 0 || pick(rng, 3) == 0) {
    if (!vars.empty() && pick(rng, 2) == 0) return var(vars[pick(rng, vars.size())]);
    return lit(random_value(rng, 1));
  }
  const Op op = kOps[pick(rng, kOps.size())].op;
  std::vector<ExprPtr> args;
  for (std::size_t i = 0; i < op_arity(op); ++i) args.push_back(random_expr(rng, vars, depth - 1));
  return call(op, std::move(args));
}

RegisterProgram random_register_program(Rng& rng, std::size_t length, std::size_t registers) {
  RegisterProgram p;
  p.registers = registers;
  for (std::size_t i = 0; i < length; ++i) {
    switch (pick(rng, 5)) {
      case 0: p.instructions.push_back(RegisterInstr::halt()); break;
      case 1:
      case 2: p.instructions.push_back(RegisterInstr::inc(pick(rng, registers))); break;
      default: {
        const auto reg = pick(rng, registers);
        p.instructions.push_back(RegisterInstr::dec_jz(reg, pick(rng, length + 1)));
      }
    }
  }
  return p;
}

NodePtr random_node(Rng& rng, const GeneratorOptions& options) {
  const bool leaf = options.max_depth <= 0;
  GeneratorOptions inner = options;
  inner.max_depth = options.max_depth - 1;
  for (;;) {
    switch (pick(rng, leaf ? 3 : 7)) {
      case 0: return make_node(CodeNode{random_expr(rng, "x", 2)});
      case 1: {
        if (!options.allow_primitives) continue;
        static constexpr std::array<DirectiveKind, 3> kPrims{DirectiveKind::LLMCall, DirectiveKind::MemoryOp,
                                                             DirectiveKind::CallMachine};
        PrimitiveNode p{kPrims[pick(rng, kPrims.size())], {}, random_expr(rng, "r", 2)};
        for (std::size_t i = 0; i < directive_fields(p.kind).size(); ++i) p.params.push_back(random_expr(rng, "x", 1));
        return make_node(std::move(p));
      }
      case 2: {
        if (!options.allow_register || pick(rng, 3) != 0) continue;
        const auto length = pick(rng, 5);
        const auto registers = 1 + pick(rng, 2);
        RegisterNode r{random_register_program(rng, length, registers), pick(rng, 16)};
        return make_node(std::move(r));
      }
      case 3:
      case 4: {
        SeqNode s;
        const auto n = 2 + pick(rng, 2);
        for (std::uint64_t i = 0; i < n; ++i) s.steps.push_back(random_node(rng, inner));
        return make_node(std::move(s));
      }
      case 5: return make_node(TensorNode{random_node(rng, inner), random_node(rng, inner)});
      default:
        return make_node(BranchNode{random_expr(rng, "x", 2), random_node(rng, inner), random_node(rng, inner)});
    }
  }
}

ProgramFile random_program_file(Rng& rng, const GeneratorOptions& options) {
  return ProgramFile{random_value(rng, 2), random_node(rng, options)};
}

PolicySpec random_policy(Rng& rng) {
  PolicySpec spec;
  const auto roll = pick(rng, 10);
  if (roll < 3) return spec;
  if (roll < 4) {
    spec.kind = PolicySpec::Kind::Deny;
  } else if (roll < 7) {
    spec.kind = PolicySpec::Kind::AllowKinds;
    for (auto k : all_directive_kinds()) {
      if (pick(rng, 2) == 0) spec.allowed.insert(k);
    }
  } else {
    spec.kind = PolicySpec::Kind::Trust;
    spec.level = all_trust_levels()[pick(rng, kTrustLevelCount)];
    for (auto c : all_capabilities()) {
      if (pick(rng, 2) == 0) spec.declared.push_back(c);
    }
  }
  return spec;
}

}  // namespace govtree::program

#pragma once

// Serializable programs: a tiny total expression language for pure functions,
// a program AST over the four primitives and their compositions, its JSON
// document form, compilation to morphisms, policy specs, and seeded random
// generators used by every campaign.

#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "govtree/capability.hpp"
#include "govtree/category.hpp"
#include "govtree/directives.hpp"
#include "govtree/governance.hpp"

namespace govtree::program {

/// Built-in operations. Every operation is total: arguments of the wrong kind
/// are coerced (see expression docs in the README).
enum class Op : std::uint8_t {
  Add, Sub, Mul, Mod, Neg,
  Eq, Lt, Not, And, Or, If,
  Pair, Fst, Snd,
  Concat, Str, Len,
  Status, Content, MakeResponse,
};

std::string_view op_name(Op op);
std::size_t op_arity(Op op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct Var {
    char name;  // 'x' (input) or 'r' (directive answer)
  };
  struct Call {
    Op op;
    std::vector<ExprPtr> args;
  };
  std::variant<Value, Var, Call> node;
};

ExprPtr lit(Value v);
ExprPtr var(char name);
ExprPtr call(Op op, std::vector<ExprPtr> args);

/// Parses `add(x, 1)`-style text. `allowed_vars` lists the variables that may
/// appear. Throws ParseError.
ExprPtr parse_expr(std::string_view text, std::string_view allowed_vars = "x");
std::string format_expr(const ExprPtr& e);

/// Compiles to a closure over the input (`x`) or the answer (`r`).
PureFn compile_expr(const ExprPtr& e);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct CodeNode {
  ExprPtr f;
};
/// reason / memory / call: one directive built from `params`, then `extract`.
struct PrimitiveNode {
  DirectiveKind kind;  // LLMCall, MemoryOp or CallMachine
  std::vector<ExprPtr> params;  // one per schema field, over x
  ExprPtr extract;  // over r
};
struct SeqNode {
  std::vector<NodePtr> steps;
};
struct TensorNode {
  NodePtr left;
  NodePtr right;
};
struct BranchNode {
  ExprPtr pred;
  NodePtr then_arm;
  NodePtr else_arm;
};
struct RegisterNode {
  RegisterProgram machine;
  std::uint64_t fuel = 0;
};

struct Node {
  std::variant<CodeNode, PrimitiveNode, SeqNode, TensorNode, BranchNode, RegisterNode> node;
};

struct ProgramFile {
  Value input;
  NodePtr root;
};

/// The primitive kind name ("reason", "memory", "call") for a directive kind.
std::string_view primitive_name(DirectiveKind kind);

/// JSON document form:
///   {"format": "govtree-program/1", "input": "<expr>", "program": <node>}
/// Throws ParseError on unknown node kinds or malformed fields.
ProgramFile parse_program(std::string_view json_text);
std::string format_program(const ProgramFile& program);

Morphism compile(const NodePtr& node);

/// Capability bound derived from the primitives a program uses.
CapSet static_caps(const NodePtr& node);
CapMorphism compile_cap(const NodePtr& node);

/// Textual instruction forms: `inc R`, `decjz R T`, `halt`.
RegisterInstr parse_instruction(std::string_view text);
std::string format_instruction(const RegisterInstr& ins);

struct PolicySpec {
  enum class Kind : std::uint8_t { Permissive, Deny, AllowKinds, Trust };

  Kind kind = Kind::Permissive;
  std::set<DirectiveKind> allowed;
  TrustLevel level = TrustLevel::Untrusted;
  std::vector<Capability> declared;

  /// `permissive`, `deny`, `allow:Tag,Tag`, `trust:Level:Cap,Cap`.
  /// Throws ParseError.
  static PolicySpec parse(std::string_view text);
  std::string to_string() const;
};

GovernancePolicy make_policy(const PolicySpec& spec);

using Rng = std::mt19937_64;

struct GeneratorOptions {
  int max_depth = 4;
  bool allow_register = true;
  bool allow_primitives = true;  // false: code/seq/tensor/branch only
};

Value random_value(Rng& rng, int depth = 2);
ExprPtr random_expr(Rng& rng, std::string_view vars, int depth = 2);
NodePtr random_node(Rng& rng, const GeneratorOptions& options = {});
ProgramFile random_program_file(Rng& rng, const GeneratorOptions& options = {});
PolicySpec random_policy(Rng& rng);

/// Random register program with `length` instructions over `registers` registers.
RegisterProgram random_register_program(Rng& rng, std::size_t length, std::size_t registers);

}  // namespace govtree::program

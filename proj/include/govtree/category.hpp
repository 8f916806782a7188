#pragma once

// Kleisli morphisms A -> itree DirectiveE B: the four primitive
// constructors, sequential and tensor composition, the pure structural
// isomorphisms with their coherence checks, and the register-machine
// translation used for the Turing-completeness argument.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "govtree/directives.hpp"
#include "govtree/itree.hpp"

namespace govtree {

using Morphism = std::function<Program(const Value&)>;
using PureFn = std::function<Value(const Value&)>;
/// Maps the morphism input to the directive's parameter fields.
using ParamBuilder = std::function<std::vector<std::string>(const Value&)>;

Morphism identity();
Morphism code(PureFn f);
/// One LLMCall, then extract.
Morphism reason(ParamBuilder build, PureFn extract);
/// One MemoryOp, then extract.
Morphism memory(ParamBuilder build, PureFn extract);
/// One CallMachine, then extract.
Morphism call(ParamBuilder build, PureFn extract);

/// (f ; g)(a) = f(a) >>= g
Morphism seq_compose(Morphism f, Morphism g);

/// Sequential-independent product: run f on the first component to completion,
/// then g on the second, then pair the results.
Morphism tensor(Morphism f, Morphism g);

/// Runs `then_arm` when pred holds on the input, `else_arm` otherwise.
Morphism branch(std::function<bool(const Value&)> pred, Morphism then_arm, Morphism else_arm);

// Pair projections that are total: a non-pair projects to unit.
Value pair_first(const Value& v);
Value pair_second(const Value& v);

Morphism associator();          // ((a,b),c) -> (a,(b,c))
Morphism associator_inverse();  // (a,(b,c)) -> ((a,b),c)
Morphism left_unitor();         // (unit,a) -> a
Morphism left_unitor_inverse();
Morphism right_unitor();  // (a,unit) -> a
Morphism right_unitor_inverse();
Morphism braiding();  // (a,b) -> (b,a)

/// Compares f(a) and g(a) with eutt_bounded on every sample.
BoundedVerdict check_morphisms_equal(const Morphism& f, const Morphism& g,
                                     std::span<const Value> samples, Fuel fuel,
                                     const ResponseSampler& sampler = ResponseSampler());

/// Samples must have shape (((a,b),c),d).
BoundedVerdict check_pentagon(std::span<const Value> samples, Fuel fuel);
/// Samples must have shape ((a,unit),b).
BoundedVerdict check_triangle(std::span<const Value> samples, Fuel fuel);
/// Samples must have shape ((a,b),c).
BoundedVerdict check_hexagon(std::span<const Value> samples, Fuel fuel);

/// Governed interpretation of (f ⊗ g)(a,c) against
/// interp(f a) >>= (b => interp(g c >>= (d => ret (b,d)))).
/// Inputs are pairs (a,c). Both sides are compared as governed trees and by
/// running them under the permissive policy (value and trace).
BoundedVerdict interp_tensor_distribute_check(const Morphism& f, const Morphism& g,
                                              const Handler& handler,
                                              std::span<const Value> inputs, Fuel fuel,
                                              const ResponseSampler& sampler = ResponseSampler());

struct RegisterInstr {
  enum class Op : std::uint8_t { Inc, DecJz, Halt };

  Op op = Op::Halt;
  std::size_t reg = 0;
  std::size_t target = 0;  // DecJz jump target when the register is zero

  static RegisterInstr inc(std::size_t r) { return {Op::Inc, r, 0}; }
  static RegisterInstr dec_jz(std::size_t r, std::size_t t) { return {Op::DecJz, r, t}; }
  static RegisterInstr halt() { return {Op::Halt, 0, 0}; }

  friend bool operator==(const RegisterInstr&, const RegisterInstr&) = default;
};

/// Minsky-style machine. Running off the end of the instruction list halts.
struct RegisterProgram {
  std::vector<RegisterInstr> instructions;
  std::size_t registers = 1;

  /// Register indices < registers and jump targets <= instructions.size().
  bool well_formed() const;

  friend bool operator==(const RegisterProgram&, const RegisterProgram&) = default;
};

/// Fuel-indexed unrolling starting at `pc`. Each executed instruction emits one
/// Observability directive carrying the pc and the registers after the step.
/// Halt, running off the end, or zero fuel yields ret(unit).
/// Throws std::invalid_argument on an ill-formed program.
Program translate_register_program(const RegisterProgram& p, std::uint64_t fuel,
                                   std::size_t pc = 0, std::vector<std::int64_t> registers = {});

struct RegisterRun {
  std::vector<std::int64_t> registers;
  std::uint64_t steps = 0;
  bool halted = false;
};

/// Direct loop; the reference semantics for translate_register_program.
RegisterRun run_register_program(const RegisterProgram& p, std::uint64_t fuel,
                                 std::vector<std::int64_t> registers = {});

/// "pc=<n> regs=<r0>,<r1>,..." as emitted by the translation.
std::string format_register_step(std::size_t pc, std::span<const std::int64_t> registers);
std::optional<std::vector<std::int64_t>> parse_register_step(std::string_view message);

}  // namespace govtree

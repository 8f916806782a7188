#include <gtest/gtest.h>

#include "govtree/diff.hpp"
#include "govtree/program.hpp"
#include "govtree/reference.hpp"
#include "govtree/trace.hpp"

namespace govtree {
namespace {

using namespace program;

Value eval(std::string_view text, const Value& x = Value(Unit{})) { return compile_expr(parse_expr(text))(x); }

TEST(Expr, HandEvaluatedCases) {
  EXPECT_EQ(eval("add(2, 3)"), Value(5));
  EXPECT_EQ(eval("mul(x, sub(x, 1))", Value(4)), Value(12));
  EXPECT_EQ(eval("mod(7, 3)"), Value(1));
  EXPECT_EQ(eval("mod(7, 0)"), Value(0));
  EXPECT_EQ(eval("neg(5)"), Value(-5));
  EXPECT_EQ(eval("add(9223372036854775807, 1)"), Value(std::numeric_limits<std::int64_t>::min()));
  EXPECT_EQ(eval("concat(\"a\", str(12))"), Value("a12"));
  EXPECT_EQ(eval("len(\"hello\")"), Value(5));
  EXPECT_EQ(eval("if(lt(1, 2), \"y\", \"n\")"), Value("y"));
  EXPECT_EQ(eval("and(true, not(false))"), Value(true));
  EXPECT_EQ(eval("eq(pair(1, 2), pair(1, 2))"), Value(true));
  EXPECT_EQ(eval("fst(pair(1, 2))"), Value(1));
  EXPECT_EQ(eval("snd(5)"), Value(Unit{}));
  EXPECT_EQ(eval("status(response(\"LLMResponse\", 200, \"t\"))"), Value(200));
  EXPECT_EQ(eval("content(response(\"LLMResponse\", 200, \"t\"))"), Value("t"));
  EXPECT_EQ(eval("\"\\x41\\n\""), Value("A\n"));
}

TEST(Expr, ParseErrors) {
  EXPECT_THROW(parse_expr("add(1)"), ParseError);
  EXPECT_THROW(parse_expr("frob(1)"), ParseError);
  EXPECT_THROW(parse_expr("r", "x"), ParseError);
  EXPECT_THROW(parse_expr("\"open"), ParseError);
}

TEST(Expr, FormatParsesBack) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    ExprPtr e = random_expr(rng, "x", 3);
    const std::string text = format_expr(e);
    EXPECT_EQ(format_expr(parse_expr(text)), text);
  }
}

TEST(Expr, ValueTextIsAnExpression) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    Value v = random_value(rng, 3);
    EXPECT_EQ(eval(v.to_string()), v);
  }
}

constexpr const char* kReasonProgram = R"json({
  "format": "govtree-program/1",
  "input": "5",
  "program": {"kind": "seq", "steps": [
    {"kind": "code", "f": "add(x, 1)"},
    {"kind": "reason", "params": {"model": "\"m\"", "prompt": "concat(\"q:\", str(x))"},
     "extract": "content(r)"}
  ]}
})json";

TEST(ProgramFile, CompileAndRunGoverned) {
  ProgramFile file = parse_program(kReasonProgram);
  EXPECT_EQ(file.input, Value(5));
  EXPECT_EQ(static_caps(file.root), CapSet::of({Capability::CapComputeLLMReason}));
  Program p = compile(file.root)(file.input);
  RunOutcome run = interpret_governed(govern(mock_handler(1)), GovernancePolicy::permissive(), p, Fuel{1000});
  const auto d = llm_call("m", "q:6");
  ASSERT_TRUE(run.value);
  EXPECT_EQ(*run.value, Value(mock_answer(1, d).as_response().content));
  EXPECT_EQ(format_trace(run.trace), "GOV LLMCall pass\nIO LLMCall{model=m,prompt=q:6}\n");
}

TEST(ProgramFile, FormatRoundTrips) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    ProgramFile f = random_program_file(rng);
    const std::string text = format_program(f);
    EXPECT_EQ(format_program(parse_program(text)), text);
  }
}

TEST(ProgramFile, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_program("{}"), ParseError);
  EXPECT_THROW(parse_program("not json"), ParseError);
  EXPECT_THROW(parse_program(R"({"format":"govtree-program/2","input":"1","program":{"kind":"code","f":"x"}})"),
               ParseError);
  EXPECT_THROW(parse_program(R"({"format":"govtree-program/1","input":"1","program":{"kind":"loop"}})"),
               ParseError);
  EXPECT_THROW(parse_program(R"({"format":"govtree-program/1","input":"1","program":
      {"kind":"register_machine","registers":1,"fuel":5,"instructions":["inc 3"]}})"),
               ParseError);
}

TEST(Instructions, TextForms) {
  EXPECT_EQ(parse_instruction("decjz 1 4"), RegisterInstr::dec_jz(1, 4));
  EXPECT_EQ(format_instruction(RegisterInstr::inc(2)), "inc 2");
  EXPECT_EQ(format_instruction(RegisterInstr::halt()), "halt");
  EXPECT_THROW(parse_instruction("jmp 1"), ParseError);
}

TEST(Policy, TextForms) {
  for (const char* text : {"permissive", "deny", "allow:LLMCall,MemoryOp", "trust:Reviewed:CapHTTP,CapMemory"}) {
    EXPECT_EQ(PolicySpec::parse(text).to_string(), text);
  }
  EXPECT_THROW(PolicySpec::parse("allow:Nope"), ParseError);
  EXPECT_THROW(PolicySpec::parse("trust:Godlike:"), ParseError);
  const auto deny = make_policy(PolicySpec::parse("deny"));
  EXPECT_EQ(deny.decide(GovernanceStage{"s"}, db_op("q")), Decision::Deny);
}

TEST(Reference, AgreesOnTheWorkedProgram) {
  ProgramFile file = parse_program(kReasonProgram);
  auto ref = reference::run(file, PolicySpec::parse("permissive"), 1);
  ASSERT_TRUE(ref.value);
  EXPECT_EQ(*ref.value, Value(mock_answer(1, llm_call("m", "q:6")).as_response().content));
  EXPECT_EQ(format_trace(ref.trace), "GOV LLMCall pass\nIO LLMCall{model=m,prompt=q:6}\n");
  EXPECT_EQ(diff_one(file, PolicySpec::parse("permissive"), 1, 1000), "");
  EXPECT_EQ(diff_one(file, PolicySpec::parse("allow:MemoryOp"), 1, 1000), "");
}

TEST(Reference, InjectedBugIsCaught) {
  ProgramFile file = parse_program(kReasonProgram);
  const auto stdlib = PolicySpec::parse("trust:Stdlib:CapMemory");
  EXPECT_EQ(diff_one(file, stdlib, 1, 1000), "");
  reference::ReferenceOptions buggy;
  buggy.flip_trust_comparison = true;
  EXPECT_NE(diff_one(file, stdlib, 1, 1000, buggy), "");
}

TEST(Diff, SmallCampaignAgrees) {
  DiffOptions o;
  o.trials = 300;
  o.seed = 6;
  DiffReport r = run_diff(o);
  EXPECT_EQ(r.trials, 300u);
  EXPECT_TRUE(r.disagreements.empty()) << r.render();
  EXPECT_GT(r.denied, 0u);
  EXPECT_EQ(r.render(), run_diff(o).render());
}

}  // namespace
}  // namespace govtree

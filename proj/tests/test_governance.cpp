#include <gtest/gtest.h>

#include "govtree/algebra.hpp"
#include "govtree/governance.hpp"
#include "govtree/sampling.hpp"
#include "govtree/trace.hpp"

namespace govtree {
namespace {

Program one_call(const DirectiveEvent& d) { return Program::trigger(d); }

TEST(Govern, PermittedCallChecksThenPerforms) {
  const auto d = llm_call("m", "p");
  RunOutcome run = interpret_governed(govern(mock_handler(5)), GovernancePolicy::permissive(), one_call(d),
                                      Fuel{100});
  ASSERT_TRUE(run.value);
  EXPECT_EQ(*run.value, mock_answer(5, d));
  EXPECT_EQ(format_trace(run.trace), "GOV LLMCall pass\nIO LLMCall{model=m,prompt=p}\n");
  EXPECT_FALSE(run.denied);
}

TEST(Govern, DenialStopsBeforeIO) {
  RunOutcome run = interpret_governed(govern(mock_handler(5)), GovernancePolicy::denying(),
                                      one_call(exec_op("rm")), Fuel{100});
  EXPECT_FALSE(run.value);
  EXPECT_TRUE(run.denied);
  EXPECT_EQ(format_trace(run.trace), "GOV ExecOp fail\n");
}

TEST(Govern, AllowKindsPolicyIsPerDirective) {
  Program p = bind(one_call(memory_op("get", "k", "")),
                   [](const Value&) { return Program::trigger(db_op("select")); });
  auto policy = GovernancePolicy::allow_kinds({DirectiveKind::MemoryOp});
  RunOutcome run = interpret_governed(govern(mock_handler(0)), policy, p, Fuel{100});
  EXPECT_TRUE(run.denied);
  EXPECT_EQ(format_trace(run.trace), "GOV MemoryOp pass\nIO MemoryOp{op=get,key=k,value=}\nGOV DBOp fail\n");
}

TEST(GovSafe, BareIOFailsAndGovernedIOHolds) {
  const auto d = http_request("GET", "u", "");
  auto bare = gov_safe_check(GovTree::trigger(GovernedEvent::io(d)), false, Fuel{10});
  ASSERT_TRUE(bare.is_fails());
  EXPECT_NE(bare.witness().back().find("without approval"), std::string::npos);
  EXPECT_TRUE(gov_safe_check(check_then_io(d), false, Fuel{10}).is_holds());
  EXPECT_TRUE(gov_safe_check(GovTree::trigger(GovernedEvent::io(d)), true, Fuel{10}).is_holds());
}

TEST(GovSafe, ApprovalIsConsumedByOneIO) {
  const auto d = db_op("q");
  GovTree twice = GovTree::vis(GovernedEvent::gov(GovCheck{stage_of(d), d}), [d](const Value&) {
    return GovTree::vis(GovernedEvent::io(d), [d](const Value&) { return GovTree::trigger(GovernedEvent::io(d)); });
  });
  EXPECT_TRUE(gov_safe_check(twice, false, Fuel{10}).is_fails());
}

TEST(GovSafe, SpinHoldsAndCountersAdvance) {
  EXPECT_TRUE(gov_safe_check(GovTree::spin(), false, Fuel{10}).is_holds());
  GovSafeStats stats;
  GovTree t = interpret(govern(mock_handler(1)), random_directive_program(3, 3));
  EXPECT_TRUE(gov_safe_check(t, false, Fuel{4000}, ResponseSampler(1, 2), &stats).is_holds());
  EXPECT_GT(stats.gov_nodes, 0u);
  EXPECT_EQ(stats.io_nodes, stats.io_resets);
}

TEST(GovSafe, FuelBoundGivesUnknown) {
  GovTree t = interpret(govern(mock_handler(1)), random_directive_program(3, 6));
  EXPECT_TRUE(gov_safe_check(t, false, Fuel{1}).is_unknown());
}

TEST(Govern, ErasingChecksRecoversTheUngovernedTree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Program p = random_directive_program(seed, 4);
    Handler h = mock_handler(seed);
    auto v = eutt_bounded(erase_gov(interpret(govern(h), p)), interpret_ungoverned(h, p), Fuel{4000},
                          GovernedSampler{ResponseSampler(seed, 2)});
    EXPECT_TRUE(v.is_holds()) << v.to_string();
  }
}

TEST(Algebra, OperatorsAreDiscriminated) {
  CampaignConfig c;
  c.trials = 60;
  c.seed = 2;
  auto summary = [&](const GovernanceOperator& op) {
    return std::array<std::size_t, 3>{check_G1(op, c).fails, check_G2(op, c).fails, check_G3(op, c).fails};
  };
  auto mashin = summary(mashin_operator());
  EXPECT_EQ(mashin, (std::array<std::size_t, 3>{0, 0, 0}));
  auto no_check = summary(no_check_operator());
  EXPECT_GT(no_check[0], 0u);
  auto mangling = summary(result_mangling_operator());
  EXPECT_EQ(mangling[0], 0u);
  EXPECT_GT(mangling[1], 0u);
  auto fingerprint = summary(fingerprinting_operator());
  EXPECT_EQ(fingerprint[0], 0u);
  EXPECT_GT(fingerprint[2], 0u);
}

TEST(Algebra, MashinConformanceReportPasses) {
  CampaignConfig c;
  c.trials = 40;
  ConformanceReport r = run_conformance(mashin_operator(), c);
  EXPECT_TRUE(r.all_pass()) << r.render();
  EXPECT_EQ(r.render().rfind("operator: mashin\n", 0), 0u);
  EXPECT_EQ(r.render(), run_conformance(mashin_operator(), c).render());
}

TEST(Algebra, OperatorLookup) {
  EXPECT_TRUE(operator_by_name("fingerprinting"));
  EXPECT_FALSE(operator_by_name("nope"));
  EXPECT_EQ(all_operators().size(), 5u);
}

}  // namespace
}  // namespace govtree

#include <gtest/gtest.h>

#include "govtree/boundary.hpp"
#include "govtree/sampling.hpp"

namespace govtree {
namespace {

TEST(Boundary, CoterminousSmallCampaignPasses) {
  CampaignConfig c;
  c.trials = 60;
  c.seed = 4;
  CoterminousReport r = run_coterminous(c);
  EXPECT_TRUE(r.passed()) << r.render();
  EXPECT_EQ(r.nontrivial.holds, 12u);
  EXPECT_EQ(r.render(), run_coterminous(c).render());
}

TEST(Boundary, RegisterAgreementIgnoresHandlerLogging) {
  // The filtering handler logs its own Observability messages; they must not
  // be mistaken for machine steps.
  RegisterProgram m;
  m.registers = 2;
  m.instructions = {RegisterInstr::inc(0), RegisterInstr::inc(0), RegisterInstr::inc(1)};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_TRUE(register_agreement(m, 50, filtering_handler(seed), Fuel{4000}).is_holds());
    EXPECT_TRUE(register_agreement(m, 2, delegating_handler(seed), Fuel{4000}).is_holds());
  }
}

TEST(Boundary, ShortExhaustiveSweepAgrees) {
  RegisterSweep s = exhaustive_register_sweep(2, 2, 20);
  // Lengths 0..2 over alphabets of 1 + 2 * (1 + (len + 1)) instructions.
  EXPECT_EQ(s.programs, 1u + 7u + 81u);
  EXPECT_EQ(s.agreed, s.programs);
  EXPECT_TRUE(s.disagreements.empty());
  EXPECT_GT(s.halted, 0u);
  EXPECT_LT(s.halted, s.programs);
}

}  // namespace
}  // namespace govtree

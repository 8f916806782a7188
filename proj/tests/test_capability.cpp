#include <gtest/gtest.h>

#include "govtree/capability.hpp"

namespace govtree {
namespace {

using C = Capability;

ParamBuilder prompt_of() {
  return [](const Value& x) { return std::vector<std::string>{"m", x.to_string()}; };
}
ParamBuilder memory_get() {
  return [](const Value& x) { return std::vector<std::string>{"get", x.to_string(), ""}; };
}
PureFn keep() {
  return [](const Value& r) { return r; };
}

TEST(CapSet, LatticeOverAll512Subsets) {
  for (std::uint16_t a = 0; a <= CapSet::kFullMask; ++a) {
    const CapSet x = CapSet::from_mask(a);
    EXPECT_TRUE(cap_subset(CapSet::empty(), x));
    EXPECT_TRUE(cap_subset(x, CapSet::full()));
    EXPECT_EQ(cap_union(x, x), x);
    EXPECT_EQ(CapSet::parse(x.to_string()), x);
  }
  EXPECT_THROW(CapSet::from_mask(1u << 9), std::out_of_range);
  EXPECT_EQ(CapSet::full().size(), 9u);
}

TEST(CapSet, TextForm) {
  EXPECT_EQ(CapSet::empty().to_string(), "");
  const CapSet s = CapSet::of({C::CapHTTP, C::CapComputeLLMReason});
  EXPECT_EQ(CapSet::parse(s.to_string()), s);
  EXPECT_THROW(CapSet::parse("CapTeleport"), ParseError);
}

TEST(Trust, TotalOrderOnSixLevels) {
  ASSERT_EQ(all_trust_levels().size(), 6u);
  for (auto a : all_trust_levels()) {
    for (auto b : all_trust_levels()) {
      EXPECT_TRUE(trust_le(a, b) || trust_le(b, a));
      if (trust_le(a, b) && trust_le(b, a)) EXPECT_EQ(a, b);
      EXPECT_EQ(trust_max(a, b), trust_le(a, b) ? b : a);
      EXPECT_EQ(trust_min(a, b), trust_le(a, b) ? a : b);
    }
  }
  EXPECT_EQ(trust_from_name("Reviewed"), TrustLevel::Reviewed);
}

TEST(Trust, AllowedCapabilities) {
  const std::vector<Capability> declared = {C::CapComputeLLMReason, C::CapHTTP};
  EXPECT_EQ(allowed_cap_set(TrustLevel::Untrusted, declared), CapSet::of({C::CapComputeLLMReason}));
  EXPECT_EQ(allowed_cap_set(TrustLevel::Tested, declared), CapSet::of({C::CapComputeLLMReason, C::CapHTTP}));
  EXPECT_EQ(allowed_cap_set(TrustLevel::Reviewed, declared), CapSet::of({C::CapComputeLLMReason, C::CapHTTP}));
  EXPECT_EQ(allowed_cap_set(TrustLevel::Stdlib, {}), CapSet::full());
  EXPECT_EQ(allowed_cap_set(TrustLevel::System, {}), CapSet::full());

  auto policy = trust_policy(TrustLevel::Untrusted, declared);
  const GovernanceStage stage{"x"};
  EXPECT_EQ(policy.decide(stage, llm_call("m", "p")), Decision::Allow);
  EXPECT_EQ(policy.decide(stage, http_request("GET", "u", "")), Decision::Deny);
  EXPECT_EQ(policy.decide(stage, observability("o")), Decision::Allow);
}

TEST(WithinCaps, PrimitiveProfiles) {
  const std::vector<Value> inputs = {Value(1), Value("q")};
  struct Case {
    CapMorphism cm;
    CapSet expected;
  };
  const Case cases[] = {
      {cap_code([](const Value& x) { return x; }), CapSet::empty()},
      {cap_reason(prompt_of(), keep()), CapSet::of({C::CapComputeLLMReason})},
      {cap_memory(memory_get(), keep()), CapSet::of({C::CapMemory})},
      {cap_call([](const Value& x) { return std::vector<std::string>{"svc", x.to_string()}; }, keep()),
       CapSet::of({C::CapMachineCall})},
  };
  for (const auto& c : cases) {
    EXPECT_EQ(c.cm.caps, c.expected);
    for (const auto& a : inputs) EXPECT_TRUE(within_caps_check(c.cm.caps, c.cm.morph(a), Fuel{100}).is_holds());
    EXPECT_TRUE(principality_check(c.cm, inputs, Fuel{100}).is_holds());
  }
  auto r = cap_reason(prompt_of(), keep());
  EXPECT_TRUE(within_caps_check(CapSet::of({C::CapMemory}), r.morph(Value(1)), Fuel{100}).is_fails());
}

TEST(WithinCaps, CompositesTakeTheUnion) {
  auto r = cap_reason(prompt_of(), keep());
  auto m = cap_memory(memory_get(), keep());
  const CapSet both = CapSet::of({C::CapComputeLLMReason, C::CapMemory});
  EXPECT_EQ(cap_seq_compose(r, m).caps, both);
  EXPECT_EQ(cap_tensor(r, m).caps, both);
  EXPECT_EQ(cap_branch([](const Value&) { return true; }, r, m).caps, both);
  EXPECT_TRUE(check_bind_within_caps(r.morph(Value(1)), m.morph, r.caps, m.caps, Fuel{100}).is_holds());
}

TEST(WithinCaps, OverApproximationIsNotPrincipal) {
  auto r = with_caps(cap_reason(prompt_of(), keep()), CapSet::of({C::CapComputeLLMReason, C::CapDB}));
  const std::vector<Value> inputs = {Value(1)};
  EXPECT_TRUE(principality_check(r, inputs, Fuel{100}).is_fails());
}

TEST(WithinCaps, CheckedWrapperRejectsViolations) {
  const std::vector<Value> inputs = {Value(1)};
  Morphism sneaky = [](const Value&) { return Program::trigger(exec_op("ls")); };
  EXPECT_FALSE(check_cap_morphism(sneaky, CapSet::empty(), inputs, Fuel{100}));
  auto ok = check_cap_morphism(sneaky, CapSet::of({C::CapExec}), inputs, Fuel{100});
  ASSERT_TRUE(ok);
  EXPECT_TRUE(std::holds_alternative<Checked>(ok->evidence));
}

TEST(NoAmbientEffects, EmptyCapsMeansBookkeepingOnly) {
  Program quiet = bind(Program::trigger(observability("hi")),
                       [](const Value&) { return Program::trigger(record_step("s", "d")); });
  EXPECT_TRUE(no_ambient_effects_check(quiet, Fuel{100}).is_holds());
  // Outside the empty set the premise is unmet, so nothing is claimed.
  auto loud = no_ambient_effects_check(Program::trigger(broadcast("c", "m")), Fuel{100});
  ASSERT_TRUE(loud.is_unknown());
  EXPECT_EQ(loud.reason(), UnknownReason::PreconditionUnmet);
}

TEST(DualGuarantee, CapsAndGovernanceTogether) {
  auto r = cap_reason(prompt_of(), keep());
  const std::vector<Value> inputs = {Value(1), Value(2)};
  EXPECT_TRUE(
      dual_guarantee_check(r, mock_handler(1), GovernancePolicy::permissive(), inputs, Fuel{1000}).is_holds());
}

}  // namespace
}  // namespace govtree

#include <gtest/gtest.h>

#include "govtree/directives.hpp"
#include "govtree/itree.hpp"

namespace govtree {
namespace {

using T = Program;

Value answer_of(const T& t, Fuel fuel = Fuel{100}) {
  auto obs = observe(t, fuel);
  EXPECT_EQ(obs.kind, Observation<DirectiveEvent>::Kind::Ret);
  return obs.value.value_or(Value());
}

TEST(ITree, RetIsObservedWithoutFuel) {
  auto obs = observe(T::ret(Value(7)), Fuel{0});
  EXPECT_EQ(obs.kind, Observation<DirectiveEvent>::Kind::Ret);
  EXPECT_EQ(*obs.value, Value(7));
}

TEST(ITree, TauCostsOneFuelEach) {
  T t = T::tau_of(T::tau_of(T::ret(Value(1))));
  EXPECT_EQ(observe(t, Fuel{1}).kind, Observation<DirectiveEvent>::Kind::FuelExhausted);
  auto obs = observe(t, Fuel{2});
  EXPECT_EQ(obs.kind, Observation<DirectiveEvent>::Kind::Ret);
  EXPECT_EQ(obs.remaining.steps, 0u);
}

TEST(ITree, SpinIsASingletonAndBindPreservesIt) {
  EXPECT_TRUE(T::spin().is_spin());
  EXPECT_TRUE(bind(T::spin(), [](const Value& x) { return T::ret(x); }).is_spin());
  EXPECT_EQ(observe(T::spin(), Fuel{1000}).kind, Observation<DirectiveEvent>::Kind::FuelExhausted);
}

TEST(ITree, BindLeftIdentity) {
  auto k = [](const Value& x) { return T::ret(Value(x.as_int() + 1)); };
  EXPECT_EQ(answer_of(bind(T::ret(Value(4)), k)), Value(5));
}

TEST(ITree, BindThreadsAnswersThroughVis) {
  T t = T::vis(observability("a"), [](const Value&) { return T::ret(Value(10)); });
  T b = bind(t, [](const Value& x) { return T::ret(Value(x.as_int() * 3)); });
  auto obs = observe(b, Fuel{10});
  ASSERT_EQ(obs.kind, Observation<DirectiveEvent>::Kind::Vis);
  EXPECT_EQ(obs.vis->event, observability("a"));
  EXPECT_EQ(answer_of(obs.vis->k(Value(Unit{}))), Value(30));
}

TEST(ITree, ContinuationsAreMemoisedPerAnswer) {
  int calls = 0;
  T t = T::vis(observability("m"), [&calls](const Value& x) {
    ++calls;
    return T::ret(x);
  });
  const auto& v = std::get<T::VisNode>(t.head());
  EXPECT_EQ(answer_of(v.k(Value(1))), Value(1));
  EXPECT_EQ(answer_of(v.k(Value(1))), Value(1));
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(answer_of(v.k(Value(2))), Value(2));
  EXPECT_EQ(calls, 2);
}

TEST(ITree, LazyHeadIsComputedOnce) {
  int calls = 0;
  T t = T::lazy([&calls]() -> T::Node {
    ++calls;
    return T::RetNode{Value(3)};
  });
  t.head();
  t.head();
  EXPECT_EQ(calls, 1);
}

TEST(ITree, InterpReplacesEventsWithHandlerTrees) {
  T t = T::vis(observability("x"), [](const Value& a) { return T::ret(a); });
  auto handler = [](const DirectiveEvent&) { return T::ret(Value(42)); };
  T out = interp<DirectiveEvent>(handler, t);
  // handler(e) >>= Tau(k x): one Tau before the value.
  EXPECT_EQ(observe(out, Fuel{0}).kind, Observation<DirectiveEvent>::Kind::FuelExhausted);
  EXPECT_EQ(answer_of(out, Fuel{1}), Value(42));
}

TEST(EuttBounded, IgnoresFiniteTauPrefixes) {
  T a = T::tau_of(T::tau_of(T::ret(Value(1))));
  EXPECT_TRUE(eutt_bounded(a, T::ret(Value(1)), Fuel{10}, ResponseSampler()).is_holds());
}

TEST(EuttBounded, DistinguishesValuesAndEvents) {
  auto v = eutt_bounded(T::ret(Value(1)), T::ret(Value(2)), Fuel{10}, ResponseSampler());
  ASSERT_TRUE(v.is_fails());
  EXPECT_EQ(v.witness().back(), "ret 1 vs ret 2");
  T x = T::trigger(observability("a"));
  T y = T::trigger(observability("b"));
  EXPECT_TRUE(eutt_bounded(x, y, Fuel{10}, ResponseSampler()).is_fails());
}

TEST(EuttBounded, SpinMatchesSpinButNotAValue) {
  EXPECT_TRUE(eutt_bounded(T::spin(), T::spin(), Fuel{10}, ResponseSampler()).is_holds());
  EXPECT_TRUE(eutt_bounded(T::spin(), T::ret(Value(1)), Fuel{10}, ResponseSampler()).is_fails());
}

TEST(EuttBounded, RunsOutOfFuelAsUnknown) {
  std::function<T(int)> count = [&count](int n) { return T::tau([n, &count] { return count(n + 1); }); };
  auto v = eutt_bounded(count(0), T::ret(Value(1)), Fuel{20}, ResponseSampler());
  ASSERT_TRUE(v.is_unknown());
  EXPECT_EQ(v.reason(), UnknownReason::FuelExhausted);
}

TEST(BoundedVerdict, ConjoinPrefersFailsThenUnknown) {
  auto f = BoundedVerdict::fails({"w"});
  auto u = BoundedVerdict::unknown(UnknownReason::FuelExhausted);
  auto h = BoundedVerdict::holds();
  EXPECT_TRUE(conjoin(h, f).is_fails());
  EXPECT_TRUE(conjoin(u, f).is_fails());
  EXPECT_TRUE(conjoin(h, u).is_unknown());
  EXPECT_TRUE(conjoin(h, h).is_holds());
}

}  // namespace
}  // namespace govtree

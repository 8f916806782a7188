#pragma once

// Interaction trees: Ret / Tau / Vis nodes with deferred children.
//
// A tree is an immutable handle to a node producer. Children of Tau and Vis
// are only built when forced, so infinite trees (spin, unbounded loops) are
// ordinary values. Exploration is bounded by explicit Fuel; a checker that
// runs out of fuel reports Unknown and never a positive verdict.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "govtree/value.hpp"

namespace govtree {

/// Step budget. One unit is spent per Tau or Vis unfolding; Ret is free.
struct Fuel {
  std::uint64_t steps = 0;

  bool exhausted() const { return steps == 0; }
  Fuel spend() const { return Fuel{steps - 1}; }
};

enum class UnknownReason : std::uint8_t {
  FuelExhausted,
  SampleLimited,
  // Exploration reached the canonical silent loop (spin). The subtree is known
  // to diverge, so nothing below it can fail, but it never terminates either.
  Divergent,
  PreconditionUnmet,
};

std::string_view unknown_reason_name(UnknownReason reason);

/// Three-valued result of checking a coinductive property on a bounded prefix.
class BoundedVerdict {
 public:
  enum class Kind : std::uint8_t { Holds, Fails, Unknown };

  static BoundedVerdict holds() { return BoundedVerdict(Kind::Holds); }
  static BoundedVerdict fails(std::vector<std::string> witness) {
    BoundedVerdict v(Kind::Fails);
    v.witness_ = std::move(witness);
    return v;
  }
  static BoundedVerdict unknown(UnknownReason reason) {
    BoundedVerdict v(Kind::Unknown);
    v.reason_ = reason;
    return v;
  }

  Kind kind() const { return kind_; }
  bool is_holds() const { return kind_ == Kind::Holds; }
  bool is_fails() const { return kind_ == Kind::Fails; }
  bool is_unknown() const { return kind_ == Kind::Unknown; }

  /// Root-to-failure path; empty unless is_fails().
  const std::vector<std::string>& witness() const { return witness_; }
  UnknownReason reason() const { return reason_; }

  std::string to_string() const;

 private:
  explicit BoundedVerdict(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<std::string> witness_;
  UnknownReason reason_ = UnknownReason::FuelExhausted;
};

/// Conjunction of two verdicts: a failure dominates, then the most informative
/// Unknown, then Holds.
BoundedVerdict conjoin(BoundedVerdict a, BoundedVerdict b);

template <class E>
class ITree {
 public:
  using Continuation = std::function<ITree(const Value&)>;

  // Children are pure functions of their inputs, so each node remembers the
  // subtrees it has produced. Re-walking a tree (a check followed by a run)
  // then reuses forced nodes instead of rebuilding them.
  class Thunk {
   public:
    Thunk() = default;
    template <class F>
      requires std::is_invocable_r_v<ITree, const F&>
    Thunk(F f) : state_(std::make_shared<Holder<F>>(std::move(f))) {}

    ITree operator()() const {
      if (!state_->result) state_->result = state_->force().impl_;
      return ITree(state_->result);
    }

   private:
    struct Base {
      virtual ~Base() = default;
      virtual ITree force() = 0;
      std::shared_ptr<const typename ITree::Impl> result;
    };
    template <class F>
    struct Holder final : Base {
      explicit Holder(F fn) : f(std::move(fn)) {}
      ITree force() override {
        ITree out = (*f)();
        f.reset();  // release captures once forced
        return out;
      }
      std::optional<F> f;
    };
    std::shared_ptr<Base> state_;
  };

  class MemoK {
   public:
    MemoK() = default;
    template <class F>
      requires std::is_invocable_r_v<ITree, const F&, const Value&>
    MemoK(F f) : state_(std::make_shared<Holder<F>>(std::move(f))) {}

    ITree operator()(const Value& x) const {
      auto& st = *state_;
      for (std::size_t i = 0; i < st.used; ++i) {
        if (st.seen[i].answer == x) return ITree(st.seen[i].result);
      }
      ITree out = st.call(x);
      if (st.used < kSlots) st.seen[st.used++] = Slot{x, out.impl_};
      return out;
    }

   private:
    static constexpr std::size_t kSlots = 2;
    struct Slot {
      Value answer;
      std::shared_ptr<const typename ITree::Impl> result;
    };
    struct Base {
      virtual ~Base() = default;
      virtual ITree call(const Value& x) const = 0;
      std::array<Slot, kSlots> seen;
      std::size_t used = 0;
    };
    template <class F>
    struct Holder final : Base {
      explicit Holder(F fn) : f(std::move(fn)) {}
      ITree call(const Value& x) const override { return f(x); }
      F f;
    };
    std::shared_ptr<Base> state_;
  };

  struct RetNode {
    Value value;
  };
  struct TauNode {
    Thunk next;
  };
  struct VisNode {
    E event;
    MemoK k;
  };
  using Node = std::variant<RetNode, TauNode, VisNode>;

  static ITree ret(Value v) { return ITree(std::make_shared<Strict>(RetNode{std::move(v)})); }

  template <class F>
  static ITree tau(F next) {
    return ITree(std::make_shared<Strict>(TauNode{Thunk(std::move(next))}));
  }

  static ITree tau_of(ITree next) {
    return tau([next = std::move(next)] { return next; });
  }

  template <class K>
  static ITree vis(E event, K k) {
    return ITree(std::make_shared<Strict>(VisNode{std::move(event), MemoK(std::move(k))}));
  }

  /// Emits `event` and returns the answer unchanged.
  static ITree trigger(E event) {
    return vis(std::move(event), [](const Value& x) { return ret(x); });
  }

  /// A tree whose head is computed on first observation and then cached.
  template <class F>
  static ITree lazy(F make) {
    return ITree(std::make_shared<Lazy<F>>(std::move(make)));
  }

  /// The canonical infinite Tau stream. All spins share one node, which is
  /// what lets checkers recognise it without unrolling.
  static ITree spin() {
    static const ITree instance(std::make_shared<Spin>());
    return instance;
  }

  bool is_spin() const { return impl_ == spin().impl_; }

  /// Forces exactly one layer. The node stays valid while this tree (or a copy
  /// of it) is alive; lazy heads are computed once and cached.
  const Node& head() const { return impl_->head(); }

 private:
  struct Impl {
    virtual ~Impl() = default;
    virtual const Node& head() const = 0;
  };
  struct Strict final : Impl {
    explicit Strict(Node n) : node(std::move(n)) {}
    const Node& head() const override { return node; }
    Node node;
  };
  template <class F>
  struct Lazy final : Impl {
    explicit Lazy(F m) : make(std::move(m)) {}
    const Node& head() const override {
      if (!cache) {
        cache.emplace((*make)());
        make.reset();
      }
      return *cache;
    }
    mutable std::optional<F> make;
    mutable std::optional<Node> cache;
  };
  struct Spin final : Impl {
    const Node& head() const override {
      static const Node node = TauNode{[] { return ITree::spin(); }};
      return node;
    }
  };

  explicit ITree(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

template <class E>
ITree<E> ret(Value v) {
  return ITree<E>::ret(std::move(v));
}

namespace detail {

template <class E>
using SharedK = std::shared_ptr<const typename ITree<E>::Continuation>;

template <class E>
ITree<E> bind_shared(ITree<E> t, SharedK<E> k) {
  using T = ITree<E>;
  if (t.is_spin()) return T::spin();
  return T::lazy([t = std::move(t), k = std::move(k)]() -> typename T::Node {
    const auto& node = t.head();
    if (auto* r = std::get_if<typename T::RetNode>(&node)) return (*k)(r->value).head();
    if (auto* tau = std::get_if<typename T::TauNode>(&node)) {
      return typename T::TauNode{[next = tau->next, k] { return bind_shared(next(), k); }};
    }
    auto& v = std::get<typename T::VisNode>(node);
    return typename T::VisNode{v.event, [c = v.k, k](const Value& x) { return bind_shared(c(x), k); }};
  });
}

}  // namespace detail

/// Monadic sequencing. Divergence of `t` is preserved: bind(spin, k) is spin.
template <class E>
ITree<E> bind(ITree<E> t, typename ITree<E>::Continuation k) {
  return detail::bind_shared(std::move(t),
                             std::make_shared<const typename ITree<E>::Continuation>(std::move(k)));
}

/// Relabels every event of `t` with `f`, keeping answers unchanged.
template <class F, class E, class Fn>
ITree<F> translate(ITree<E> t, Fn f) {
  using S = ITree<E>;
  using T = ITree<F>;
  if (t.is_spin()) return T::spin();
  return T::lazy([t = std::move(t), f]() -> typename T::Node {
    const auto& node = t.head();
    if (auto* r = std::get_if<typename S::RetNode>(&node)) return typename T::RetNode{r->value};
    if (auto* tau = std::get_if<typename S::TauNode>(&node)) {
      return typename T::TauNode{[next = tau->next, f] { return translate<F>(next(), f); }};
    }
    auto& v = std::get<typename S::VisNode>(node);
    return typename T::VisNode{f(v.event), [c = v.k, f](const Value& x) {
                                 return translate<F>(c(x), f);
                               }};
  });
}

namespace detail {

template <class F, class E, class Handler>
ITree<F> interp_shared(std::shared_ptr<const Handler> handler, ITree<E> t) {
  using S = ITree<E>;
  using T = ITree<F>;
  if (t.is_spin()) return T::spin();
  return T::lazy([handler = std::move(handler), t = std::move(t)]() -> typename T::Node {
    const auto& node = t.head();
    if (auto* r = std::get_if<typename S::RetNode>(&node)) return typename T::RetNode{r->value};
    if (auto* tau = std::get_if<typename S::TauNode>(&node)) {
      return typename T::TauNode{
          [handler, next = tau->next] { return interp_shared<F>(handler, next()); }};
    }
    auto& v = std::get<typename S::VisNode>(node);
    T handled = (*handler)(v.event);
    return bind(std::move(handled), [handler, c = v.k](const Value& x) {
             return T::tau([handler, c, x] { return interp_shared<F>(handler, c(x)); });
           })
        .head();
  });
}

}  // namespace detail

/// Handler interpretation: each Vis(e, k) becomes handler(e) >>= (x => Tau(interp(k x))).
template <class F, class E, class Handler>
ITree<F> interp(Handler handler, ITree<E> t) {
  return detail::interp_shared<F>(std::make_shared<const Handler>(std::move(handler)), std::move(t));
}

/// Result of observing a tree under a fuel budget.
template <class E>
struct Observation {
  enum class Kind : std::uint8_t { Ret, Vis, FuelExhausted };

  Kind kind = Kind::FuelExhausted;
  std::optional<Value> value;  // set for Ret
  std::optional<typename ITree<E>::VisNode> vis;  // set for Vis
  Fuel remaining;
};

/// Skips Tau layers (one fuel each) and reports the first Ret or Vis head.
/// A Vis head also costs one unit. Ret is reported even with zero fuel.
template <class E>
Observation<E> observe(const ITree<E>& t, Fuel fuel) {
  using T = ITree<E>;
  Observation<E> out;
  T cur = t;
  for (;;) {
    if (cur.is_spin()) {
      out.kind = Observation<E>::Kind::FuelExhausted;
      out.remaining = Fuel{0};
      return out;
    }
    const auto& node = cur.head();
    if (auto* r = std::get_if<typename T::RetNode>(&node)) {
      out.kind = Observation<E>::Kind::Ret;
      out.value = r->value;
      out.remaining = fuel;
      return out;
    }
    if (fuel.exhausted()) {
      out.kind = Observation<E>::Kind::FuelExhausted;
      out.remaining = fuel;
      return out;
    }
    fuel = fuel.spend();
    if (auto* tau = std::get_if<typename T::TauNode>(&node)) {
      cur = tau->next();
      continue;
    }
    out.kind = Observation<E>::Kind::Vis;
    out.vis = std::move(std::get<typename T::VisNode>(node));
    out.remaining = fuel;
    return out;
  }
}

namespace detail {

// Path of the current exploration. Steps are kept unrendered and only turned
// into text when a failure is reported.
template <class E>
class PathRecorder {
 public:
  void push(const char* text) { steps_.push_back(Step{text, std::monostate{}}); }
  void push_event(const char* prefix, const E& e) { steps_.push_back(Step{prefix, e}); }
  void push_answer(const Value& x) { steps_.push_back(Step{"answer ", x}); }
  void pop() { steps_.pop_back(); }

  std::vector<std::string> snapshot(std::string last) const {
    std::vector<std::string> out;
    out.reserve(steps_.size() + 1);
    for (const auto& step : steps_) {
      std::string text = step.prefix;
      if (auto* e = std::get_if<E>(&step.payload)) text += describe(*e);
      if (auto* v = std::get_if<Value>(&step.payload)) text += v->to_string();
      out.push_back(std::move(text));
    }
    out.push_back(std::move(last));
    return out;
  }

 private:
  struct Step {
    const char* prefix;
    std::variant<std::monostate, E, Value> payload;
  };
  std::vector<Step> steps_;
};

template <class E, class Sampler>
BoundedVerdict eutt_go(ITree<E> a, ITree<E> b, Fuel fuel, const Sampler& sampler,
                       PathRecorder<E>& path) {
  using T = ITree<E>;
  // Strip silent steps on both sides; each strip costs fuel.
  auto settle = [&fuel](T& t, typename T::Node& node) -> bool {
    for (;;) {
      if (t.is_spin()) return false;
      node = t.head();
      auto* tau = std::get_if<typename T::TauNode>(&node);
      if (!tau) return true;
      if (fuel.exhausted()) return false;
      fuel = fuel.spend();
      t = tau->next();
    }
  };
  typename T::Node na = typename T::RetNode{};
  typename T::Node nb = typename T::RetNode{};
  const bool settled_a = settle(a, na);
  const bool settled_b = settle(b, nb);
  if (!settled_a || !settled_b) {
    // spin is the unique silent divergence, so it is equivalent to itself.
    if (a.is_spin() && b.is_spin()) return BoundedVerdict::holds();
    // A known-divergent side can never match a side that has already produced a
    // visible head or a value.
    if (a.is_spin() && settled_b) return BoundedVerdict::fails(path.snapshot("left diverges"));
    if (b.is_spin() && settled_a) return BoundedVerdict::fails(path.snapshot("right diverges"));
    return BoundedVerdict::unknown(UnknownReason::FuelExhausted);
  }
  auto* ra = std::get_if<typename T::RetNode>(&na);
  auto* rb = std::get_if<typename T::RetNode>(&nb);
  if (ra && rb) {
    if (ra->value == rb->value) return BoundedVerdict::holds();
    return BoundedVerdict::fails(
        path.snapshot("ret " + ra->value.to_string() + " vs ret " + rb->value.to_string()));
  }
  if (ra || rb) return BoundedVerdict::fails(path.snapshot("ret vs vis"));
  auto& va = std::get<typename T::VisNode>(na);
  auto& vb = std::get<typename T::VisNode>(nb);
  if (!(va.event == vb.event)) {
    return BoundedVerdict::fails(
        path.snapshot("event " + describe(va.event) + " vs " + describe(vb.event)));
  }
  if (fuel.exhausted()) return BoundedVerdict::unknown(UnknownReason::FuelExhausted);
  fuel = fuel.spend();
  BoundedVerdict acc = BoundedVerdict::holds();
  path.push_event("vis ", va.event);
  for (const Value& x : sampler(va.event)) {
    path.push_answer(x);
    acc = conjoin(std::move(acc), eutt_go(va.k(x), vb.k(x), fuel, sampler, path));
    path.pop();
    if (acc.is_fails()) break;
  }
  path.pop();
  return acc;
}

}  // namespace detail

/// Bounded equivalence up to taus. `sampler(event)` supplies the finite set of
/// answers on which both continuations are compared.
template <class E, class Sampler>
BoundedVerdict eutt_bounded(const ITree<E>& a, const ITree<E>& b, Fuel fuel,
                            const Sampler& sampler) {
  detail::PathRecorder<E> path;
  return detail::eutt_go(a, b, fuel, sampler, path);
}

}  // namespace govtree

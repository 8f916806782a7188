#include "govtree/sampling.hpp"

#include <array>

namespace govtree {

namespace {

constexpr std::array<DirectiveKind, 12> kEffectful{
    DirectiveKind::LLMCall,   DirectiveKind::HTTPRequest, DirectiveKind::FileOp,
    DirectiveKind::CallMachine, DirectiveKind::MemoryOp,  DirectiveKind::DBOp,
    DirectiveKind::ExecOp,    DirectiveKind::Broadcast,   DirectiveKind::EmitEvent,
    DirectiveKind::GraphQLRequest, DirectiveKind::WebSocketOp, DirectiveKind::MCPCall,
};

constexpr std::array<std::string_view, 10> kWords{"get", "put", "sum", "/v1/a", "k1", "secret", "", "x y",
                                                  "{a=b}", "%20"};

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

Program program_from(std::uint64_t seed, int depth, Value last) {
  std::mt19937_64 rng(seed);
  const auto roll = below(rng, 10);
  if (depth <= 0 || roll < 2) {
    return Program::ret(Value::pair(std::move(last), static_cast<std::int64_t>(below(rng, 100))));
  }
  const std::uint64_t next_seed = rng();
  if (roll < 3) {
    return Program::tau([next_seed, depth, last] { return program_from(next_seed, depth, last); });
  }
  DirectiveEvent d = random_directive(rng);
  return Program::vis(std::move(d), [next_seed, depth](const Value& x) {
    return program_from(mix_seed(next_seed, hash_text(x.to_string())), depth - 1, x);
  });
}

}  // namespace

std::span<const DirectiveKind> effectful_kinds() { return kEffectful; }

DirectiveEvent random_directive_of(DirectiveKind kind, std::mt19937_64& rng) {
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < directive_fields(kind).size(); ++i) {
    fields.emplace_back(kWords[below(rng, kWords.size())]);
  }
  return DirectiveEvent(kind, std::move(fields));
}

DirectiveEvent random_directive(std::mt19937_64& rng) {
  const auto kinds = all_directive_kinds();
  return random_directive_of(kinds[below(rng, kinds.size())], rng);
}

Program random_directive_program(std::uint64_t seed, int depth) {
  return program_from(seed, depth, Value(Unit{}));
}

Handler filtering_handler(std::uint64_t seed) {
  return Handler{"filter:" + std::to_string(seed), [seed](const DirectiveEvent& d) {
                   Value answer = mock_answer(seed, d);
                   const bool flagged = encode_directive(d).find("secret") != std::string::npos;
                   if (flagged && answer.is_response()) {
                     Response r = answer.as_response();
                     r.content = "[filtered]";
                     answer = r;
                   }
                   return Program::vis(observability(flagged ? "filtered" : "clean"),
                                       [answer](const Value&) { return Program::ret(answer); });
                 }};
}

Handler delegating_handler(std::uint64_t seed) {
  return Handler{"delegate:" + std::to_string(seed), [seed](const DirectiveEvent& d) {
                   return Program::vis(record_step(std::string(directive_tag(d)), "delegated"),
                                       [seed, d](const Value&) {
                                         return Program::ret(mock_answer(seed, d));
                                       });
                 }};
}

Handler random_handler(std::mt19937_64& rng) {
  const std::uint64_t seed = below(rng, 1000);
  switch (below(rng, 3)) {
    case 0: return mock_handler(seed);
    case 1: return filtering_handler(seed);
    default: return delegating_handler(seed);
  }
}

Handler relabel(const Handler& h, std::string label) {
  return Handler{std::move(label), [fn = h.fn](const DirectiveEvent& d) { return fn(d); }};
}

}  // namespace govtree

#include "govtree/directives.hpp"

#include <random>

namespace govtree {

namespace {

struct KindInfo {
  std::string_view tag;
  std::vector<std::string_view> fields;
  std::optional<ResponseKind> answer;
  std::optional<Capability> capability;
};

const std::array<KindInfo, kDirectiveKindCount>& kind_table() {
  using R = ResponseKind;
  using C = Capability;
  static const std::array<KindInfo, kDirectiveKindCount> table = {{
      {"LLMCall", {"model", "prompt"}, R::LLMResponse, C::CapComputeLLMReason},
      {"HTTPRequest", {"method", "url", "body"}, R::HTTPResponse, C::CapHTTP},
      {"FileOp", {"op", "path", "content"}, R::FileResult, C::CapFile},
      {"CallMachine", {"machine", "input"}, R::CallMachineResult, C::CapMachineCall},
      {"MemoryOp", {"op", "key", "value"}, R::MemoryResult, C::CapMemory},
      {"DBOp", {"query"}, R::DBResult, C::CapDB},
      {"ExecOp", {"command"}, R::ExecResult, C::CapExec},
      {"RecordStep", {"step", "data"}, std::nullopt, std::nullopt},
      {"Broadcast", {"channel", "message"}, std::nullopt, C::CapBroadcast},
      {"EmitEvent", {"name", "payload"}, std::nullopt, C::CapBroadcast},
      {"GraphQLRequest", {"url", "query"}, R::HTTPResponse, C::CapHTTP},
      {"WebSocketOp", {"op", "url", "message"}, R::WebSocketResult, C::CapWebSocket},
      {"MCPCall", {"server", "tool", "args"}, R::CallMachineResult, C::CapMachineCall},
      {"Observability", {"message"}, std::nullopt, std::nullopt},
  }};
  return table;
}

const KindInfo& info(DirectiveKind kind) { return kind_table()[static_cast<std::size_t>(kind)]; }

constexpr std::array<DirectiveKind, kDirectiveKindCount> kAllKinds = {
    DirectiveKind::LLMCall,    DirectiveKind::HTTPRequest,    DirectiveKind::FileOp,
    DirectiveKind::CallMachine, DirectiveKind::MemoryOp,      DirectiveKind::DBOp,
    DirectiveKind::ExecOp,     DirectiveKind::RecordStep,     DirectiveKind::Broadcast,
    DirectiveKind::EmitEvent,  DirectiveKind::GraphQLRequest, DirectiveKind::WebSocketOp,
    DirectiveKind::MCPCall,    DirectiveKind::Observability,
};

constexpr std::array<Capability, kCapabilityCount> kAllCaps = {
    Capability::CapComputeLLMReason, Capability::CapMemory, Capability::CapMachineCall,
    Capability::CapHTTP,             Capability::CapFile,   Capability::CapDB,
    Capability::CapExec,             Capability::CapBroadcast, Capability::CapWebSocket,
};

constexpr std::array<std::string_view, kCapabilityCount> kCapNames = {
    "CapComputeLLMReason", "CapMemory", "CapMachineCall", "CapHTTP",     "CapFile",
    "CapDB",               "CapExec",   "CapBroadcast",   "CapWebSocket",
};

bool needs_escape(unsigned char c) {
  return c <= 0x20 || c == 0x7f || c == '%' || c == '{' || c == '}' || c == '=' || c == ',';
}

void append_escaped(std::string& out, std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (unsigned char c : s) {
    if (needs_escape(c)) {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    } else {
      out += static_cast<char>(c);
    }
  }
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c != '%') {
      if (needs_escape(static_cast<unsigned char>(c))) {
        throw ParseError("unescaped reserved byte in directive field");
      }
      out += c;
      continue;
    }
    if (i + 2 >= s.size()) {
      throw ParseError("truncated escape in directive field");
    }
    int hi = hex_digit(s[i + 1]);
    int lo = hex_digit(s[i + 2]);
    if (hi < 0 || lo < 0) throw ParseError("bad escape in directive field");
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

constexpr std::array<std::int64_t, 5> kStatuses = {200, 201, 400, 404, 500};
constexpr std::array<std::string_view, 8> kWords = {"alpha", "bravo", "delta", "echo",
                                                    "kilo",  "lima",  "sierra", "zulu"};

Value derive_answer(std::uint64_t seed, const DirectiveEvent& d) {
  auto answer = directive_answer_type(d.kind());
  if (!answer) return Value(Unit{});
  std::mt19937_64 rng(seed);
  Response r;
  r.kind = *answer;
  r.status = kStatuses[rng() % kStatuses.size()];
  r.content = std::string(kWords[rng() % kWords.size()]) + "-";
  r.content += std::to_string(rng() % 1000);
  return Value(std::move(r));
}

}  // namespace

std::span<const DirectiveKind> all_directive_kinds() { return kAllKinds; }

std::string_view directive_tag(DirectiveKind kind) { return info(kind).tag; }

std::optional<DirectiveKind> directive_kind_from_tag(std::string_view tag) {
  for (DirectiveKind k : kAllKinds) {
    if (info(k).tag == tag) return k;
  }
  return std::nullopt;
}

std::span<const std::string_view> directive_fields(DirectiveKind kind) {
  return info(kind).fields;
}

std::optional<ResponseKind> directive_answer_type(DirectiveKind kind) { return info(kind).answer; }

std::span<const Capability> all_capabilities() { return kAllCaps; }

std::string_view capability_name(Capability cap) {
  return kCapNames[static_cast<std::size_t>(cap)];
}

std::optional<Capability> capability_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kCapNames.size(); ++i) {
    if (kCapNames[i] == name) return kAllCaps[i];
  }
  return std::nullopt;
}

DirectiveEvent::DirectiveEvent(DirectiveKind kind, std::vector<std::string> fields)
    : kind_(kind) {
  const auto& meta = info(kind);
  if (fields.size() != meta.fields.size()) {
    throw std::invalid_argument(std::string(meta.tag) + " expects " + std::to_string(meta.fields.size()) +
                                " fields");
  }
  std::string out(meta.tag);
  out += '{';
  for (std::size_t i = 0; i < meta.fields.size(); ++i) {
    if (i) out += ',';
    out += meta.fields[i];
    out += '=';
    append_escaped(out, fields[i]);
  }
  out += '}';
  payload_ = std::make_shared<const Payload>(Payload{std::move(fields), std::move(out)});
}

const std::string& DirectiveEvent::field(std::string_view name) const {
  const auto& names = info(kind_).fields;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return payload_->fields[i];
  }
  throw std::out_of_range("no field '" + std::string(name) + "' on " +
                          std::string(info(kind_).tag));
}

DirectiveEvent llm_call(std::string model, std::string prompt) {
  return {DirectiveKind::LLMCall, {std::move(model), std::move(prompt)}};
}
DirectiveEvent http_request(std::string method, std::string url, std::string body) {
  return {DirectiveKind::HTTPRequest, {std::move(method), std::move(url), std::move(body)}};
}
DirectiveEvent file_op(std::string op, std::string path, std::string content) {
  return {DirectiveKind::FileOp, {std::move(op), std::move(path), std::move(content)}};
}
DirectiveEvent call_machine(std::string machine, std::string input) {
  return {DirectiveKind::CallMachine, {std::move(machine), std::move(input)}};
}
DirectiveEvent memory_op(std::string op, std::string key, std::string value) {
  return {DirectiveKind::MemoryOp, {std::move(op), std::move(key), std::move(value)}};
}
DirectiveEvent db_op(std::string query) { return {DirectiveKind::DBOp, {std::move(query)}}; }
DirectiveEvent exec_op(std::string command) {
  return {DirectiveKind::ExecOp, {std::move(command)}};
}
DirectiveEvent record_step(std::string step, std::string data) {
  return {DirectiveKind::RecordStep, {std::move(step), std::move(data)}};
}
DirectiveEvent broadcast(std::string channel, std::string message) {
  return {DirectiveKind::Broadcast, {std::move(channel), std::move(message)}};
}
DirectiveEvent emit_event(std::string name, std::string payload) {
  return {DirectiveKind::EmitEvent, {std::move(name), std::move(payload)}};
}
DirectiveEvent graphql_request(std::string url, std::string query) {
  return {DirectiveKind::GraphQLRequest, {std::move(url), std::move(query)}};
}
DirectiveEvent websocket_op(std::string op, std::string url, std::string message) {
  return {DirectiveKind::WebSocketOp, {std::move(op), std::move(url), std::move(message)}};
}
DirectiveEvent mcp_call(std::string server, std::string tool, std::string args) {
  return {DirectiveKind::MCPCall, {std::move(server), std::move(tool), std::move(args)}};
}
DirectiveEvent observability(std::string message) {
  return {DirectiveKind::Observability, {std::move(message)}};
}

std::string_view directive_tag(const DirectiveEvent& d) { return directive_tag(d.kind()); }

bool is_observability(const DirectiveEvent& d) {
  return d.kind() == DirectiveKind::Observability;
}

std::optional<Capability> capability_for_directive(DirectiveKind kind) {
  return info(kind).capability;
}

std::optional<Capability> capability_for_directive(const DirectiveEvent& d) {
  return capability_for_directive(d.kind());
}

const std::string& encode_directive(const DirectiveEvent& d) { return d.encoded(); }

DirectiveEvent decode_directive(std::string_view text) {
  auto open = text.find('{');
  if (open == std::string_view::npos || text.empty() || text.back() != '}') {
    throw ParseError("directive must have the form TAG{...}: " + std::string(text));
  }
  auto kind = directive_kind_from_tag(text.substr(0, open));
  if (!kind) throw ParseError("unknown directive tag: " + std::string(text.substr(0, open)));
  std::string_view body = text.substr(open + 1, text.size() - open - 2);
  const auto& names = info(*kind).fields;
  std::vector<std::string> values;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto comma = body.find(',', pos);
    std::string_view part =
        body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    auto eq = part.find('=');
    if (eq == std::string_view::npos || part.substr(0, eq) != names[i]) {
      throw ParseError("expected field '" + std::string(names[i]) + "' in " + std::string(text));
    }
    values.push_back(unescape(part.substr(eq + 1)));
    if (i + 1 < names.size()) {
      if (comma == std::string_view::npos) throw ParseError("missing fields in " + std::string(text));
      pos = comma + 1;
    } else if (comma != std::string_view::npos) {
      throw ParseError("too many fields in " + std::string(text));
    }
  }
  return DirectiveEvent(*kind, std::move(values));
}

std::string describe(const DirectiveEvent& d) { return encode_directive(d); }

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_text(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Value sample_answer(std::uint64_t seed, std::uint64_t index, const DirectiveEvent& d) {
  return derive_answer(mix_seed(mix_seed(seed, index), hash_text(encode_directive(d))), d);
}

ResponseSampler::ResponseSampler(std::uint64_t seed, std::size_t samples_per_event)
    : seed_(seed), samples_(samples_per_event == 0 ? 1 : samples_per_event) {}

std::vector<Value> ResponseSampler::operator()(const DirectiveEvent& d) const {
  if (!directive_answer_type(d.kind())) return {Value(Unit{})};
  std::vector<Value> out;
  out.reserve(samples_);
  for (std::size_t i = 0; i < samples_; ++i) out.push_back(sample_answer(seed_, i, d));
  return out;
}

Value mock_answer(std::uint64_t seed, const DirectiveEvent& d) {
  return derive_answer(mix_seed(seed ^ 0x6d6f636bULL, hash_text(encode_directive(d))), d);
}

Handler mock_handler(std::uint64_t seed) {
  return Handler{"mock:" + std::to_string(seed),
                 [seed](const DirectiveEvent& d) { return Program::ret(mock_answer(seed, d)); }};
}

}  // namespace govtree

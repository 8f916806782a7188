#pragma once

// The fixed directive effect signature: 14 constructors, their parameter
// schemas and answer types, the capability each one requires, a canonical
// text encoding, and deterministic mock handlers.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "govtree/itree.hpp"
#include "govtree/value.hpp"

namespace govtree {

enum class DirectiveKind : std::uint8_t {
  LLMCall,
  HTTPRequest,
  FileOp,
  CallMachine,
  MemoryOp,
  DBOp,
  ExecOp,
  RecordStep,
  Broadcast,
  EmitEvent,
  GraphQLRequest,
  WebSocketOp,
  MCPCall,
  Observability,
};

inline constexpr std::size_t kDirectiveKindCount = 14;

std::span<const DirectiveKind> all_directive_kinds();
std::string_view directive_tag(DirectiveKind kind);
std::optional<DirectiveKind> directive_kind_from_tag(std::string_view tag);

/// Parameter field names in declaration order.
std::span<const std::string_view> directive_fields(DirectiveKind kind);

/// The declared answer type; nullopt means unit.
std::optional<ResponseKind> directive_answer_type(DirectiveKind kind);

enum class Capability : std::uint8_t {
  CapComputeLLMReason,
  CapMemory,
  CapMachineCall,
  CapHTTP,
  CapFile,
  CapDB,
  CapExec,
  CapBroadcast,
  CapWebSocket,
};

inline constexpr std::size_t kCapabilityCount = 9;

std::span<const Capability> all_capabilities();
std::string_view capability_name(Capability cap);
std::optional<Capability> capability_from_name(std::string_view name);

/// Raised when text does not parse as a directive, program, trace, or ledger.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DirectiveEvent {
 public:
  /// Throws std::invalid_argument when the field count does not match the schema.
  DirectiveEvent(DirectiveKind kind, std::vector<std::string> fields);

  DirectiveKind kind() const { return kind_; }
  const std::vector<std::string>& fields() const { return payload_->fields; }
  const std::string& field(std::string_view name) const;
  /// Canonical text, computed once at construction.
  const std::string& encoded() const { return payload_->encoded; }

  friend bool operator==(const DirectiveEvent& a, const DirectiveEvent& b) {
    return a.kind_ == b.kind_ && (a.payload_ == b.payload_ || a.payload_->encoded == b.payload_->encoded);
  }

 private:
  struct Payload {
    std::vector<std::string> fields;
    std::string encoded;
  };
  DirectiveKind kind_;
  // Immutable and shared: events are copied into many tree nodes.
  std::shared_ptr<const Payload> payload_;
};

DirectiveEvent llm_call(std::string model, std::string prompt);
DirectiveEvent http_request(std::string method, std::string url, std::string body);
DirectiveEvent file_op(std::string op, std::string path, std::string content);
DirectiveEvent call_machine(std::string machine, std::string input);
DirectiveEvent memory_op(std::string op, std::string key, std::string value);
DirectiveEvent db_op(std::string query);
DirectiveEvent exec_op(std::string command);
DirectiveEvent record_step(std::string step, std::string data);
DirectiveEvent broadcast(std::string channel, std::string message);
DirectiveEvent emit_event(std::string name, std::string payload);
DirectiveEvent graphql_request(std::string url, std::string query);
DirectiveEvent websocket_op(std::string op, std::string url, std::string message);
DirectiveEvent mcp_call(std::string server, std::string tool, std::string args);
DirectiveEvent observability(std::string message);

std::string_view directive_tag(const DirectiveEvent& d);
bool is_observability(const DirectiveEvent& d);

/// Capability needed to issue `d`; nullopt for pure bookkeeping directives
/// (RecordStep, Observability).
std::optional<Capability> capability_for_directive(DirectiveKind kind);
std::optional<Capability> capability_for_directive(const DirectiveEvent& d);

/// Canonical encoding `TAG{field=value,...}`: fields in declaration order, no
/// whitespace. Bytes that are reserved (`%{}=,`), whitespace, or control
/// characters are written as `%XX`; other bytes, including UTF-8, pass through.
const std::string& encode_directive(const DirectiveEvent& d);

/// Inverse of encode_directive. Throws ParseError.
DirectiveEvent decode_directive(std::string_view text);

/// Used in witness paths.
std::string describe(const DirectiveEvent& d);

/// Deterministic finite stand-in for "for every answer": the same seed and
/// event always yield the same answer list. Unit-answer directives have
/// exactly one possible answer.
class ResponseSampler {
 public:
  explicit ResponseSampler(std::uint64_t seed = 0, std::size_t samples_per_event = 2);

  std::uint64_t seed() const { return seed_; }
  std::size_t samples_per_event() const { return samples_; }

  std::vector<Value> operator()(const DirectiveEvent& d) const;

 private:
  std::uint64_t seed_;
  std::size_t samples_;
};

/// A well-typed answer for `d` derived from (seed, index, canonical encoding).
Value sample_answer(std::uint64_t seed, std::uint64_t index, const DirectiveEvent& d);

using Program = ITree<DirectiveEvent>;

/// Base handler: services one directive, producing its answer. The tree may
/// itself issue directives (a filtering or delegating handler); the mock
/// handler never does.
struct Handler {
  std::string label;
  std::function<Program(const DirectiveEvent&)> fn;

  Program operator()(const DirectiveEvent& d) const { return fn(d); }
};

/// Pure, deterministic per (seed, event); answers carry the declared type.
Handler mock_handler(std::uint64_t seed);

/// The answer mock_handler(seed) gives for `d`.
Value mock_answer(std::uint64_t seed, const DirectiveEvent& d);

/// Stable 64-bit mixing used for every derived seed in the project.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t hash_text(std::string_view text);

}  // namespace govtree

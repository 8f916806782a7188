#pragma once

// Closed answer/return universe shared by every tree in the runtime.
//
// Trees are polymorphic in their return and answer types in the formal model;
// an executable runtime needs a fixed universe so that equality, sampling and
// printing are all definable. Values are immutable; pairs share structure.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace govtree {

struct Unit {
  friend bool operator==(Unit, Unit) = default;
};

/// Response record families produced by effectful directives.
enum class ResponseKind : std::uint8_t {
  LLMResponse,
  HTTPResponse,
  FileResult,
  CallMachineResult,
  MemoryResult,
  DBResult,
  ExecResult,
  WebSocketResult,
};

inline constexpr std::size_t kResponseKindCount = 8;

std::string_view response_kind_name(ResponseKind kind);
std::optional<ResponseKind> response_kind_from_name(std::string_view name);

struct Response {
  ResponseKind kind = ResponseKind::LLMResponse;
  std::int64_t status = 0;
  std::string content;

  friend bool operator==(const Response&, const Response&) = default;
};

class Value {
 public:
  using PairPtr = std::shared_ptr<const std::pair<Value, Value>>;

  Value() = default;
  Value(Unit) {}
  Value(bool b) : data_(b) {}
  Value(std::int64_t i) : data_(i) {}
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(Response r) : data_(std::move(r)) {}

  static Value pair(Value first, Value second);

  bool is_unit() const { return std::holds_alternative<Unit>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_pair() const { return std::holds_alternative<PairPtr>(data_); }
  bool is_response() const { return std::holds_alternative<Response>(data_); }

  // Checked accessors; throw std::bad_variant_access on a kind mismatch.
  bool as_bool() const { return std::get<bool>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const Response& as_response() const { return std::get<Response>(data_); }
  const Value& first() const { return std::get<PairPtr>(data_)->first; }
  const Value& second() const { return std::get<PairPtr>(data_)->second; }

  friend bool operator==(const Value& a, const Value& b);

  /// Renders the value in expression-language syntax, so the text parses back
  /// to an equal value: `unit`, `true`, `42`, `"s"`, `pair(a, b)`,
  /// `response("LLMResponse", 200, "text")`.
  std::string to_string() const;

 private:
  std::variant<Unit, bool, std::int64_t, std::string, PairPtr, Response> data_;
};

/// Quotes a string with C-style escapes for `"`, `\`, and control bytes.
std::string quote_string(std::string_view s);

}  // namespace govtree

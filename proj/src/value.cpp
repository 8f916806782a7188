#include "govtree/value.hpp"

#include <array>
#include <cstdio>

namespace govtree {

namespace {

constexpr std::array<std::string_view, kResponseKindCount> kResponseNames = {
    "LLMResponse", "HTTPResponse", "FileResult",      "CallMachineResult",
    "MemoryResult", "DBResult",    "ExecResult",      "WebSocketResult",
};

}  // namespace

std::string_view response_kind_name(ResponseKind kind) {
  return kResponseNames[static_cast<std::size_t>(kind)];
}

std::optional<ResponseKind> response_kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kResponseNames.size(); ++i) {
    if (kResponseNames[i] == name) return static_cast<ResponseKind>(i);
  }
  return std::nullopt;
}

Value Value::pair(Value first, Value second) {
  Value v;
  v.data_ = std::make_shared<const std::pair<Value, Value>>(std::move(first),
                                                            std::move(second));
  return v;
}

bool operator==(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index()) return false;
  if (a.is_pair()) {
    const auto& pa = std::get<Value::PairPtr>(a.data_);
    const auto& pb = std::get<Value::PairPtr>(b.data_);
    if (pa == pb) return true;
    return pa->first == pb->first && pa->second == pb->second;
  }
  return a.data_ == b.data_;
}

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x%02x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
  return out;
}

std::string Value::to_string() const {
  struct Printer {
    std::string operator()(Unit) const { return "unit"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(const std::string& s) const { return quote_string(s); }
    std::string operator()(const PairPtr& p) const {
      return "pair(" + p->first.to_string() + ", " + p->second.to_string() + ")";
    }
    std::string operator()(const Response& r) const {
      return "response(" + quote_string(response_kind_name(r.kind)) + ", " +
             std::to_string(r.status) + ", " + quote_string(r.content) + ")";
    }
  };
  return std::visit(Printer{}, data_);
}

}  // namespace govtree

#pragma once

// Post-interpretation event signature (governance checks + I/O) and the
// linear trace records a governed run leaves behind.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "govtree/directives.hpp"

namespace govtree {

struct GovernanceStage {
  std::string label;

  friend bool operator==(const GovernanceStage&, const GovernanceStage&) = default;
};

/// Stage label for the checkpoint guarding `d`: its directive tag.
GovernanceStage stage_of(const DirectiveEvent& d);

/// A governance checkpoint. The boolean answer is the verdict. `subject` is the
/// directive under review, made available to policies.
struct GovCheck {
  GovernanceStage stage;
  DirectiveEvent subject;

  friend bool operator==(const GovCheck&, const GovCheck&) = default;
};

class GovernedEvent {
 public:
  static GovernedEvent gov(GovCheck check) { return GovernedEvent(std::move(check)); }
  static GovernedEvent io(DirectiveEvent d) { return GovernedEvent(std::move(d)); }

  bool is_gov() const { return std::holds_alternative<GovCheck>(data_); }
  bool is_io() const { return !is_gov(); }
  const GovCheck& check() const { return std::get<GovCheck>(data_); }
  const DirectiveEvent& directive() const { return std::get<DirectiveEvent>(data_); }

  friend bool operator==(const GovernedEvent&, const GovernedEvent&) = default;

 private:
  explicit GovernedEvent(GovCheck c) : data_(std::move(c)) {}
  explicit GovernedEvent(DirectiveEvent d) : data_(std::move(d)) {}

  std::variant<GovCheck, DirectiveEvent> data_;
};

std::string describe(const GovernedEvent& e);

struct TraceEvent {
  enum class Kind : std::uint8_t { GovCheck, IO };

  Kind kind = Kind::GovCheck;
  // Stage label for GovCheck; canonical directive encoding (or a bare tag) for IO.
  std::string text;
  bool passed = false;

  static TraceEvent gov_check(GovernanceStage stage, bool passed) {
    return TraceEvent{Kind::GovCheck, std::move(stage.label), passed};
  }
  static TraceEvent io(std::string payload) {
    return TraceEvent{Kind::IO, std::move(payload), false};
  }
  static TraceEvent io(const DirectiveEvent& d) { return io(encode_directive(d)); }

  bool is_gov_check() const { return kind == Kind::GovCheck; }
  bool is_io() const { return kind == Kind::IO; }

  /// Directive tag of an IO payload (text before `{`).
  std::string_view io_tag() const;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

}  // namespace govtree

#pragma once

// Candidate governance operators and the sampling conformance harness for the
// axioms G1 (safety), G2 (permissive transparency), G3 (extensionality) and
// the theorems derived from them.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "govtree/governance.hpp"

namespace govtree {

struct GovernanceOperator {
  std::string name;
  std::function<GovernedHandler(const Handler&)> transform;
};

/// The bundled operator: `govern` from the governance module.
GovernanceOperator mashin_operator();
/// Performs I/O without any governance check. Breaks G1 only.
GovernanceOperator no_check_operator();
/// Governs correctly but perturbs the status of every permitted response.
/// Breaks G2 only.
GovernanceOperator result_mangling_operator();
/// Adds a check whose stage names the handler. Breaks G3 only.
GovernanceOperator fingerprinting_operator();
/// Answers every directive with unit and performs nothing.
GovernanceOperator trivial_operator();

/// mashin, no_check, result_mangling, fingerprinting, trivial.
std::vector<GovernanceOperator> all_operators();
std::optional<GovernanceOperator> operator_by_name(std::string_view name);

struct CampaignConfig {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::uint64_t fuel = 4000;
  int max_depth = 8;
  std::size_t samples_per_event = 2;
};

struct VerdictSummary {
  std::size_t trials = 0;
  std::size_t holds = 0;
  std::size_t fails = 0;
  std::size_t unknowns = 0;
  // Trial indices that failed (at most kMaxRecorded); rerun with the same seed.
  std::vector<std::size_t> failing_trials;
  std::string first_witness;

  static constexpr std::size_t kMaxRecorded = 8;

  void add(const BoundedVerdict& v, std::size_t trial);
  bool passed() const { return fails == 0; }
};

/// Seed of trial `index` in a campaign seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t index);

VerdictSummary check_G1(const GovernanceOperator& op, const CampaignConfig& config);
VerdictSummary check_G2(const GovernanceOperator& op, const CampaignConfig& config);
VerdictSummary check_G3(const GovernanceOperator& op, const CampaignConfig& config);

struct DerivedSummary {
  VerdictSummary convergence;
  VerdictSummary subsumption_pos;
  // Each trial checks that a bare I/O node is rejected: a detected violation
  // counts as Holds.
  VerdictSummary subsumption_neg;
  VerdictSummary goal_preservation;
};

DerivedSummary check_derived(const GovernanceOperator& op, const CampaignConfig& config);

struct ConformanceReport {
  std::string operator_name;
  VerdictSummary g1;
  VerdictSummary g2;
  VerdictSummary g3;
  DerivedSummary derived;

  bool axioms_pass() const { return g1.passed() && g2.passed() && g3.passed(); }
  bool all_pass() const;
  std::string render() const;
};

ConformanceReport run_conformance(const GovernanceOperator& op, const CampaignConfig& config);

}  // namespace govtree

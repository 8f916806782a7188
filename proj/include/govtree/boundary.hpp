#pragma once

// The five boundary properties as one executable campaign, plus the
// exhaustive register-machine sweep.

#include <cstdint>
#include <string>

#include "govtree/algebra.hpp"
#include "govtree/category.hpp"

namespace govtree {

struct CoterminousReport {
  VerdictSummary safety;      // every generated expressible program is governed
  VerdictSummary nontrivial;  // one trial per effectful kind; Holds = bare I/O rejected
  VerdictSummary turing;      // translated register machines: governed and faithful
  VerdictSummary subsumption_pos;
  VerdictSummary subsumption_neg;  // Holds = bare I/O rejected
  VerdictSummary cognitive;   // each primitive role realized by a governed run

  bool passed() const;
  std::string render() const;
};

CoterminousReport run_coterminous(const CampaignConfig& config);

/// Governs the translation of `machine` (mock handler, permissive policy) and
/// compares the registers reported in its trace with the direct loop; also
/// requires gov_safe_check to hold.
BoundedVerdict register_agreement(const RegisterProgram& machine, std::uint64_t steps,
                                  const Handler& handler, Fuel fuel);

struct RegisterSweep {
  std::size_t programs = 0;
  std::size_t agreed = 0;
  std::size_t halted = 0;
  std::vector<std::string> disagreements;  // first few, rendered
};

/// Every program of up to `max_length` instructions over `registers` registers,
/// run with `fuel` steps.
RegisterSweep exhaustive_register_sweep(std::size_t max_length, std::size_t registers,
                                        std::uint64_t fuel);

}  // namespace govtree

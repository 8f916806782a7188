#pragma once

// Differential campaign: random program files run through the tree pipeline
// and through the reference interpreter, compared on value, denial and trace.

#include <cstdint>
#include <string>
#include <vector>

#include "govtree/program.hpp"
#include "govtree/reference.hpp"

namespace govtree {

struct DiffOptions {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::uint64_t fuel = 100000;
  reference::ReferenceOptions reference;
};

struct Disagreement {
  std::size_t trial = 0;
  std::string what;
};

struct DiffReport {
  std::size_t trials = 0;
  std::size_t denied = 0;
  std::size_t io_events = 0;
  std::vector<Disagreement> disagreements;

  std::string render() const;
};

/// Compares one program file; returns an empty string on agreement.
std::string diff_one(const program::ProgramFile& file, const program::PolicySpec& policy,
                     std::uint64_t handler_seed, std::uint64_t fuel,
                     const reference::ReferenceOptions& options = {});

DiffReport run_diff(const DiffOptions& options);

}  // namespace govtree

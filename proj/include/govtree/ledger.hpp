#pragma once

// Hash-chained ledger over trace events. Each entry stores the canonical
// encoding of its event and SHA-256(prev_hash || data); the chain is rooted at
// 32 zero bytes.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "govtree/directives.hpp"
#include "govtree/events.hpp"

namespace govtree {

using Digest = std::array<std::uint8_t, 32>;
using Bytes = std::vector<std::uint8_t>;

inline constexpr Digest kGenesisHash{};

Digest sha256(std::span<const std::uint8_t> data);
std::string to_hex(std::span<const std::uint8_t> bytes);
std::optional<Digest> digest_from_hex(std::string_view hex);
std::string base64_encode(std::span<const std::uint8_t> bytes);
std::optional<Bytes> base64_decode(std::string_view text);

/// Injective: one type byte, then u32 big-endian length-prefixed UTF-8 fields;
/// a GovCheck additionally ends in one pass byte (0 or 1).
Bytes encode_event(const TraceEvent& ev);
/// Exact inverse of encode_event; throws ParseError on any other input.
TraceEvent decode_event(std::span<const std::uint8_t> data);

struct LedgerEntry {
  TraceEvent event;
  Bytes data;
  Digest prev_hash{};
  Digest hash{};
};

Digest entry_hash(const Digest& prev, std::span<const std::uint8_t> data);

/// data encodes event, and hash = H(prev_hash || data).
bool entry_well_formed(const LedgerEntry& entry);

struct Ledger {
  std::vector<LedgerEntry> entries;
};

Ledger trace_to_ledger(const Trace& trace);

/// The event list recorded in the ledger, in order.
Trace ledger_events(const Ledger& ledger);

struct LedgerValidity {
  bool valid = true;
  std::optional<std::size_t> first_invalid;
  std::string reason;

  explicit operator bool() const { return valid; }
};

/// Genesis root, per-entry well-formedness, and chain links.
LedgerValidity ledger_valid(const Ledger& ledger);

struct TamperReport {
  std::size_t mutations = 0;
  std::size_t detected = 0;
  std::vector<std::string> undetected;

  double detection_rate() const {
    return mutations == 0 ? 1.0 : static_cast<double>(detected) / static_cast<double>(mutations);
  }
};

/// Applies `mutations` independent event substitutions to copies of `ledger`
/// (stored hashes kept) and counts how many ledger_valid rejects. Throws
/// std::invalid_argument when `ledger` is empty or invalid.
TamperReport tamper_check(const Ledger& ledger, std::size_t mutations, std::uint64_t seed);

/// `GOVLEDGER v1 sha256` then `hex(prev_hash) hex(hash) base64(data)` per entry.
std::string format_ledger(const Ledger& ledger);

class LedgerParseError : public ParseError {
 public:
  LedgerParseError(const std::string& what, std::optional<std::size_t> entry)
      : ParseError(what), entry_(entry) {}
  std::optional<std::size_t> entry() const { return entry_; }

 private:
  std::optional<std::size_t> entry_;
};

/// Throws LedgerParseError, carrying the entry index when a line is at fault.
Ledger parse_ledger(std::string_view text);

}  // namespace govtree

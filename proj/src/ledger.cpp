#include "govtree/ledger.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <random>
#include <stdexcept>

namespace govtree {

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out += kHex[b >> 4];
    out += kHex[b & 0xf];
  }
  return out;
}

std::optional<Digest> digest_from_hex(std::string_view hex) {
  if (hex.size() != 64) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  Digest out{};
  for (std::size_t i = 0; i < 32; ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                          static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::optional<Bytes> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) return std::nullopt;
  Bytes out(3 * text.size() / 4);
  int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                          static_cast<int>(text.size()));
  if (n < 0) return std::nullopt;
  // EVP_DecodeBlock keeps the zero bytes that padding stands for.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  // Reject non-canonical encodings so that text and bytes correspond 1:1.
  if (base64_encode(out) != text) return std::nullopt;
  return out;
}

namespace {

constexpr std::uint8_t kGovByte = 0x01;
constexpr std::uint8_t kIOByte = 0x02;

void put_field(Bytes& out, std::string_view s) {
  const auto n = static_cast<std::uint32_t>(s.size());
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(n >> shift));
  out.insert(out.end(), s.begin(), s.end());
}

std::string take_field(std::span<const std::uint8_t> data, std::size_t& pos) {
  if (data.size() - pos < 4) throw ParseError("truncated event field length");
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n = (n << 8) | data[pos++];
  if (data.size() - pos < n) throw ParseError("truncated event field");
  std::string s(data.begin() + static_cast<std::ptrdiff_t>(pos),
                data.begin() + static_cast<std::ptrdiff_t>(pos + n));
  pos += n;
  return s;
}

}  // namespace

Bytes encode_event(const TraceEvent& ev) {
  Bytes out;
  if (ev.is_gov_check()) {
    out.push_back(kGovByte);
    put_field(out, ev.text);
    out.push_back(ev.passed ? 1 : 0);
  } else {
    out.push_back(kIOByte);
    put_field(out, ev.text);
  }
  return out;
}

TraceEvent decode_event(std::span<const std::uint8_t> data) {
  if (data.empty()) throw ParseError("empty event encoding");
  std::size_t pos = 1;
  TraceEvent ev;
  if (data[0] == kGovByte) {
    std::string stage = take_field(data, pos);
    if (pos + 1 != data.size() || data[pos] > 1) throw ParseError("bad pass byte");
    ev = TraceEvent::gov_check(GovernanceStage{std::move(stage)}, data[pos] == 1);
    pos += 1;
  } else if (data[0] == kIOByte) {
    ev = TraceEvent::io(take_field(data, pos));
    if (pos != data.size()) throw ParseError("trailing bytes after event");
  } else {
    throw ParseError("unknown event type byte");
  }
  return ev;
}

Digest entry_hash(const Digest& prev, std::span<const std::uint8_t> data) {
  Bytes buf(prev.begin(), prev.end());
  buf.insert(buf.end(), data.begin(), data.end());
  return sha256(buf);
}

bool entry_well_formed(const LedgerEntry& entry) {
  return entry.data == encode_event(entry.event) && entry.hash == entry_hash(entry.prev_hash, entry.data);
}

Ledger trace_to_ledger(const Trace& trace) {
  Ledger ledger;
  ledger.entries.reserve(trace.size());
  Digest prev = kGenesisHash;
  for (const auto& ev : trace) {
    LedgerEntry e;
    e.event = ev;
    e.data = encode_event(ev);
    e.prev_hash = prev;
    e.hash = entry_hash(prev, e.data);
    prev = e.hash;
    ledger.entries.push_back(std::move(e));
  }
  return ledger;
}

Trace ledger_events(const Ledger& ledger) {
  Trace out;
  out.reserve(ledger.entries.size());
  for (const auto& e : ledger.entries) out.push_back(e.event);
  return out;
}

LedgerValidity ledger_valid(const Ledger& ledger) {
  Digest expected_prev = kGenesisHash;
  for (std::size_t i = 0; i < ledger.entries.size(); ++i) {
    const auto& e = ledger.entries[i];
    auto invalid = [i](std::string reason) {
      return LedgerValidity{false, i, std::move(reason)};
    };
    if (e.prev_hash != expected_prev) {
      return invalid(i == 0 ? "first entry is not rooted at genesis" : "broken chain link");
    }
    if (e.data != encode_event(e.event)) return invalid("event does not match stored data");
    if (e.hash != entry_hash(e.prev_hash, e.data)) return invalid("hash equation fails");
    expected_prev = e.hash;
  }
  return {};
}

namespace {

TraceEvent substitute(const TraceEvent& original, std::mt19937_64& rng) {
  const auto kinds = all_directive_kinds();
  for (;;) {
    TraceEvent candidate;
    switch (rng() % 4) {
      case 0:  // flip the verdict or turn I/O into a check
        candidate = original.is_gov_check()
                        ? TraceEvent::gov_check(GovernanceStage{original.text}, !original.passed)
                        : TraceEvent::gov_check(GovernanceStage{std::string(original.io_tag())},
                                                true);
        break;
      case 1: {  // another stage label
        auto tag = directive_tag(kinds[rng() % kinds.size()]);
        candidate = TraceEvent::gov_check(GovernanceStage{std::string(tag)}, rng() % 2 == 0);
        break;
      }
      case 2: {  // a different I/O directive
        auto kind = kinds[rng() % kinds.size()];
        std::vector<std::string> fields;
        for (std::size_t i = 0; i < directive_fields(kind).size(); ++i) {
          fields.push_back("m" + std::to_string(rng() % 100));
        }
        candidate = TraceEvent::io(DirectiveEvent(kind, std::move(fields)));
        break;
      }
      default: {  // one byte of the payload changed
        candidate = original;
        if (candidate.text.empty()) candidate.text = "x";
        auto& c = candidate.text[rng() % candidate.text.size()];
        c = static_cast<char>(c ^ static_cast<char>(1 + rng() % 127));
        break;
      }
    }
    if (!(candidate == original)) return candidate;
  }
}

}  // namespace

TamperReport tamper_check(const Ledger& ledger, std::size_t mutations, std::uint64_t seed) {
  if (ledger.entries.empty()) throw std::invalid_argument("tamper_check needs a nonempty ledger");
  if (!ledger_valid(ledger)) throw std::invalid_argument("tamper_check needs a valid ledger");
  std::mt19937_64 rng(seed);
  TamperReport report;
  for (std::size_t m = 0; m < mutations; ++m) {
    Ledger copy = ledger;
    const std::size_t index = rng() % copy.entries.size();
    auto& entry = copy.entries[index];
    entry.event = substitute(entry.event, rng);
    // Half the mutations also rewrite the stored data consistently with the
    // new event; the stored hashes always stay as they were.
    if (m % 2 == 1) entry.data = encode_event(entry.event);
    ++report.mutations;
    if (!ledger_valid(copy)) {
      ++report.detected;
    } else {
      report.undetected.push_back("entry " + std::to_string(index));
    }
  }
  return report;
}

std::string format_ledger(const Ledger& ledger) {
  std::string out = "GOVLEDGER v1 sha256\n";
  for (const auto& e : ledger.entries) {
    out += to_hex(e.prev_hash);
    out += ' ';
    out += to_hex(e.hash);
    out += ' ';
    out += base64_encode(e.data);
    out += '\n';
  }
  return out;
}

Ledger parse_ledger(std::string_view text) {
  auto next_line = [&text]() -> std::optional<std::string_view> {
    if (text.empty()) return std::nullopt;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    return line;
  };
  auto header = next_line();
  if (!header || *header != "GOVLEDGER v1 sha256") {
    throw LedgerParseError("missing ledger header", std::nullopt);
  }
  Ledger ledger;
  while (auto line = next_line()) {
    const std::size_t index = ledger.entries.size();
    auto fail = [index](const std::string& why) {
      return LedgerParseError("entry " + std::to_string(index) + ": " + why, index);
    };
    auto sp1 = line->find(' ');
    auto sp2 = sp1 == std::string_view::npos ? sp1 : line->find(' ', sp1 + 1);
    if (sp2 == std::string_view::npos || line->find(' ', sp2 + 1) != std::string_view::npos) {
      throw fail("expected three space-separated fields");
    }
    auto prev = digest_from_hex(line->substr(0, sp1));
    auto hash = digest_from_hex(line->substr(sp1 + 1, sp2 - sp1 - 1));
    auto data = base64_decode(line->substr(sp2 + 1));
    if (!prev || !hash) throw fail("bad digest");
    if (!data) throw fail("bad base64 data");
    LedgerEntry e;
    try {
      e.event = decode_event(*data);
    } catch (const ParseError& err) {
      throw fail(err.what());
    }
    e.data = std::move(*data);
    e.prev_hash = *prev;
    e.hash = *hash;
    ledger.entries.push_back(std::move(e));
  }
  return ledger;
}

}  // namespace govtree

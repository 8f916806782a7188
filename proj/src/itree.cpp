#include "govtree/itree.hpp"

namespace govtree {

std::string_view unknown_reason_name(UnknownReason reason) {
  switch (reason) {
    case UnknownReason::FuelExhausted: return "fuel-exhausted";
    case UnknownReason::SampleLimited: return "sample-limited";
    case UnknownReason::Divergent: return "divergent";
    case UnknownReason::PreconditionUnmet: return "precondition-unmet";
  }
  return "?";
}

std::string BoundedVerdict::to_string() const {
  switch (kind_) {
    case Kind::Holds: return "Holds";
    case Kind::Unknown: return "Unknown(" + std::string(unknown_reason_name(reason_)) + ")";
    case Kind::Fails: {
      std::string out = "Fails(";
      for (std::size_t i = 0; i < witness_.size(); ++i) {
        if (i) out += " / ";
        out += witness_[i];
      }
      return out + ")";
    }
  }
  return "?";
}

namespace {

// Lower rank wins when two Unknowns are conjoined.
int unknown_rank(UnknownReason r) {
  switch (r) {
    case UnknownReason::PreconditionUnmet: return 0;
    case UnknownReason::FuelExhausted: return 1;
    case UnknownReason::SampleLimited: return 2;
    case UnknownReason::Divergent: return 3;
  }
  return 4;
}

}  // namespace

BoundedVerdict conjoin(BoundedVerdict a, BoundedVerdict b) {
  if (a.is_fails()) return a;
  if (b.is_fails()) return b;
  if (a.is_unknown() && b.is_unknown()) {
    return unknown_rank(a.reason()) <= unknown_rank(b.reason()) ? a : b;
  }
  if (a.is_unknown()) return a;
  if (b.is_unknown()) return b;
  return a;
}

}  // namespace govtree

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "biaxis/labels.hpp"

namespace biaxis {

// All audit rates are exact count ratios; the identity suite holds as
// rational equalities, not to floating tolerance. Converted to decimal
// only at the reporting boundary.
using Rat = boost::rational<std::int64_t>;

inline double to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Tallies of the four joint (A, B) cells over a divergence-eligible set.
struct JointCounts {
  std::int64_t n11 = 0;  // A=1, B=1
  std::int64_t n10 = 0;  // A=1, B=0
  std::int64_t n01 = 0;  // A=0, B=1
  std::int64_t n00 = 0;  // A=0, B=0

  std::int64_t n() const { return n11 + n10 + n01 + n00; }
};

// Throws MetricError if any record is not divergence-eligible.
JointCounts tally(std::span<const CodedResponse> records);

// The four bias-endorsement rates. Satisfies, exactly on counts:
//   ber_union = ber_sel + ber_elab - ber_cor
//   ber_cor <= min(sel, elab) <= max(sel, elab) <= ber_union
struct AuditQuadruple {
  Rat ber_cor{0};
  Rat ber_sel{0};
  Rat ber_elab{0};
  Rat ber_union{0};
  std::int64_t n = 0;
};

// Directional divergence summary. Identities, exact on counts:
//   ir  = oed + ued = ber_sel + ber_elab - 2 ber_cor
//   dni = oed - ued = ber_sel - ber_elab
//   ber_union - ber_sel = ued,  ber_union - ber_elab = oed
// normalized_ir = ir / ber_union (one minus the Jaccard similarity of the
// two endorsement-flag sets); absent when ber_union = 0.
struct ReliabilityPair {
  Rat oed{0};
  Rat ued{0};
  Rat ir{0};
  Rat dni{0};
  std::optional<Rat> normalized_ir;
  std::int64_t n = 0;
};

AuditQuadruple ber_family(const JointCounts& counts);
AuditQuadruple ber_family(std::span<const CodedResponse> records);

ReliabilityPair reliability(const JointCounts& counts);
ReliabilityPair reliability(std::span<const CodedResponse> records);

// Keeps only divergence-eligible records.
std::vector<CodedResponse> eligible_records(std::span<const CodedResponse> records);

// Recomputes IR with the endorsement set narrowed to {E} on the
// elaboration layer (QE folded into non-endorsement).
struct QeFoldingResult {
  Rat ir_default{0};
  Rat ir_folded{0};
  Rat delta{0};  // ir_folded - ir_default
  std::int64_t qe_count = 0;
};

QeFoldingResult qe_folding_sensitivity(std::span<const CodedResponse> records);

enum class GroupKey { Condition, Model, Category, Cell };

std::string to_string(GroupKey v);
GroupKey group_key_from_string(const std::string& s);

struct SliceMetrics {
  AuditQuadruple quadruple;
  ReliabilityPair reliability;
};

// Per-group metrics over a partition of the eligible records, plus the
// response-weighted pooled row over all of them. Ineligible records are
// dropped before grouping; groups that end up empty are omitted and
// named in `warnings`.
struct SliceResult {
  std::map<std::string, SliceMetrics> groups;
  SliceMetrics pooled;
  std::vector<std::string> warnings;
};

SliceResult slice_metrics(std::span<const CodedResponse> records, GroupKey key);

}  // namespace biaxis

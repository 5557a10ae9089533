#include "biaxis/metrics.hpp"

#include "biaxis/errors.hpp"

namespace biaxis {

JointCounts tally(std::span<const CodedResponse> records) {
  JointCounts counts;
  for (const auto& r : records) {
    if (!r.divergence_eligible()) {
      throw MetricError("record " + r.prompt_instance_id +
                        " is not divergence-eligible; filter before computing "
                        "rates");
    }
    if (r.a()) {
      r.b() ? ++counts.n11 : ++counts.n10;
    } else {
      r.b() ? ++counts.n01 : ++counts.n00;
    }
  }
  return counts;
}

AuditQuadruple ber_family(const JointCounts& counts) {
  const std::int64_t n = counts.n();
  if (n == 0) {
    throw MetricError("BER family undefined on an empty eligible base");
  }
  AuditQuadruple q;
  q.n = n;
  q.ber_cor = Rat(counts.n11, n);
  q.ber_sel = Rat(counts.n11 + counts.n10, n);
  q.ber_elab = Rat(counts.n11 + counts.n01, n);
  q.ber_union = Rat(counts.n11 + counts.n10 + counts.n01, n);
  return q;
}

AuditQuadruple ber_family(std::span<const CodedResponse> records) {
  return ber_family(tally(records));
}

ReliabilityPair reliability(const JointCounts& counts) {
  const std::int64_t n = counts.n();
  if (n == 0) {
    throw MetricError("reliability pair undefined on an empty eligible base");
  }
  ReliabilityPair p;
  p.n = n;
  p.oed = Rat(counts.n10, n);
  p.ued = Rat(counts.n01, n);
  p.ir = Rat(counts.n10 + counts.n01, n);
  p.dni = Rat(counts.n10, n) - Rat(counts.n01, n);
  const Rat union_rate = Rat(counts.n11 + counts.n10 + counts.n01, n);
  if (union_rate != Rat(0)) {
    p.normalized_ir = p.ir / union_rate;
  }
  return p;
}

ReliabilityPair reliability(std::span<const CodedResponse> records) {
  return reliability(tally(records));
}

std::vector<CodedResponse> eligible_records(
    std::span<const CodedResponse> records) {
  std::vector<CodedResponse> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.divergence_eligible()) out.push_back(r);
  }
  return out;
}

QeFoldingResult qe_folding_sensitivity(std::span<const CodedResponse> records) {
  JointCounts as_coded;
  JointCounts folded;
  std::int64_t qe = 0;
  for (const auto& r : records) {
    if (!r.divergence_eligible()) {
      throw MetricError("record " + r.prompt_instance_id +
                        " is not divergence-eligible");
    }
    if (r.elab == StanceLabel::QE) ++qe;
    const int a = r.a();
    const int b = r.b();
    const int b_folded = r.elab == StanceLabel::E ? 1 : 0;
    (a ? (b ? ++as_coded.n11 : ++as_coded.n10)
       : (b ? ++as_coded.n01 : ++as_coded.n00));
    (a ? (b_folded ? ++folded.n11 : ++folded.n10)
       : (b_folded ? ++folded.n01 : ++folded.n00));
  }
  QeFoldingResult result;
  result.ir_default = reliability(as_coded).ir;
  result.ir_folded = reliability(folded).ir;
  result.delta = result.ir_folded - result.ir_default;
  result.qe_count = qe;
  return result;
}

std::string to_string(GroupKey v) {
  switch (v) {
    case GroupKey::Condition: return "condition";
    case GroupKey::Model: return "model";
    case GroupKey::Category: return "category";
    case GroupKey::Cell: return "cell";
  }
  return "?";
}

GroupKey group_key_from_string(const std::string& s) {
  if (s == "condition") return GroupKey::Condition;
  if (s == "model") return GroupKey::Model;
  if (s == "category") return GroupKey::Category;
  if (s == "cell") return GroupKey::Cell;
  throw ParseError("unknown group key '" + s + "' (condition|model|category|cell)");
}

namespace {

std::string key_of(const CodedResponse& r, GroupKey key) {
  switch (key) {
    case GroupKey::Condition: return r.condition_id;
    case GroupKey::Model: return r.model_id;
    case GroupKey::Category: return r.category;
    case GroupKey::Cell: return r.model_id + "/" + r.condition_id;
  }
  return "";
}

}  // namespace

SliceResult slice_metrics(std::span<const CodedResponse> records, GroupKey key) {
  SliceResult result;
  std::map<std::string, JointCounts> by_group;
  JointCounts pooled;

  for (const auto& r : records) {
    const std::string group = key_of(r, key);
    auto& counts = by_group[group];  // groups appear even if all-ineligible
    if (!r.divergence_eligible()) continue;
    if (r.a()) {
      r.b() ? ++counts.n11 : ++counts.n10;
      r.b() ? ++pooled.n11 : ++pooled.n10;
    } else {
      r.b() ? ++counts.n01 : ++counts.n00;
      r.b() ? ++pooled.n01 : ++pooled.n00;
    }
  }

  for (const auto& [group, counts] : by_group) {
    if (counts.n() == 0) {
      result.warnings.push_back("group '" + group +
                                "' has no divergence-eligible responses; omitted");
      continue;
    }
    result.groups.emplace(group,
                          SliceMetrics{ber_family(counts), reliability(counts)});
  }
  if (pooled.n() == 0) {
    throw MetricError("no divergence-eligible responses in any group");
  }
  result.pooled = {ber_family(pooled), reliability(pooled)};
  return result;
}

}  // namespace biaxis

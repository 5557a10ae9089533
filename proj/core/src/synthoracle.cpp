#include "biaxis/synthoracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "biaxis/errors.hpp"
#include "biaxis/rng.hpp"

namespace biaxis::synth {

void JointProfile::validate() const {
  const std::array<double, 4> p = {p11, p10, p01, p00};
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0 || v > 1.0 || !std::isfinite(v)) {
      throw MetricError("joint profile entries must lie in [0,1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw MetricError("joint profile must sum to 1, got " + std::to_string(sum));
  }
}

std::vector<std::int64_t> cell_counts(const JointProfile& profile, std::int64_t n) {
  profile.validate();
  if (n < 1) {
    throw MetricError("population size must be >= 1");
  }
  const std::array<double, 4> p = {profile.p11, profile.p10, profile.p01,
                                   profile.p00};
  std::vector<std::int64_t> counts(4);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double exact = p[i] * static_cast<double>(n);
    counts[i] = static_cast<std::int64_t>(std::floor(exact + 1e-9));
    assigned += counts[i];
    remainders.emplace_back(exact - static_cast<double>(counts[i]), i);
  }
  // Largest fractional part first; ties broken by cell order for
  // reproducibility.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
    ++counts[remainders[i % 4].second];
  }
  return counts;
}

namespace {

// Joint cells in the order produced by cell_counts.
constexpr int kCellA[4] = {1, 1, 0, 0};
constexpr int kCellB[4] = {1, 0, 1, 0};

std::vector<CodedResponse> materialize(const std::vector<std::int64_t>& counts,
                                       std::uint64_t seed,
                                       const GenerateOptions& opts) {
  // Plant QE on elaboration-endorsing cells, n11 first.
  const std::int64_t endorsing = counts[0] + counts[2];
  std::int64_t qe_left = static_cast<std::int64_t>(
      std::floor(opts.qe_share * static_cast<double>(endorsing) + 0.5));

  std::vector<CodedResponse> records;
  std::int64_t index = 0;
  for (std::size_t cell = 0; cell < 4; ++cell) {
    for (std::int64_t i = 0; i < counts[cell]; ++i, ++index) {
      CodedResponse r;
      r.prompt_instance_id = "synth-" + std::to_string(index);
      const int cluster =
          opts.statement_count > 1
              ? static_cast<int>(index % opts.statement_count)
              : 0;
      r.statement_id = "synth-stmt-" + std::to_string(cluster);
      r.condition_id = opts.condition_id;
      r.task = opts.task;
      r.category = opts.category;
      r.model_id = opts.model_id;
      r.draw_index = 0;
      r.sel = kCellA[cell] ? StanceLabel::E : StanceLabel::N;
      if (kCellB[cell]) {
        if (qe_left > 0) {
          r.elab = StanceLabel::QE;
          --qe_left;
        } else {
          r.elab = StanceLabel::E;
        }
      } else {
        r.elab = StanceLabel::D;
      }
      r.sel_source = SelSource::Regex;
      records.push_back(std::move(r));
    }
  }
  std::mt19937_64 rng(mix_seed(seed, 0x53594e5448ULL));
  std::shuffle(records.begin(), records.end(), rng);
  return records;
}

}  // namespace

std::vector<CodedResponse> generate_population(const JointProfile& profile,
                                               std::int64_t n, std::uint64_t seed,
                                               const GenerateOptions& opts) {
  if (opts.qe_share < 0.0 || opts.qe_share > 1.0) {
    throw MetricError("qe_share must lie in [0,1]");
  }
  return materialize(cell_counts(profile, n), seed, opts);
}

std::vector<CodedResponse> cancellation_trap_population(double c, std::int64_t n,
                                                        std::uint64_t seed) {
  if (!(c > 0.0) || c > 0.5) {
    throw MetricError("mismatch rate must satisfy 0 < c <= 0.5");
  }
  if (n < 1) {
    throw MetricError("population size must be >= 1");
  }
  // Equal counts in the two mismatch cells keep DNI at exactly zero even
  // when n*c is not integral.
  const std::int64_t k = static_cast<std::int64_t>(
      std::floor(c * static_cast<double>(n) + 0.5));
  if (2 * k > n) {
    throw MetricError("mismatch cells exceed the population size");
  }
  std::vector<std::int64_t> counts = {0, k, k, n - 2 * k};
  GenerateOptions opts;
  opts.condition_id = "trap";
  return materialize(counts, seed, opts);
}

IrreducibilityPopulations irreducibility_populations(double delta, double eps,
                                                     double c,
                                                     std::int64_t n_per_condition,
                                                     int scenario_ii_conditions) {
  if (!(delta > 0.0) || delta >= 0.5) {
    throw MetricError("delta must satisfy 0 < delta < 0.5");
  }
  if (eps < 0.0 || eps + delta > 1.0) {
    throw MetricError("eps must satisfy 0 <= eps and eps + delta <= 1");
  }
  if (!(c > delta / 2.0) || c + delta / 2.0 > 1.0) {
    throw MetricError("c must satisfy delta/2 < c and c + delta/2 <= 1");
  }
  if (scenario_ii_conditions < 1) {
    throw MetricError("need at least one scenario (ii) condition");
  }

  IrreducibilityPopulations out;

  // Scenario (i): layers agree almost surely; only the rate moves.
  const std::array<double, 2> rates = {eps, eps + delta};
  for (std::size_t i = 0; i < rates.size(); ++i) {
    JointProfile prof;
    prof.p11 = rates[i];
    prof.p10 = 0.0;
    prof.p01 = 0.0;
    prof.p00 = 1.0 - rates[i];
    GenerateOptions opts;
    opts.condition_id = "matched-" + std::to_string(i + 1);
    auto records = generate_population(prof, n_per_condition, 17 + i, opts);
    out.scenario_i_conditions.push_back(opts.condition_id);
    out.matched_layers.insert(out.matched_layers.end(), records.begin(),
                              records.end());
  }

  // Scenario (ii): constant union rate, symmetric mismatch of delta/2
  // in each direction at every condition.
  JointProfile prof;
  prof.p10 = delta / 2.0;
  prof.p01 = delta / 2.0;
  prof.p11 = c - delta / 2.0;
  prof.p00 = 1.0 - prof.p11 - prof.p10 - prof.p01;
  for (int i = 0; i < scenario_ii_conditions; ++i) {
    GenerateOptions opts;
    opts.condition_id = "steady-" + std::to_string(i + 1);
    auto records = generate_population(prof, n_per_condition,
                                       101 + static_cast<std::uint64_t>(i), opts);
    out.scenario_ii_conditions.push_back(opts.condition_id);
    out.constant_union.insert(out.constant_union.end(), records.begin(),
                              records.end());
  }
  return out;
}

std::pair<AuditQuadruple, ReliabilityPair> brute_force_metrics(
    std::span<const CodedResponse> records) {
  std::int64_t n = 0;
  std::int64_t sel = 0, elab = 0, both = 0, either = 0, ham = 0;
  std::int64_t over = 0, under = 0;
  for (const auto& r : records) {
    if (r.sel == StanceLabel::Abstain || r.elab == StanceLabel::Abstain) {
      throw MetricError("oracle requires divergence-eligible records");
    }
    const bool a = r.sel == StanceLabel::E;
    const bool b = r.elab == StanceLabel::E || r.elab == StanceLabel::QE;
    ++n;
    if (a) ++sel;
    if (b) ++elab;
    if (a && b) ++both;
    if (a || b) ++either;
    if (a != b) ++ham;
    if (a && !b) ++over;
    if (!a && b) ++under;
  }
  if (n == 0) {
    throw MetricError("oracle undefined on an empty record set");
  }
  AuditQuadruple q;
  q.n = n;
  q.ber_cor = Rat(both, n);
  q.ber_sel = Rat(sel, n);
  q.ber_elab = Rat(elab, n);
  q.ber_union = Rat(either, n);
  ReliabilityPair p;
  p.n = n;
  p.oed = Rat(over, n);
  p.ued = Rat(under, n);
  p.ir = Rat(ham, n);
  p.dni = Rat(sel - elab, n);
  if (either > 0) {
    p.normalized_ir = Rat(ham, either);
  }
  return {q, p};
}

}  // namespace biaxis::synth

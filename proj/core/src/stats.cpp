#include "biaxis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "biaxis/errors.hpp"
#include "biaxis/rng.hpp"

namespace biaxis::stats {

namespace {

double z_for_level(double level) {
  if (!(level > 0.0) || !(level < 1.0)) {
    throw MetricError("confidence level must lie in (0,1)");
  }
  boost::math::normal_distribution<double> normal;
  return boost::math::quantile(normal, 0.5 + level / 2.0);
}

}  // namespace

ConfidenceInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                                   double level) {
  if (trials < 1) {
    throw MetricError("Wilson interval undefined for zero trials");
  }
  if (successes < 0 || successes > trials) {
    throw MetricError("successes must lie in [0, trials]");
  }
  const double z = z_for_level(level);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      (z / denom) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));

  ConfidenceInterval ci;
  ci.method = CiMethod::Wilson;
  ci.level = level;
  ci.count = trials;
  ci.lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  ci.upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return ci;
}

ConfidenceInterval cluster_bootstrap(
    std::span<const CodedResponse> records,
    const std::function<double(std::span<const CodedResponse>)>& metric,
    const BootstrapOptions& opts) {
  if (opts.replicates < 100) {
    throw MetricError("bootstrap needs at least 100 replicates");
  }
  if (records.empty()) {
    throw MetricError("bootstrap undefined on an empty record set");
  }

  // Clusters in first-appearance order so the resample sequence does not
  // depend on container ordering.
  std::vector<std::vector<std::size_t>> clusters;
  std::map<std::string, std::size_t> cluster_index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] =
        cluster_index.emplace(records[i].statement_id, clusters.size());
    if (inserted) clusters.emplace_back();
    clusters[it->second].push_back(i);
  }

  const double point = metric(records);
  ConfidenceInterval ci;
  ci.method = CiMethod::ClusterBootstrap;
  ci.level = opts.level;
  ci.count = opts.replicates;

  if (clusters.size() < 2) {
    ci.lower = ci.upper = point;
    ci.degenerate = true;
    return ci;
  }

  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(opts.replicates));
  std::vector<CodedResponse> resample;
  for (int b = 0; b < opts.replicates; ++b) {
    std::mt19937_64 rng(mix_seed(opts.seed, static_cast<std::uint64_t>(b)));
    resample.clear();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const auto& members = clusters[bounded(rng, clusters.size())];
      for (std::size_t idx : members) resample.push_back(records[idx]);
    }
    try {
      stats.push_back(metric(resample));
    } catch (const MetricError&) {
      // Resample happened to contain no usable records; drop it.
    }
  }
  if (stats.size() * 2 < static_cast<std::size_t>(opts.replicates)) {
    throw MetricError("more than half of bootstrap replicates were unusable");
  }

  std::sort(stats.begin(), stats.end());
  const double alpha = 1.0 - opts.level;
  auto at = [&](double p) {
    const auto idx = static_cast<std::size_t>(
        std::llround(p * static_cast<double>(stats.size() - 1)));
    return stats[std::min(idx, stats.size() - 1)];
  };
  ci.lower = at(alpha / 2.0);
  ci.upper = at(1.0 - alpha / 2.0);
  return ci;
}

// ---------------------------------------------------------------------------
// ANOVA effect sizes
// ---------------------------------------------------------------------------

EffectSize eta_squared_oneway(std::span<const double> outcome,
                              std::span<const std::string> factor_level,
                              const std::string& factor_name) {
  if (outcome.size() != factor_level.size()) {
    throw MetricError("outcome and factor vectors must have equal length");
  }
  if (outcome.empty()) {
    throw MetricError("eta squared undefined on empty data");
  }
  std::map<std::string, std::pair<double, std::int64_t>> groups;  // sum, count
  double grand_sum = 0.0;
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    auto& g = groups[factor_level[i]];
    g.first += outcome[i];
    ++g.second;
    grand_sum += outcome[i];
  }
  if (groups.size() < 2) {
    throw MetricError("one-way eta squared needs at least two factor levels");
  }
  const double n = static_cast<double>(outcome.size());
  const double grand_mean = grand_sum / n;

  double ss_total = 0.0;
  for (double y : outcome) {
    ss_total += (y - grand_mean) * (y - grand_mean);
  }
  EffectSize effect;
  effect.factor = factor_name;
  effect.kind = EffectSize::Kind::Main;
  if (ss_total == 0.0) {
    effect.zero_variance = true;
    return effect;
  }
  double ss_between = 0.0;
  for (const auto& [level, g] : groups) {
    const double mean = g.first / static_cast<double>(g.second);
    ss_between += static_cast<double>(g.second) * (mean - grand_mean) *
                  (mean - grand_mean);
  }
  effect.eta_squared = ss_between / ss_total;
  return effect;
}

TwoWayEffects eta_squared_twoway(std::span<const double> outcome,
                                 std::span<const std::string> factor1,
                                 std::span<const std::string> factor2,
                                 const std::string& name1,
                                 const std::string& name2) {
  if (outcome.size() != factor1.size() || outcome.size() != factor2.size()) {
    throw MetricError("outcome and factor vectors must have equal length");
  }
  if (outcome.empty()) {
    throw MetricError("eta squared undefined on empty data");
  }
  std::set<std::string> levels1(factor1.begin(), factor1.end());
  std::set<std::string> levels2(factor2.begin(), factor2.end());
  if (levels1.size() < 2 || levels2.size() < 2) {
    throw MetricError("two-way eta squared needs at least two levels per factor");
  }

  struct Acc {
    double sum = 0.0;
    std::int64_t count = 0;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::map<std::string, Acc> margin1, margin2;
  std::map<std::pair<std::string, std::string>, Acc> cells;
  double grand_sum = 0.0;
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    margin1[factor1[i]].sum += outcome[i];
    ++margin1[factor1[i]].count;
    margin2[factor2[i]].sum += outcome[i];
    ++margin2[factor2[i]].count;
    auto& cell = cells[{factor1[i], factor2[i]}];
    cell.sum += outcome[i];
    ++cell.count;
    grand_sum += outcome[i];
  }

  std::int64_t cell_size = -1;
  for (const auto& l1 : levels1) {
    for (const auto& l2 : levels2) {
      auto it = cells.find({l1, l2});
      if (it == cells.end() || it->second.count == 0) {
        throw MetricError("empty design cell (" + l1 + ", " + l2 + ")");
      }
      if (cell_size < 0) {
        cell_size = it->second.count;
      } else if (it->second.count != cell_size) {
        throw MetricError("unbalanced design: cell (" + l1 + ", " + l2 + ") has " +
                          std::to_string(it->second.count) + " observations, " +
                          "expected " + std::to_string(cell_size));
      }
    }
  }

  const double n = static_cast<double>(outcome.size());
  const double grand_mean = grand_sum / n;
  double ss_total = 0.0;
  for (double y : outcome) {
    ss_total += (y - grand_mean) * (y - grand_mean);
  }

  auto margin_ss = [&](const std::map<std::string, Acc>& margin) {
    double ss = 0.0;
    for (const auto& [level, acc] : margin) {
      const double d = acc.mean() - grand_mean;
      ss += static_cast<double>(acc.count) * d * d;
    }
    return ss;
  };
  const double ss1 = margin_ss(margin1);
  const double ss2 = margin_ss(margin2);
  double ss_cells = 0.0;
  for (const auto& [key, acc] : cells) {
    const double d = acc.mean() - grand_mean;
    ss_cells += static_cast<double>(acc.count) * d * d;
  }
  const double ss_inter = ss_cells - ss1 - ss2;

  TwoWayEffects effects;
  effects.main1.factor = name1;
  effects.main2.factor = name2;
  effects.interaction.factor = name1 + "x" + name2;
  effects.main1.kind = EffectSize::Kind::Main;
  effects.main2.kind = EffectSize::Kind::Main;
  effects.interaction.kind = EffectSize::Kind::TwoWay;
  if (ss_total == 0.0) {
    effects.main1.zero_variance = true;
    effects.main2.zero_variance = true;
    effects.interaction.zero_variance = true;
    return effects;
  }
  effects.main1.eta_squared = ss1 / ss_total;
  effects.main2.eta_squared = ss2 / ss_total;
  // Guard against a tiny negative from cancellation on additive grids.
  effects.interaction.eta_squared = std::max(0.0, ss_inter / ss_total);
  return effects;
}

// ---------------------------------------------------------------------------
// Cohen's kappa
// ---------------------------------------------------------------------------

std::string landis_koch_band(double kappa) {
  if (kappa < 0.0) return "poor";
  if (kappa <= 0.20) return "slight";
  if (kappa <= 0.40) return "fair";
  if (kappa <= 0.60) return "moderate";
  if (kappa <= 0.80) return "substantial";
  return "almost perfect";
}

KappaResult cohen_kappa(std::span<const StanceLabel> rater_a,
                        std::span<const StanceLabel> rater_b) {
  if (rater_a.size() != rater_b.size()) {
    throw MetricError("kappa requires aligned sequences of equal length");
  }
  if (rater_a.empty()) {
    throw MetricError("kappa undefined on empty sequences");
  }
  const double n = static_cast<double>(rater_a.size());
  std::map<StanceLabel, double> pa, pb;
  double agree = 0.0;
  for (std::size_t i = 0; i < rater_a.size(); ++i) {
    pa[rater_a[i]] += 1.0;
    pb[rater_b[i]] += 1.0;
    if (rater_a[i] == rater_b[i]) agree += 1.0;
  }
  const double po = agree / n;
  double pe = 0.0;
  for (const auto& [label, count_a] : pa) {
    auto it = pb.find(label);
    if (it != pb.end()) {
      pe += (count_a / n) * (it->second / n);
    }
  }
  KappaResult result;
  if (pe >= 1.0) {
    // Both raters constant and identical.
    result.kappa = 1.0;
    result.degenerate = true;
  } else {
    result.kappa = (po - pe) / (1.0 - pe);
  }
  result.band = landis_koch_band(result.kappa);
  return result;
}

AgreementMatrix agreement_matrix(std::span<const CodedResponse> coded) {
  std::vector<std::string> judges;
  for (const auto& r : coded) {
    for (const auto& v : r.per_judge) {
      if (std::find(judges.begin(), judges.end(), v.judge_id) == judges.end()) {
        judges.push_back(v.judge_id);
      }
    }
  }
  AgreementMatrix matrix;
  matrix.judge_ids = judges;
  matrix.pairwise.assign(judges.size(),
                         std::vector<std::optional<KappaResult>>(judges.size()));

  auto verdict_of = [](const CodedResponse& r,
                       const std::string& judge) -> std::optional<StanceLabel> {
    for (const auto& v : r.per_judge) {
      if (v.judge_id == judge) return v.label;
    }
    return std::nullopt;
  };

  for (std::size_t i = 0; i < judges.size(); ++i) {
    matrix.pairwise[i][i] = KappaResult{1.0, landis_koch_band(1.0), true};
    for (std::size_t j = i + 1; j < judges.size(); ++j) {
      std::vector<StanceLabel> a, b;
      for (const auto& r : coded) {
        auto va = verdict_of(r, judges[i]);
        auto vb = verdict_of(r, judges[j]);
        if (va && vb) {
          a.push_back(*va);
          b.push_back(*vb);
        }
      }
      if (!a.empty()) {
        auto kappa = cohen_kappa(a, b);
        matrix.pairwise[i][j] = kappa;
        matrix.pairwise[j][i] = kappa;
      }
    }
  }

  matrix.mean_kappa.resize(judges.size());
  for (std::size_t i = 0; i < judges.size(); ++i) {
    double sum = 0.0;
    int defined = 0;
    for (std::size_t j = 0; j < judges.size(); ++j) {
      if (i != j && matrix.pairwise[i][j]) {
        sum += matrix.pairwise[i][j]->kappa;
        ++defined;
      }
    }
    if (defined > 0) matrix.mean_kappa[i] = sum / defined;
  }
  return matrix;
}

// ---------------------------------------------------------------------------
// Spearman rank correlation
// ---------------------------------------------------------------------------

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) {
    throw MetricError("rank correlation undefined for a constant vector");
  }
  return cov / std::sqrt(vx * vy);
}

double rho_of(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

}  // namespace

RankCorrelation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw MetricError("paired score vectors must have equal length");
  }
  const std::size_t n = x.size();
  if (n < 3) {
    throw MetricError("rank correlation needs at least three pairs");
  }

  RankCorrelation result;
  result.rho = rho_of(x, y);

  if (n <= 10) {
    // Exact two-sided permutation test over all distinct arrangements of
    // one rank vector. Every distinct arrangement of a tied multiset
    // corresponds to the same number of underlying permutations, so the
    // enumeration is exact with ties as well.
    const auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    std::sort(ry.begin(), ry.end());
    const double threshold = std::abs(result.rho) - 1e-12;
    std::int64_t total = 0;
    std::int64_t at_least = 0;
    do {
      ++total;
      if (std::abs(pearson(rx, ry)) >= threshold) ++at_least;
    } while (std::next_permutation(ry.begin(), ry.end()));
    result.p_value = static_cast<double>(at_least) / static_cast<double>(total);
    result.permutations = total;
  } else {
    const double r2 = result.rho * result.rho;
    if (r2 >= 1.0) {
      result.p_value = 0.0;
    } else {
      const double dof = static_cast<double>(n) - 2.0;
      const double t = result.rho * std::sqrt(dof / (1.0 - r2));
      boost::math::students_t_distribution<double> dist(dof);
      result.p_value =
          2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
    result.permutations = 0;
  }

  if (n == 3) {
    result.loo_min = result.loo_max = result.rho;
    return result;
  }
  double lo = 1.0, hi = -1.0;
  std::vector<double> xd, yd;
  for (std::size_t drop = 0; drop < n; ++drop) {
    xd.clear();
    yd.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == drop) continue;
      xd.push_back(x[i]);
      yd.push_back(y[i]);
    }
    const double r = rho_of(xd, yd);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  result.loo_min = lo;
  result.loo_max = hi;
  return result;
}

}  // namespace biaxis::stats

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biaxis/labels.hpp"

namespace biaxis::stats {

enum class CiMethod { Wilson, ClusterBootstrap };

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 1.0;
  CiMethod method = CiMethod::Wilson;
  double level = 0.95;
  // Trials for Wilson, replicate count for the bootstrap.
  std::int64_t count = 0;
  // Single-cluster bootstrap or zero-variance input.
  bool degenerate = false;
};

// Wilson score interval for a binomial proportion. Always contains k/n;
// endpoints are exact 0 / 1 at the boundaries k = 0 and k = n.
ConfidenceInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                                   double level = 0.95);

struct BootstrapOptions {
  int replicates = 2000;
  double level = 0.95;
  std::uint64_t seed = 0;
};

// Cluster bootstrap with statements as the resampling unit: draws
// |clusters| statement ids with replacement per replicate, recomputes
// `metric` on the concatenated records, and reports a percentile
// interval over the replicate statistics.
//
// Reproducibility contract: replicate b draws from
// mt19937_64(mix_seed(seed, b)) with modulo-bounded indices, so results
// are identical regardless of platform or evaluation order. The
// percentile rule is nearest-rank: q(p) = sorted[round(p * (B - 1))].
//
// Replicates on which `metric` throws MetricError (e.g. a resample with
// no eligible records) are dropped; more than half dropped is an error.
ConfidenceInterval cluster_bootstrap(
    std::span<const CodedResponse> records,
    const std::function<double(std::span<const CodedResponse>)>& metric,
    const BootstrapOptions& opts = {});

struct EffectSize {
  std::string factor;
  double eta_squared = 0.0;
  enum class Kind { Main, TwoWay } kind = Kind::Main;
  bool zero_variance = false;
};

// One-way eta squared: SS_between / SS_total of a (typically binary)
// outcome across factor levels. All-identical outcomes give 0 with the
// zero-variance flag set. Requires >= 2 non-empty levels.
EffectSize eta_squared_oneway(std::span<const double> outcome,
                              std::span<const std::string> factor_level,
                              const std::string& factor_name = "factor");

struct TwoWayEffects {
  EffectSize main1;
  EffectSize main2;
  EffectSize interaction;
};

// Classical (non-partial) two-way decomposition on a balanced grid:
// every eta squared is SS_term / SS_total, with
// SS_interaction = SS_cells - SS_main1 - SS_main2. Empty cells and
// unequal cell sizes are rejected, never reweighted.
TwoWayEffects eta_squared_twoway(std::span<const double> outcome,
                                 std::span<const std::string> factor1,
                                 std::span<const std::string> factor2,
                                 const std::string& name1 = "factor1",
                                 const std::string& name2 = "factor2");

struct KappaResult {
  double kappa = 0.0;
  std::string band;  // Landis-Koch qualitative range
  // Both raters constant and identical: expected agreement is 1 and the
  // usual formula is 0/0; kappa is 1 by convention, flagged here.
  bool degenerate = false;
};

std::string landis_koch_band(double kappa);

// Cohen's kappa for two aligned label sequences over a shared alphabet.
KappaResult cohen_kappa(std::span<const StanceLabel> rater_a,
                        std::span<const StanceLabel> rater_b);

// Pairwise kappa between every pair of judges in `coded`, aligned on the
// responses where both cast an elaboration verdict. Pairs with no
// overlap are left empty.
struct AgreementMatrix {
  std::vector<std::string> judge_ids;
  std::vector<std::vector<std::optional<KappaResult>>> pairwise;
  std::vector<std::optional<double>> mean_kappa;  // per judge, over defined pairs
};

AgreementMatrix agreement_matrix(std::span<const CodedResponse> coded);

struct RankCorrelation {
  double rho = 0.0;
  double p_value = 1.0;
  // Number of arrangements enumerated for the exact permutation test;
  // 0 means the t approximation was used instead.
  std::int64_t permutations = 0;
  double loo_min = 0.0;  // smallest rho over all single deletions
  double loo_max = 0.0;
};

// Spearman rank correlation with average ranks for ties. For n <= 10 the
// two-sided p-value is exact, enumerating all distinct arrangements of
// one rank vector; beyond that a t approximation is used. The
// leave-one-out range recomputes rho under every single deletion
// (reported as [rho, rho] when n == 3, where a deletion leaves too few
// points). Constant input vectors are an error.
RankCorrelation spearman(std::span<const double> x, std::span<const double> y);

}  // namespace biaxis::stats

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "biaxis/labels.hpp"
#include "biaxis/metrics.hpp"

namespace biaxis::synth {

// Joint law of the (A, B) indicator pair. Must lie on the simplex.
struct JointProfile {
  double p11 = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
  double p00 = 1.0;

  void validate() const;  // throws MetricError off the simplex
};

struct GenerateOptions {
  std::string condition_id = "synthetic";
  std::string model_id = "synthetic";
  std::string category = "synthetic";
  std::string task = "BJ";
  // Fraction of elaboration-endorsing records labeled QE instead of E,
  // planted deterministically (n11 cell first, then n01).
  double qe_share = 0.0;
  // Spread records across this many statement ids (bootstrap clusters).
  int statement_count = 1;
};

// Deterministic composition: exactly round(n * p) records per joint cell,
// remainder assigned by largest fractional part, then shuffled by seed.
// Cell counts never differ from n * p by one whole record or more.
std::vector<std::int64_t> cell_counts(const JointProfile& profile, std::int64_t n);

std::vector<CodedResponse> generate_population(const JointProfile& profile,
                                               std::int64_t n, std::uint64_t seed,
                                               const GenerateOptions& opts = {});

// Equal-frequency mismatch construction: p10 = p01 = c, remainder in p00.
// DNI is 0 by construction for every n; IR equals 2c whenever n*c is
// integral. Requires 0 < c <= 1/2.
std::vector<CodedResponse> cancellation_trap_population(double c, std::int64_t n,
                                                        std::uint64_t seed = 0);

// Two scenario sets showing that neither reliability axis bounds the
// other. Scenario (i): two conditions with perfectly agreeing layers at
// rates eps and eps+delta, so IR = 0 everywhere while the union rate
// spreads by delta. Scenario (ii): every condition with
// sel = elab = c and oed = ued = delta/2, so the union rate is constant
// at c + delta/2 while IR = delta everywhere.
struct IrreducibilityPopulations {
  std::vector<CodedResponse> matched_layers;   // scenario (i)
  std::vector<CodedResponse> constant_union;   // scenario (ii)
  std::vector<std::string> scenario_i_conditions;
  std::vector<std::string> scenario_ii_conditions;
};

IrreducibilityPopulations irreducibility_populations(double delta, double eps = 0.1,
                                                     double c = 0.5,
                                                     std::int64_t n_per_condition = 1000,
                                                     int scenario_ii_conditions = 4);

// Independent oracle: recomputes every rate by direct enumeration of the
// four joint cells. Shares the result types with the audit metrics but
// none of their computation path.
std::pair<AuditQuadruple, ReliabilityPair> brute_force_metrics(
    std::span<const CodedResponse> records);

}  // namespace biaxis::synth

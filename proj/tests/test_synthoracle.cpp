#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "biaxis/errors.hpp"
#include "biaxis/metrics.hpp"
#include "biaxis/synthoracle.hpp"

using namespace biaxis;
using namespace biaxis::synth;

TEST_CASE("deterministic composition never misses a cell by a whole record") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    double raw[4];
    double sum = 0;
    for (double& v : raw) {
      v = static_cast<double>(rng() % 1000) + 1;
      sum += v;
    }
    JointProfile profile{raw[0] / sum, raw[1] / sum, raw[2] / sum, raw[3] / sum};
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 2000);
    auto counts = cell_counts(profile, n);
    REQUIRE(counts.size() == 4);
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == n);
    const double expected[4] = {profile.p11 * n, profile.p10 * n, profile.p01 * n,
                                profile.p00 * n};
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(static_cast<double>(counts[i]) - expected[i]) < 1.0);
    }
  }
}

TEST_CASE("invalid profiles are rejected") {
  CHECK_THROWS_AS(cell_counts(JointProfile{0.5, 0.5, 0.5, -0.5}, 10), MetricError);
  CHECK_THROWS_AS(cell_counts(JointProfile{0.5, 0.2, 0.2, 0.2}, 10), MetricError);
  CHECK_THROWS_AS(cell_counts(JointProfile{0.25, 0.25, 0.25, 0.25}, 0), MetricError);
}

TEST_CASE("published fixture profile reproduces its quadruple at n=1000") {
  JointProfile profile{0.172, 0.205, 0.076, 0.547};
  auto records = generate_population(profile, 1000, 21);
  auto quad = ber_family(records);
  auto rel = reliability(records);
  CHECK(to_double(quad.ber_cor) == doctest::Approx(0.172).epsilon(1e-12));
  CHECK(to_double(quad.ber_sel) == doctest::Approx(0.377).epsilon(1e-12));
  CHECK(to_double(quad.ber_elab) == doctest::Approx(0.248).epsilon(1e-12));
  CHECK(to_double(quad.ber_union) == doctest::Approx(0.453).epsilon(1e-12));
  CHECK(to_double(rel.ir) == doctest::Approx(0.281).epsilon(1e-12));
  CHECK(to_double(rel.dni) == doctest::Approx(0.129).epsilon(1e-12));
}

TEST_CASE("perfect-agreement profile pins every rate to one") {
  auto records = generate_population(JointProfile{1.0, 0.0, 0.0, 0.0}, 50, 2);
  auto quad = ber_family(records);
  auto rel = reliability(records);
  CHECK(quad.ber_cor == Rat(1));
  CHECK(quad.ber_union == Rat(1));
  CHECK(rel.ir == Rat(0));
}

TEST_CASE("two seeds give identical metrics through different orderings") {
  JointProfile profile{0.1, 0.2, 0.3, 0.4};
  auto a = generate_population(profile, 500, 1);
  auto b = generate_population(profile, 500, 2);
  CHECK(ber_family(a).ber_union == ber_family(b).ber_union);
  CHECK(reliability(a).dni == reliability(b).dni);
  bool same_order = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].prompt_instance_id != b[i].prompt_instance_id) {
      same_order = false;
      break;
    }
  }
  CHECK_FALSE(same_order);
}

TEST_CASE("cancellation trap populations cancel exactly") {
  SUBCASE("c = 0.3 on ten records") {
    auto records = cancellation_trap_population(0.3, 10);
    auto rel = reliability(records);
    CHECK(rel.ir == Rat(6, 10));
    CHECK(rel.dni == Rat(0));
  }
  SUBCASE("c = 0.05 at n = 1000") {
    auto records = cancellation_trap_population(0.05, 1000);
    auto rel = reliability(records);
    CHECK(rel.ir == Rat(100, 1000));
    CHECK(rel.dni == Rat(0));
  }
  SUBCASE("a selection-only view reads as calibrated") {
    auto records = cancellation_trap_population(0.3, 1000);
    std::int64_t sel_endorse = 0;
    for (const auto& r : records) {
      if (r.sel == StanceLabel::E) ++sel_endorse;
    }
    // The surface rate alone shows 0.3 with nothing anomalous, while the
    // layers actually disagree on 60% of responses.
    CHECK(Rat(sel_endorse, 1000) == Rat(3, 10));
    CHECK(reliability(records).ir == Rat(6, 10));
  }
  SUBCASE("dni stays zero even when n*c is fractional") {
    auto records = cancellation_trap_population(0.3, 7);
    CHECK(reliability(records).dni == Rat(0));
  }
  CHECK_THROWS_AS(cancellation_trap_population(0.0, 10), MetricError);
  CHECK_THROWS_AS(cancellation_trap_population(0.6, 10), MetricError);
}

TEST_CASE("irreducibility scenario (i): zero IR with a moving union rate") {
  auto pops = irreducibility_populations(0.4, 0.1, 0.5, 1000);
  auto slices = slice_metrics(pops.matched_layers, GroupKey::Condition);
  REQUIRE(slices.groups.size() == 2);
  std::map<std::string, Rat> unions;
  for (const auto& [cond, m] : slices.groups) {
    CHECK(m.reliability.ir == Rat(0));
    unions[cond] = m.quadruple.ber_union;
  }
  CHECK(unions.at("matched-1") == Rat(1, 10));
  CHECK(unions.at("matched-2") == Rat(5, 10));
}

TEST_CASE("irreducibility scenario (ii): constant union with IR = delta") {
  auto pops = irreducibility_populations(0.2, 0.1, 0.3, 1000);
  auto slices = slice_metrics(pops.constant_union, GroupKey::Condition);
  REQUIRE(slices.groups.size() == 4);
  for (const auto& [cond, m] : slices.groups) {
    CHECK(m.quadruple.ber_union == Rat(4, 10));
    CHECK(m.reliability.ir == Rat(2, 10));
    CHECK(m.reliability.dni == Rat(0));
  }
}

TEST_CASE("irreducibility rejects out-of-range deltas") {
  CHECK_THROWS_AS(irreducibility_populations(0.0), MetricError);
  CHECK_THROWS_AS(irreducibility_populations(0.5), MetricError);
}

TEST_CASE("oracle on the all-nonendorsing population is all zeros") {
  auto records = generate_population(JointProfile{0.0, 0.0, 0.0, 1.0}, 30, 4);
  auto [quad, rel] = brute_force_metrics(records);
  CHECK(quad.ber_union == Rat(0));
  CHECK(rel.ir == Rat(0));
  CHECK_FALSE(rel.normalized_ir.has_value());
}

TEST_CASE("oracle matches the trap construction") {
  auto records = cancellation_trap_population(0.3, 10);
  auto [quad, rel] = brute_force_metrics(records);
  CHECK(rel.ir == Rat(6, 10));
  CHECK(rel.dni == Rat(0));
  CHECK(quad.ber_sel == Rat(3, 10));
}

TEST_CASE("oracle requires eligible records and a nonempty set") {
  std::vector<CodedResponse> empty;
  CHECK_THROWS_AS(brute_force_metrics(empty), MetricError);
  CodedResponse r;
  r.sel = StanceLabel::Abstain;
  r.elab = StanceLabel::D;
  std::vector<CodedResponse> one{r};
  CHECK_THROWS_AS(brute_force_metrics(one), MetricError);
}

TEST_CASE("qe_share plants the requested number of QE labels") {
  JointProfile profile{0.3, 0.2, 0.2, 0.3};
  GenerateOptions opts;
  opts.qe_share = 0.2;
  auto records = generate_population(profile, 1000, 5, opts);
  std::int64_t qe = 0, endorsing = 0;
  for (const auto& r : records) {
    if (r.elab == StanceLabel::QE) ++qe;
    if (is_endorsement(r.elab)) ++endorsing;
  }
  CHECK(endorsing == 500);
  CHECK(qe == 100);
}

TEST_CASE("statement_count spreads records over bootstrap clusters") {
  GenerateOptions opts;
  opts.statement_count = 7;
  auto records = generate_population(JointProfile{0.2, 0.2, 0.2, 0.4}, 100, 9, opts);
  std::map<std::string, int> clusters;
  for (const auto& r : records) ++clusters[r.statement_id];
  CHECK(clusters.size() == 7);
}

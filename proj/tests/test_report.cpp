#include <doctest.h>

#include <nlohmann/json.hpp>

#include "biaxis/errors.hpp"
#include "biaxis/report.hpp"
#include "biaxis/synthoracle.hpp"
#include "test_util.hpp"

using namespace biaxis;

namespace {

std::vector<CodedResponse> condition_population(const std::string& condition_id,
                                                double p11, double p10, double p01,
                                                std::int64_t n, std::uint64_t seed) {
  synth::JointProfile profile{p11, p10, p01, 1.0 - p11 - p10 - p01};
  synth::GenerateOptions opts;
  opts.condition_id = condition_id;
  opts.model_id = "model-x";
  opts.task = "BJ";
  return synth::generate_population(profile, n, seed, opts);
}

GridDesign two_cell_grid() {
  GridDesign grid;
  grid.kind = GridDesign::Kind::Custom;
  PromptCondition base = baseline_condition();
  grid.conditions.push_back(base);
  PromptCondition other = base;
  other.condition_id = "X1";
  other.sentiment = Sentiment::Skeptical;
  grid.conditions.push_back(other);
  return grid;
}

}  // namespace

TEST_CASE("sign flips are flagged against the baseline cell") {
  // Baseline DNI -0.05, cell X1 DNI +0.10.
  auto base = condition_population("P0", 0.1, 0.05, 0.10, 200, 1);
  auto x1 = condition_population("X1", 0.1, 0.20, 0.10, 200, 2);
  std::vector<CodedResponse> coded;
  coded.insert(coded.end(), base.begin(), base.end());
  coded.insert(coded.end(), x1.begin(), x1.end());

  auto doc = audit_report(coded, two_cell_grid(), "P0");
  REQUIRE(doc.cell_map.size() == 2);
  for (const auto& cell : doc.cell_map) {
    if (cell.condition_id == "P0") {
      CHECK_FALSE(cell.sign_flipped);
      CHECK(cell.dni < 0.0);
    } else {
      CHECK(cell.sign_flipped);
      CHECK(cell.dni > 0.0);
    }
  }
}

TEST_CASE("a signless baseline flags nothing") {
  auto base = condition_population("P0", 0.1, 0.10, 0.10, 200, 3);  // DNI = 0
  auto x1 = condition_population("X1", 0.1, 0.20, 0.05, 200, 4);
  std::vector<CodedResponse> coded;
  coded.insert(coded.end(), base.begin(), base.end());
  coded.insert(coded.end(), x1.begin(), x1.end());

  auto doc = audit_report(coded, two_cell_grid(), "P0");
  for (const auto& cell : doc.cell_map) {
    CHECK_FALSE(cell.sign_flipped);
  }
}

TEST_CASE("planted flips are counted exactly") {
  GridDesign grid = build_default_interaction_grid();
  std::vector<CodedResponse> coded;
  const std::string baseline_id = "BJ.self.none.neutral";
  int planted = 0;
  int index = 0;
  for (const auto& c : grid.conditions) {
    const bool flip = c.condition_id != baseline_id && (index % 3 != 0);
    if (flip) ++planted;
    // Baseline and unflipped cells: DNI +0.10; flipped cells: DNI -0.10.
    auto records =
        flip ? condition_population(c.condition_id, 0.1, 0.05, 0.15, 100,
                                    10 + index)
             : condition_population(c.condition_id, 0.1, 0.15, 0.05, 100,
                                    10 + index);
    coded.insert(coded.end(), records.begin(), records.end());
    ++index;
  }
  auto doc = audit_report(coded, grid, baseline_id);
  int flagged = 0;
  for (const auto& cell : doc.cell_map) {
    if (cell.sign_flipped) ++flagged;
  }
  CHECK(flagged == planted);
}

TEST_CASE("a missing baseline cell is an error") {
  auto coded = condition_population("P0", 0.1, 0.1, 0.1, 50, 5);
  CHECK_THROWS_AS(audit_report(coded, two_cell_grid(), "NOPE"), MetricError);
}

TEST_CASE("per-model rows carry both base sizes and Wilson intervals") {
  auto a = condition_population("P0", 0.2, 0.1, 0.05, 300, 6);
  auto b = condition_population("X1", 0.1, 0.05, 0.10, 200, 7);
  for (auto& r : b) r.model_id = "model-y";
  std::vector<CodedResponse> coded;
  coded.insert(coded.end(), a.begin(), a.end());
  coded.insert(coded.end(), b.begin(), b.end());
  // One abstaining record widens n_sel bookkeeping.
  CodedResponse abstain;
  abstain.prompt_instance_id = "x";
  abstain.statement_id = "s";
  abstain.condition_id = "P0";
  abstain.task = "BJ";
  abstain.category = "synthetic";
  abstain.model_id = "model-x";
  abstain.sel = StanceLabel::D;
  abstain.elab = StanceLabel::Abstain;
  coded.push_back(abstain);

  auto doc = audit_report(coded, two_cell_grid(), "P0");
  REQUIRE(doc.per_model.size() == 2);
  for (const auto& row : doc.per_model) {
    if (row.key == "model-x") {
      CHECK(row.n_elab == 300);
      CHECK(row.n_sel == 301);
    }
    CHECK(row.ber_union.ci_lower <= row.ber_union.value);
    CHECK(row.ber_union.value <= row.ber_union.ci_upper);
  }
  CHECK(doc.pooled.n_elab == 500);
}

TEST_CASE("report serialization is deterministic and complete") {
  testutil::TempDir dir("report");
  auto base = condition_population("P0", 0.15, 0.1, 0.05, 150, 8);
  auto x1 = condition_population("X1", 0.05, 0.02, 0.12, 150, 9);
  std::vector<CodedResponse> coded;
  coded.insert(coded.end(), base.begin(), base.end());
  coded.insert(coded.end(), x1.begin(), x1.end());

  auto doc1 = audit_report(coded, two_cell_grid(), "P0");
  auto doc2 = audit_report(coded, two_cell_grid(), "P0");
  write_report_json(doc1, dir / "a.json");
  write_report_json(doc2, dir / "b.json");
  CHECK(testutil::read_file(dir / "a.json") == testutil::read_file(dir / "b.json"));

  write_report_csv(doc1, dir.path());
  CHECK(std::filesystem::exists(dir / "per_model.csv"));
  CHECK(std::filesystem::exists(dir / "per_condition.csv"));
  CHECK(std::filesystem::exists(dir / "cell_map.csv"));
  CHECK(std::filesystem::exists(dir / "effect_sizes.csv"));
  write_report_svg(doc1, dir.path());
  const std::string svg = testutil::read_file(dir / "ber_union_by_condition.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("P0") != std::string::npos);
}

TEST_CASE("OAT reports decompose factor effects") {
  GridDesign grid = build_oat_grid();
  std::vector<CodedResponse> coded;
  int seed = 0;
  for (const auto& c : grid.conditions) {
    // Task drives the endorsement rate; other factors stay flat.
    const double lift = c.task == TaskFormat::CTO ? 0.5 : 0.1;
    auto records =
        condition_population(c.condition_id, lift, 0.05, 0.05, 60, 100 + seed++);
    coded.insert(coded.end(), records.begin(), records.end());
  }
  auto doc = audit_report(coded, grid, "P0");
  REQUIRE_FALSE(doc.effect_sizes.empty());
  double task_eta = 0.0, sentiment_eta = 0.0;
  for (const auto& e : doc.effect_sizes) {
    if (e.factor == "task") task_eta = e.eta_squared;
    if (e.factor == "sentiment") sentiment_eta = e.eta_squared;
  }
  CHECK(task_eta > sentiment_eta);
  CHECK(task_eta > 0.01);
}

TEST_CASE("mitigation frontier excludes dominated configurations") {
  std::vector<MitigationConfig> configs = {
      {"CTO", 0.675, 0.166, 0.12, 8.2},
      {"BJ", 0.104, 0.138, 0.08, 26.4},
      {"BJ+ai_ethicist", 0.024, 0.120, 0.05, 28.1},
      {"SC", 0.178, 0.145, 0.09, 12.7},
  };
  auto cmp = mitigation_compare(configs, "CTO");
  REQUIRE(cmp.frontier.size() == 3);
  CHECK(cmp.frontier[0] == "BJ+ai_ethicist");
  CHECK(cmp.frontier[1] == "BJ");
  CHECK(cmp.frontier[2] == "SC");

  REQUIRE(cmp.rows[0].is_baseline);
  CHECK(cmp.rows[0].bias_dominated);
  CHECK_FALSE(cmp.rows[0].frontier_member);

  // A config worse on both axes is dominated by a frontier member.
  configs.push_back({"BJ+negative", 0.279, 0.170, 0.15, 25.9});
  auto cmp2 = mitigation_compare(configs, "CTO");
  CHECK(cmp2.frontier.size() == 3);
  bool found = false;
  for (const auto& row : cmp2.rows) {
    if (row.config.name == "BJ+negative") {
      found = true;
      CHECK_FALSE(row.frontier_member);
      REQUIRE_FALSE(row.dominated_by.empty());
      CHECK(row.dominated_by[0] == "SC");
    }
  }
  CHECK(found);
}

TEST_CASE("frontier members are mutually non-dominated") {
  std::mt19937_64 rng(77);
  std::vector<MitigationConfig> configs;
  configs.push_back({"base", 0.9, {}, {}, 5.0});
  for (int i = 0; i < 20; ++i) {
    configs.push_back({"c" + std::to_string(i),
                       static_cast<double>(rng() % 1000) / 1000.0,
                       {},
                       {},
                       static_cast<double>(rng() % 500) / 10.0});
  }
  auto cmp = mitigation_compare(configs, "base");
  auto find = [&](const std::string& name) -> const MitigationConfig& {
    for (const auto& c : configs) {
      if (c.name == name) return c;
    }
    throw std::logic_error("missing");
  };
  for (const auto& a : cmp.frontier) {
    for (const auto& b : cmp.frontier) {
      if (a == b) continue;
      const auto& ca = find(a);
      const auto& cb = find(b);
      const bool dominates = ca.ber_sel <= cb.ber_sel &&
                             ca.mean_tokens <= cb.mean_tokens &&
                             (ca.ber_sel < cb.ber_sel ||
                              ca.mean_tokens < cb.mean_tokens);
      CHECK_FALSE(dominates);
    }
  }
  // Every dominated candidate names a frontier member that beats it.
  for (const auto& row : cmp.rows) {
    if (row.is_baseline || row.frontier_member) continue;
    bool beaten_by_member = false;
    for (const auto& d : row.dominated_by) {
      if (std::find(cmp.frontier.begin(), cmp.frontier.end(), d) !=
          cmp.frontier.end()) {
        beaten_by_member = true;
      }
    }
    CHECK(beaten_by_member);
  }
}

TEST_CASE("baseline-only comparison reports itself as the frontier") {
  std::vector<MitigationConfig> configs = {{"only", 0.3, {}, {}, 10.0}};
  auto cmp = mitigation_compare(configs, "only");
  REQUIRE(cmp.frontier.size() == 1);
  CHECK(cmp.frontier[0] == "only");
  CHECK_FALSE(cmp.rows[0].bias_dominated);
}

TEST_CASE("layer rerouting is flagged when bias moves instead of shrinking") {
  std::vector<MitigationConfig> configs = {
      {"baseline", 0.40, 0.10, 0.05, 10.0},
      {"free-response", 0.0, 0.10, {}, 12.0},
      {"genuine", 0.05, 0.02, 0.01, 15.0},
  };
  auto cmp = mitigation_compare(configs, "baseline");
  for (const auto& row : cmp.rows) {
    if (row.config.name == "free-response") {
      CHECK(row.layer_rerouting);
      CHECK_FALSE(row.co_reduction);
    }
    if (row.config.name == "genuine") {
      CHECK_FALSE(row.layer_rerouting);
      CHECK(row.co_reduction);
    }
  }
}

TEST_CASE("missing baseline configuration is an error") {
  std::vector<MitigationConfig> configs = {{"a", 0.1, {}, {}, 1.0}};
  CHECK_THROWS_AS(mitigation_compare(configs, "nope"), MetricError);
}

TEST_CASE("coded runs build mitigation configs on per-layer bases") {
  // Free-response records: selection structurally absent.
  std::vector<CodedResponse> coded;
  for (int i = 0; i < 10; ++i) {
    CodedResponse r;
    r.prompt_instance_id = "fr-" + std::to_string(i);
    r.statement_id = "s";
    r.condition_id = "T3";
    r.task = "Explain";
    r.category = "x";
    r.model_id = "m";
    r.sel = StanceLabel::Abstain;
    r.sel_source = SelSource::StructuralAbstain;
    r.elab = i < 1 ? StanceLabel::E : StanceLabel::D;
    coded.push_back(std::move(r));
  }
  auto cfg = mitigation_config_from_coded("explain", coded, 30.0);
  CHECK(cfg.ber_sel == 0.0);
  REQUIRE(cfg.ber_elab.has_value());
  CHECK(*cfg.ber_elab == doctest::Approx(0.1));
  CHECK_FALSE(cfg.dni.has_value());
}

TEST_CASE("mitigation outputs serialize both delta conventions") {
  testutil::TempDir dir("mitigation");
  std::vector<MitigationConfig> configs = {
      {"neutral", 0.138, {}, {}, 26.4},
      {"ai_ethicist", 0.024, {}, {}, 28.1},
  };
  auto cmp = mitigation_compare(configs, "neutral");
  write_mitigation_json(cmp, dir / "m.json");
  write_mitigation_csv(cmp, dir / "m.csv");

  auto doc = nlohmann::json::parse(testutil::read_file(dir / "m.json"));
  bool found = false;
  for (const auto& row : doc["rows"]) {
    if (row["name"] == "ai_ethicist") {
      found = true;
      CHECK(row["delta_BER_sel"].get<double>() == doctest::Approx(0.114));
      CHECK(row["BER_sel_minus_baseline"].get<double>() ==
            doctest::Approx(-0.114));
    }
  }
  CHECK(found);
  const std::string csv = testutil::read_file(dir / "m.csv");
  CHECK(csv.find("0.114000") != std::string::npos);
  CHECK(csv.find("-0.114000") != std::string::npos);
}

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biaxis/metrics.hpp"
#include "biaxis/promptgrid.hpp"
#include "biaxis/stats.hpp"

namespace biaxis {

// A reported rate always travels with its exact counts and a Wilson CI.
struct RateCell {
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;
  double value = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 1.0;
};

struct AuditRow {
  std::string key;            // model id, condition id, or cell id
  std::int64_t n_sel = 0;     // responses with a non-Abstain selection
  std::int64_t n_elab = 0;    // divergence-eligible base (the denominator)
  RateCell ber_sel;
  RateCell ber_elab;
  RateCell ber_cor;
  RateCell ber_union;
  RateCell ir;
  double dni = 0.0;           // signed, no Wilson interval
  std::optional<double> normalized_ir;
};

struct CellMapEntry {
  std::string condition_id;
  std::int64_t n = 0;
  double dni = 0.0;
  // Sign differs from the baseline cell's DNI sign. A DNI of exactly
  // zero is signless: it never flips and is never flipped against.
  bool sign_flipped = false;
};

struct EffectRow {
  std::string factor;
  double eta_squared = 0.0;
  std::string kind;  // "main" or "two_way"
  std::string outcome;  // which binary mask the decomposition ran on
};

struct ReportMetadata {
  std::string grid_kind;
  std::vector<std::string> models;
  std::vector<std::string> judges;
  std::string baseline_cell;
  double ci_level = 0.95;
  std::string denominator_policy =
      "all split-coding rates are computed on the divergence-eligible base "
      "(both layers non-Abstain); the pooled row is response-weighted, "
      "per-key rows are independent";
  std::string effect_size_policy =
      "effect sizes use a one-way/two-way variance decomposition of a binary "
      "outcome mask over all coded responses (Abstain contributes 0): the "
      "union mask sel=E or elab in {E,QE} for main effects, the selection "
      "mask sel=E for interaction tables";
  std::string token_policy =
      "token cost is the mean of prompt_tokens + completion_tokens per "
      "request as recorded in the ledger";
};

struct AuditReportDocument {
  ReportMetadata metadata;
  std::vector<AuditRow> per_model;
  AuditRow pooled;  // response-weighted over every eligible record
  std::vector<AuditRow> per_condition;
  std::vector<CellMapEntry> cell_map;
  std::vector<EffectRow> effect_sizes;
  std::vector<std::string> warnings;
};

struct ReportOptions {
  double ci_level = 0.95;
  std::vector<std::string> judges;  // metadata only
};

// Aggregates coded runs into the audit report: per-model and
// per-condition decomposition rows, the DNI cell map with sign-flip
// flags against the baseline cell, and the factor effect-size table.
// Throws MetricError when the baseline cell is absent from the grid.
AuditReportDocument audit_report(std::span<const CodedResponse> coded,
                                 const GridDesign& grid,
                                 const std::string& baseline_cell,
                                 const ReportOptions& opts = {});

void write_report_json(const AuditReportDocument& doc,
                       const std::filesystem::path& path);
// Writes per_model.csv, per_condition.csv, cell_map.csv,
// effect_sizes.csv into `dir`.
void write_report_csv(const AuditReportDocument& doc,
                      const std::filesystem::path& dir);
// Presentation-only charts: ber_union_by_condition.svg and
// ir_dni_map.svg, both derived from the report tables.
void write_report_svg(const AuditReportDocument& doc,
                      const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Mitigation comparison
// ---------------------------------------------------------------------------

struct MitigationConfig {
  std::string name;
  double ber_sel = 0.0;
  std::optional<double> ber_elab;
  std::optional<double> dni;
  double mean_tokens = 0.0;
};

struct MitigationRow {
  MitigationConfig config;
  bool is_baseline = false;
  // baseline - configuration; positive means the intervention reduced
  // the rate. The paper-style signed column config - baseline is
  // exported alongside as `ber_sel_minus_baseline`.
  double delta_ber_sel = 0.0;
  std::optional<double> delta_ber_elab;
  bool frontier_member = false;
  std::vector<std::string> dominated_by;
  // Baseline only: every frontier member strictly improves the bias
  // axis, i.e. the baseline is dominated on bias.
  bool bias_dominated = false;
  // Selection rate collapses to ~0 while the elaboration rate stays at
  // the baseline level: the bias moved layers instead of shrinking.
  bool layer_rerouting = false;
  bool dni_sign_flipped = false;
  bool co_reduction = false;  // both layers reduced, no DNI flip
};

struct MitigationOptions {
  // ber_sel at or below this counts as "driven to zero".
  double sel_floor = 0.02;
  // |config elab - baseline elab| within this counts as "unchanged".
  double elab_tolerance = 0.02;
};

struct MitigationComparison {
  std::string baseline;
  std::vector<MitigationRow> rows;       // baseline first, then by ber_sel
  std::vector<std::string> frontier;     // mutually non-dominated, by ber_sel
  MitigationOptions options;
};

// Pareto analysis over (ber_sel down, tokens down) among the candidate
// (non-baseline) configurations; the declared baseline is the reference
// point interventions are measured against, not a frontier candidate.
// Throws MetricError when fewer than two configurations are given or the
// baseline is missing.
MitigationComparison mitigation_compare(std::span<const MitigationConfig> configs,
                                        const std::string& baseline_name,
                                        const MitigationOptions& opts = {});

// Builds one configuration row from a coded run. Mitigation rates use
// per-layer bases (ber_sel over non-Abstain selections, ber_elab over
// non-Abstain elaborations) so free-response configurations report
// ber_sel = 0 instead of an empty joint base; DNI still comes from the
// divergence-eligible base when one exists.
MitigationConfig mitigation_config_from_coded(const std::string& name,
                                              std::span<const CodedResponse> coded,
                                              double mean_tokens);

void write_mitigation_json(const MitigationComparison& cmp,
                           const std::filesystem::path& path);
void write_mitigation_csv(const MitigationComparison& cmp,
                          const std::filesystem::path& path);

}  // namespace biaxis

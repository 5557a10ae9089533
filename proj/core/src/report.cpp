#include "biaxis/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "biaxis/errors.hpp"
#include "biaxis/jsonl.hpp"

namespace biaxis {

namespace {

RateCell make_rate(std::int64_t k, std::int64_t n, double level) {
  RateCell cell;
  cell.numerator = k;
  cell.denominator = n;
  cell.value = n > 0 ? static_cast<double>(k) / static_cast<double>(n) : 0.0;
  if (n > 0) {
    const auto ci = stats::wilson_interval(k, n, level);
    cell.ci_lower = ci.lower;
    cell.ci_upper = ci.upper;
  }
  return cell;
}

AuditRow make_row(const std::string& key, const JointCounts& counts,
                  std::int64_t n_sel, double level) {
  AuditRow row;
  row.key = key;
  row.n_sel = n_sel;
  row.n_elab = counts.n();
  const std::int64_t n = counts.n();
  row.ber_cor = make_rate(counts.n11, n, level);
  row.ber_sel = make_rate(counts.n11 + counts.n10, n, level);
  row.ber_elab = make_rate(counts.n11 + counts.n01, n, level);
  row.ber_union = make_rate(counts.n11 + counts.n10 + counts.n01, n, level);
  row.ir = make_rate(counts.n10 + counts.n01, n, level);
  if (n > 0) {
    row.dni = static_cast<double>(counts.n10 - counts.n01) / static_cast<double>(n);
    const std::int64_t union_count = counts.n11 + counts.n10 + counts.n01;
    if (union_count > 0) {
      row.normalized_ir = static_cast<double>(counts.n10 + counts.n01) /
                          static_cast<double>(union_count);
    }
  }
  return row;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

AuditReportDocument audit_report(std::span<const CodedResponse> coded,
                                 const GridDesign& grid,
                                 const std::string& baseline_cell,
                                 const ReportOptions& opts) {
  if (grid.find(baseline_cell) == nullptr) {
    throw MetricError("baseline cell '" + baseline_cell +
                      "' is not a condition of the grid");
  }
  if (coded.empty()) {
    throw MetricError("no coded responses to report on");
  }

  AuditReportDocument doc;
  doc.metadata.baseline_cell = baseline_cell;
  doc.metadata.ci_level = opts.ci_level;
  doc.metadata.judges = opts.judges;
  switch (grid.kind) {
    case GridDesign::Kind::OAT: doc.metadata.grid_kind = "oat"; break;
    case GridDesign::Kind::InteractionSubFactorial:
      doc.metadata.grid_kind = "interaction";
      break;
    case GridDesign::Kind::Custom: doc.metadata.grid_kind = "custom"; break;
  }

  struct Acc {
    JointCounts counts;
    std::int64_t n_sel = 0;
  };
  std::map<std::string, Acc> by_model;
  std::map<std::string, Acc> by_condition;
  Acc pooled;

  for (const auto& r : coded) {
    auto& m = by_model[r.model_id];
    auto& c = by_condition[r.condition_id];
    if (r.sel != StanceLabel::Abstain) {
      ++m.n_sel;
      ++c.n_sel;
      ++pooled.n_sel;
    }
    if (!r.divergence_eligible()) continue;
    for (Acc* acc : {&m, &c, &pooled}) {
      if (r.a()) {
        r.b() ? ++acc->counts.n11 : ++acc->counts.n10;
      } else {
        r.b() ? ++acc->counts.n01 : ++acc->counts.n00;
      }
    }
  }
  if (pooled.counts.n() == 0) {
    throw MetricError("no divergence-eligible responses in the coded runs");
  }

  for (const auto& [model, acc] : by_model) {
    doc.metadata.models.push_back(model);
    if (acc.counts.n() == 0) {
      doc.warnings.push_back("model '" + model +
                             "' has no divergence-eligible responses; row omitted");
      continue;
    }
    doc.per_model.push_back(make_row(model, acc.counts, acc.n_sel, opts.ci_level));
  }
  doc.pooled = make_row("pooled", pooled.counts, pooled.n_sel, opts.ci_level);

  for (const auto& [condition, acc] : by_condition) {
    if (grid.find(condition) == nullptr) {
      doc.warnings.push_back("condition '" + condition +
                             "' is not part of the declared grid");
    }
    if (acc.counts.n() == 0) {
      doc.warnings.push_back("condition '" + condition +
                             "' has no divergence-eligible responses; row omitted");
      continue;
    }
    doc.per_condition.push_back(
        make_row(condition, acc.counts, acc.n_sel, opts.ci_level));
  }

  // DNI cell map with sign flips against the baseline cell. Zero is
  // signless: a zero baseline flags nothing, a zero cell never flags.
  std::optional<double> baseline_dni;
  for (const auto& row : doc.per_condition) {
    if (row.key == baseline_cell) baseline_dni = row.dni;
  }
  if (!baseline_dni) {
    doc.warnings.push_back("baseline cell '" + baseline_cell +
                           "' has no eligible responses; sign flips not computed");
  }
  for (const auto& row : doc.per_condition) {
    CellMapEntry entry;
    entry.condition_id = row.key;
    entry.n = row.n_elab;
    entry.dni = row.dni;
    if (baseline_dni) {
      const int base_sign = sign_of(*baseline_dni);
      const int cell_sign = sign_of(row.dni);
      entry.sign_flipped =
          base_sign != 0 && cell_sign != 0 && base_sign != cell_sign;
    }
    doc.cell_map.push_back(entry);
  }

  // Effect sizes. Outcomes are binary masks over every coded response
  // (Abstain contributes 0) so designs stay balanced by construction.
  std::map<std::string, const PromptCondition*> condition_index;
  for (const auto& c : grid.conditions) {
    condition_index[c.condition_id] = &c;
  }
  std::vector<double> union_mask, sel_mask;
  std::vector<std::string> task_level, persp_level, role_level, sent_level;
  std::vector<const CodedResponse*> gridded;
  for (const auto& r : coded) {
    auto it = condition_index.find(r.condition_id);
    if (it == condition_index.end()) continue;
    gridded.push_back(&r);
    const PromptCondition& c = *it->second;
    union_mask.push_back(
        (r.sel == StanceLabel::E || is_endorsement(r.elab)) ? 1.0 : 0.0);
    sel_mask.push_back(r.sel == StanceLabel::E ? 1.0 : 0.0);
    task_level.push_back(to_string(c.task));
    persp_level.push_back(to_string(c.perspective));
    role_level.push_back(to_string(c.role));
    sent_level.push_back(to_string(c.sentiment));
  }

  struct Factor {
    const char* name;
    const std::vector<std::string>* levels;
  };
  const std::vector<Factor> factors = {{"task", &task_level},
                                       {"perspective", &persp_level},
                                       {"role", &role_level},
                                       {"sentiment", &sent_level}};

  auto push_effect = [&](const stats::EffectSize& e, const std::string& kind,
                         const std::string& outcome) {
    doc.effect_sizes.push_back({e.factor, e.eta_squared, kind, outcome});
  };

  if (grid.kind == GridDesign::Kind::OAT) {
    // Non-task factors are evaluated within their own OAT slice: the
    // sweep conditions plus the shared baseline.
    for (const auto& factor : factors) {
      std::vector<double> y;
      std::vector<std::string> level;
      for (std::size_t i = 0; i < gridded.size(); ++i) {
        const PromptCondition& c = *condition_index[gridded[i]->condition_id];
        bool in_slice = false;
        if (std::string_view(factor.name) == "task") {
          in_slice = c.perspective == Perspective::Self && c.role == Role::None &&
                     c.sentiment == Sentiment::Neutral;
        } else if (std::string_view(factor.name) == "perspective") {
          in_slice = c.task == TaskFormat::BJ && c.role == Role::None &&
                     c.sentiment == Sentiment::Neutral;
        } else if (std::string_view(factor.name) == "role") {
          in_slice = c.task == TaskFormat::BJ && c.perspective == Perspective::Self &&
                     c.sentiment == Sentiment::Neutral;
        } else {
          in_slice = c.task == TaskFormat::BJ && c.perspective == Perspective::Self &&
                     c.role == Role::None;
        }
        if (in_slice) {
          y.push_back(union_mask[i]);
          level.push_back((*factor.levels)[i]);
        }
      }
      std::set<std::string> distinct(level.begin(), level.end());
      if (distinct.size() >= 2) {
        push_effect(stats::eta_squared_oneway(y, level, factor.name), "main",
                    "union");
      }
    }
  } else if (grid.kind == GridDesign::Kind::InteractionSubFactorial &&
             !gridded.empty()) {
    for (const auto& factor : factors) {
      std::set<std::string> distinct(factor.levels->begin(), factor.levels->end());
      if (distinct.size() >= 2) {
        push_effect(stats::eta_squared_oneway(sel_mask, *factor.levels, factor.name),
                    "main", "selection");
      }
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
      for (std::size_t j = i + 1; j < factors.size(); ++j) {
        std::set<std::string> d1(factors[i].levels->begin(),
                                 factors[i].levels->end());
        std::set<std::string> d2(factors[j].levels->begin(),
                                 factors[j].levels->end());
        if (d1.size() < 2 || d2.size() < 2) continue;
        auto effects = stats::eta_squared_twoway(sel_mask, *factors[i].levels,
                                                 *factors[j].levels,
                                                 factors[i].name, factors[j].name);
        push_effect(effects.interaction, "two_way", "selection");
      }
    }
  }

  return doc;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

jsonl::json rate_to_json(const RateCell& cell) {
  return {{"value", cell.value},
          {"numerator", cell.numerator},
          {"denominator", cell.denominator},
          {"ci_lower", cell.ci_lower},
          {"ci_upper", cell.ci_upper}};
}

jsonl::json row_to_json(const AuditRow& row) {
  jsonl::json out{{"key", row.key},
                  {"n_sel", row.n_sel},
                  {"n_elab", row.n_elab},
                  {"BER_sel", rate_to_json(row.ber_sel)},
                  {"BER_elab", rate_to_json(row.ber_elab)},
                  {"BER_cor", rate_to_json(row.ber_cor)},
                  {"BER_union", rate_to_json(row.ber_union)},
                  {"IR", rate_to_json(row.ir)},
                  {"DNI", row.dni}};
  if (row.normalized_ir) out["IR_over_BER_union"] = *row.normalized_ir;
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  out << text;
  if (!out) {
    throw ParseError("cannot write " + path.string());
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string rows_csv(const std::vector<AuditRow>& rows, const AuditRow* pooled,
                     const char* key_name) {
  std::string csv = std::string(key_name) +
      ",n_sel,n_elab,BER_sel,BER_elab,BER_cor,BER_union,IR,DNI,"
      "IR_over_BER_union,BER_union_ci_lower,BER_union_ci_upper\n";
  auto emit = [&](const AuditRow& r) {
    csv += csv_escape(r.key) + "," + std::to_string(r.n_sel) + "," +
           std::to_string(r.n_elab) + "," + fmt(r.ber_sel.value) + "," +
           fmt(r.ber_elab.value) + "," + fmt(r.ber_cor.value) + "," +
           fmt(r.ber_union.value) + "," + fmt(r.ir.value) + "," + fmt(r.dni) + "," +
           (r.normalized_ir ? fmt(*r.normalized_ir) : std::string("")) + "," +
           fmt(r.ber_union.ci_lower) + "," + fmt(r.ber_union.ci_upper) + "\n";
  };
  for (const auto& r : rows) emit(r);
  if (pooled != nullptr) emit(*pooled);
  return csv;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_report_json(const AuditReportDocument& doc,
                       const std::filesystem::path& path) {
  jsonl::json meta{{"grid_kind", doc.metadata.grid_kind},
                   {"models", doc.metadata.models},
                   {"judges", doc.metadata.judges},
                   {"baseline_cell", doc.metadata.baseline_cell},
                   {"ci_level", doc.metadata.ci_level},
                   {"ci_method", "wilson"},
                   {"denominator_policy", doc.metadata.denominator_policy},
                   {"effect_size_policy", doc.metadata.effect_size_policy},
                   {"token_policy", doc.metadata.token_policy},
                   {"per_model_aggregation",
                    "rows are per-model; 'pooled' is response-weighted over all "
                    "eligible responses, not an unweighted per-model mean"}};
  jsonl::json models = jsonl::json::array();
  for (const auto& r : doc.per_model) models.push_back(row_to_json(r));
  jsonl::json conditions = jsonl::json::array();
  for (const auto& r : doc.per_condition) conditions.push_back(row_to_json(r));
  jsonl::json cells = jsonl::json::array();
  for (const auto& c : doc.cell_map) {
    cells.push_back({{"condition_id", c.condition_id},
                     {"n", c.n},
                     {"DNI", c.dni},
                     {"sign_flipped", c.sign_flipped}});
  }
  jsonl::json effects = jsonl::json::array();
  for (const auto& e : doc.effect_sizes) {
    effects.push_back({{"factor", e.factor},
                       {"eta_squared", e.eta_squared},
                       {"kind", e.kind},
                       {"outcome", e.outcome}});
  }
  jsonl::json out{{"metadata", std::move(meta)},
                  {"per_model", std::move(models)},
                  {"pooled", row_to_json(doc.pooled)},
                  {"per_condition", std::move(conditions)},
                  {"cell_map", std::move(cells)},
                  {"effect_sizes", std::move(effects)},
                  {"warnings", doc.warnings}};
  write_text(path, out.dump(2) + "\n");
}

void write_report_csv(const AuditReportDocument& doc,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "per_model.csv", rows_csv(doc.per_model, &doc.pooled, "model"));
  write_text(dir / "per_condition.csv",
             rows_csv(doc.per_condition, nullptr, "condition"));
  std::string cells = "condition,n,DNI,sign_flipped\n";
  for (const auto& c : doc.cell_map) {
    cells += csv_escape(c.condition_id) + "," + std::to_string(c.n) + "," +
             fmt(c.dni) + "," + (c.sign_flipped ? "true" : "false") + "\n";
  }
  write_text(dir / "cell_map.csv", cells);
  std::string effects = "factor,kind,outcome,eta_squared\n";
  for (const auto& e : doc.effect_sizes) {
    effects += csv_escape(e.factor) + "," + e.kind + "," + e.outcome + "," +
               fmt(e.eta_squared) + "\n";
  }
  write_text(dir / "effect_sizes.csv", effects);
}

void write_report_svg(const AuditReportDocument& doc,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  {
    // Horizontal bars of BER_union per condition.
    const int bar_h = 18, gap = 4, label_w = 170, chart_w = 420;
    const int height =
        20 + static_cast<int>(doc.per_condition.size()) * (bar_h + gap);
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
        std::to_string(label_w + chart_w + 60) + "\" height=\"" +
        std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    int y = 10;
    for (const auto& row : doc.per_condition) {
      const int w = static_cast<int>(row.ber_union.value * chart_w);
      svg += "<text x=\"" + std::to_string(label_w - 6) + "\" y=\"" +
             std::to_string(y + bar_h - 5) + "\" text-anchor=\"end\">" +
             xml_escape(row.key) + "</text>\n";
      svg += "<rect x=\"" + std::to_string(label_w) + "\" y=\"" +
             std::to_string(y) + "\" width=\"" + std::to_string(w) +
             "\" height=\"" + std::to_string(bar_h) + "\" fill=\"#4878cf\"/>\n";
      svg += "<text x=\"" + std::to_string(label_w + w + 4) + "\" y=\"" +
             std::to_string(y + bar_h - 5) + "\">" + fmt(row.ber_union.value) +
             "</text>\n";
      y += bar_h + gap;
    }
    svg += "</svg>\n";
    write_text(dir / "ber_union_by_condition.svg", svg);
  }

  {
    // IR/DNI reliability map per model.
    const int w = 460, h = 360, ml = 60, mb = 40;
    double max_ir = 0.1;
    for (const auto& row : doc.per_model) max_ir = std::max(max_ir, row.ir.value);
    max_ir *= 1.15;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(w + 140) + "\" height=\"" + std::to_string(h) +
                      "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    const int x0 = ml, y_mid = (h - mb) / 2;
    svg += "<line x1=\"" + std::to_string(x0) + "\" y1=\"10\" x2=\"" +
           std::to_string(x0) + "\" y2=\"" + std::to_string(h - mb) +
           "\" stroke=\"#333\"/>\n";
    svg += "<line x1=\"" + std::to_string(x0) + "\" y1=\"" + std::to_string(y_mid) +
           "\" x2=\"" + std::to_string(w) + "\" y2=\"" + std::to_string(y_mid) +
           "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    svg += "<text x=\"" + std::to_string(w / 2) + "\" y=\"" +
           std::to_string(h - 10) + "\">IR</text>\n";
    svg += "<text x=\"10\" y=\"" + std::to_string(y_mid - 6) + "\">DNI</text>\n";
    for (const auto& row : doc.per_model) {
      const double px = x0 + (row.ir.value / max_ir) * (w - x0 - 10);
      const double py = y_mid - row.dni * (y_mid - 15);
      svg += "<circle cx=\"" + fmt(px) + "\" cy=\"" + fmt(py) +
             "\" r=\"5\" fill=\"#c0504d\" fill-opacity=\"0.8\"/>\n";
      svg += "<text x=\"" + fmt(px + 7) + "\" y=\"" + fmt(py + 4) + "\">" +
             xml_escape(row.key) + "</text>\n";
    }
    svg += "</svg>\n";
    write_text(dir / "ir_dni_map.svg", svg);
  }
}

// ---------------------------------------------------------------------------
// Mitigation
// ---------------------------------------------------------------------------

MitigationComparison mitigation_compare(std::span<const MitigationConfig> configs,
                                        const std::string& baseline_name,
                                        const MitigationOptions& opts) {
  if (configs.size() < 2) {
    throw MetricError("mitigation comparison needs at least two configurations");
  }
  const MitigationConfig* baseline = nullptr;
  for (const auto& c : configs) {
    if (c.name == baseline_name) baseline = &c;
  }
  if (baseline == nullptr) {
    throw MetricError("baseline configuration '" + baseline_name +
                      "' is not among the configurations");
  }

  MitigationComparison cmp;
  cmp.baseline = baseline_name;
  cmp.options = opts;

  std::vector<const MitigationConfig*> candidates;
  for (const auto& c : configs) {
    if (c.name != baseline_name) candidates.push_back(&c);
  }

  auto dominates = [](const MitigationConfig& x, const MitigationConfig& y) {
    const bool no_worse =
        x.ber_sel <= y.ber_sel && x.mean_tokens <= y.mean_tokens;
    const bool better =
        x.ber_sel < y.ber_sel || x.mean_tokens < y.mean_tokens;
    return no_worse && better;
  };

  std::map<std::string, std::vector<std::string>> dominated_by;
  for (const auto* y : candidates) {
    for (const auto* x : candidates) {
      if (x != y && dominates(*x, *y)) {
        dominated_by[y->name].push_back(x->name);
      }
    }
  }

  std::vector<const MitigationConfig*> frontier;
  for (const auto* c : candidates) {
    if (dominated_by[c->name].empty()) frontier.push_back(c);
  }
  std::sort(frontier.begin(), frontier.end(),
            [](const MitigationConfig* a, const MitigationConfig* b) {
              return a->ber_sel < b->ber_sel;
            });
  for (const auto* c : frontier) cmp.frontier.push_back(c->name);

  const bool baseline_bias_dominated =
      std::any_of(frontier.begin(), frontier.end(),
                  [&](const MitigationConfig* c) {
                    return c->ber_sel < baseline->ber_sel;
                  });

  auto build_row = [&](const MitigationConfig& c) {
    MitigationRow row;
    row.config = c;
    row.is_baseline = c.name == baseline_name;
    row.delta_ber_sel = baseline->ber_sel - c.ber_sel;
    if (c.ber_elab && baseline->ber_elab) {
      row.delta_ber_elab = *baseline->ber_elab - *c.ber_elab;
    }
    if (!row.is_baseline) {
      row.frontier_member = dominated_by[c.name].empty();
      row.dominated_by = dominated_by[c.name];
      if (c.ber_elab && baseline->ber_elab) {
        row.layer_rerouting =
            c.ber_sel <= opts.sel_floor &&
            std::abs(*c.ber_elab - *baseline->ber_elab) <= opts.elab_tolerance;
      }
      if (c.dni && baseline->dni) {
        const int s0 = sign_of(*baseline->dni);
        const int s1 = sign_of(*c.dni);
        row.dni_sign_flipped = s0 != 0 && s1 != 0 && s0 != s1;
      }
      row.co_reduction = row.delta_ber_sel > 0.0 && row.delta_ber_elab &&
                         *row.delta_ber_elab > 0.0 && !row.dni_sign_flipped;
    } else {
      row.bias_dominated = baseline_bias_dominated;
    }
    return row;
  };

  cmp.rows.push_back(build_row(*baseline));
  std::vector<const MitigationConfig*> ordered = candidates;
  std::sort(ordered.begin(), ordered.end(),
            [](const MitigationConfig* a, const MitigationConfig* b) {
              return a->ber_sel < b->ber_sel;
            });
  for (const auto* c : ordered) cmp.rows.push_back(build_row(*c));
  return cmp;
}

MitigationConfig mitigation_config_from_coded(const std::string& name,
                                              std::span<const CodedResponse> coded,
                                              double mean_tokens) {
  MitigationConfig cfg;
  cfg.name = name;
  cfg.mean_tokens = mean_tokens;
  std::int64_t sel_base = 0, sel_hits = 0;
  std::int64_t elab_base = 0, elab_hits = 0;
  JointCounts joint;
  for (const auto& r : coded) {
    if (r.sel != StanceLabel::Abstain) {
      ++sel_base;
      if (r.sel == StanceLabel::E) ++sel_hits;
    }
    if (r.elab != StanceLabel::Abstain) {
      ++elab_base;
      if (is_endorsement(r.elab)) ++elab_hits;
    }
    if (r.divergence_eligible()) {
      if (r.a()) {
        r.b() ? ++joint.n11 : ++joint.n10;
      } else {
        r.b() ? ++joint.n01 : ++joint.n00;
      }
    }
  }
  // Free-response configurations have no selection layer at all; their
  // surface rate is zero by construction.
  cfg.ber_sel = sel_base > 0
                    ? static_cast<double>(sel_hits) / static_cast<double>(sel_base)
                    : 0.0;
  if (elab_base > 0) {
    cfg.ber_elab =
        static_cast<double>(elab_hits) / static_cast<double>(elab_base);
  }
  if (joint.n() > 0) {
    cfg.dni = to_double(reliability(joint).dni);
  }
  return cfg;
}

void write_mitigation_json(const MitigationComparison& cmp,
                           const std::filesystem::path& path) {
  jsonl::json rows = jsonl::json::array();
  for (const auto& r : cmp.rows) {
    jsonl::json row{{"name", r.config.name},
                    {"BER_sel", r.config.ber_sel},
                    {"mean_tokens", r.config.mean_tokens},
                    {"is_baseline", r.is_baseline},
                    {"delta_BER_sel", r.delta_ber_sel},
                    {"BER_sel_minus_baseline", -r.delta_ber_sel},
                    {"frontier_member", r.frontier_member},
                    {"layer_rerouting", r.layer_rerouting},
                    {"dni_sign_flipped", r.dni_sign_flipped},
                    {"co_reduction", r.co_reduction}};
    if (r.config.ber_elab) row["BER_elab"] = *r.config.ber_elab;
    if (r.config.dni) row["DNI"] = *r.config.dni;
    if (r.delta_ber_elab) row["delta_BER_elab"] = *r.delta_ber_elab;
    if (r.is_baseline) {
      row["bias_dominated"] = r.bias_dominated;
    } else if (!r.dominated_by.empty()) {
      row["dominated_by"] = r.dominated_by;
    }
    rows.push_back(std::move(row));
  }
  jsonl::json out{{"baseline", cmp.baseline},
                  {"frontier", cmp.frontier},
                  {"delta_convention",
                   "delta_BER_sel = baseline - configuration; positive means the "
                   "intervention reduced the rate"},
                  {"frontier_convention",
                   "non-dominated configurations over (BER_sel down, tokens "
                   "down) among non-baseline candidates; the baseline is "
                   "bias_dominated when every frontier member improves BER_sel"},
                  {"options",
                   {{"sel_floor", cmp.options.sel_floor},
                    {"elab_tolerance", cmp.options.elab_tolerance}}},
                  {"rows", std::move(rows)}};
  write_text(path, out.dump(2) + "\n");
}

void write_mitigation_csv(const MitigationComparison& cmp,
                          const std::filesystem::path& path) {
  std::string csv =
      "name,BER_sel,BER_elab,DNI,mean_tokens,delta_BER_sel,"
      "BER_sel_minus_baseline,frontier_member,layer_rerouting,"
      "dni_sign_flipped,co_reduction,is_baseline\n";
  for (const auto& r : cmp.rows) {
    csv += csv_escape(r.config.name) + "," + fmt(r.config.ber_sel) + "," +
           (r.config.ber_elab ? fmt(*r.config.ber_elab) : std::string("")) + "," +
           (r.config.dni ? fmt(*r.config.dni) : std::string("")) + "," +
           fmt(r.config.mean_tokens) + "," + fmt(r.delta_ber_sel) + "," +
           fmt(-r.delta_ber_sel) + "," + (r.frontier_member ? "true" : "false") +
           "," + (r.layer_rerouting ? "true" : "false") + "," +
           (r.dni_sign_flipped ? "true" : "false") + "," +
           (r.co_reduction ? "true" : "false") + "," +
           (r.is_baseline ? "true" : "false") + "\n";
  }
  write_text(path, csv);
}

}  // namespace biaxis

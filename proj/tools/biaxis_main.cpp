// biaxis: audit pipeline CLI.
// Subcommands: grid, run, code, metrics, report, simulate, kappa, mitigate.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "biaxis/collector.hpp"
#include "biaxis/corpus.hpp"
#include "biaxis/errors.hpp"
#include "biaxis/metrics.hpp"
#include "biaxis/promptgrid.hpp"
#include "biaxis/report.hpp"
#include "biaxis/splitcoder.hpp"
#include "biaxis/stats.hpp"
#include "biaxis/synthoracle.hpp"

namespace {

using json = nlohmann::json;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

biaxis::GridDesign grid_from_flags(const std::string& design,
                                   const std::string& tasks,
                                   const std::string& perspectives,
                                   const std::string& roles,
                                   const std::string& sentiments) {
  if (design == "oat") {
    return biaxis::build_oat_grid();
  }
  if (design != "interaction") {
    throw biaxis::ParseError("unknown design '" + design + "' (oat|interaction)");
  }
  std::vector<biaxis::TaskFormat> t;
  for (const auto& s : split_csv(tasks)) t.push_back(biaxis::task_from_string(s));
  std::vector<biaxis::Perspective> p;
  for (const auto& s : split_csv(perspectives)) {
    p.push_back(biaxis::perspective_from_string(s));
  }
  std::vector<biaxis::Role> r;
  for (const auto& s : split_csv(roles)) r.push_back(biaxis::role_from_string(s));
  std::vector<biaxis::Sentiment> m;
  for (const auto& s : split_csv(sentiments)) {
    m.push_back(biaxis::sentiment_from_string(s));
  }
  return biaxis::build_interaction_grid(t, p, r, m);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw biaxis::ParseError("cannot open file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_slice_row(const std::string& key, const biaxis::SliceMetrics& m) {
  std::printf("%-28s %8lld  %7.4f %7.4f %7.4f %7.4f  %7.4f %+8.4f", key.c_str(),
              static_cast<long long>(m.quadruple.n),
              biaxis::to_double(m.quadruple.ber_sel),
              biaxis::to_double(m.quadruple.ber_elab),
              biaxis::to_double(m.quadruple.ber_cor),
              biaxis::to_double(m.quadruple.ber_union),
              biaxis::to_double(m.reliability.ir),
              biaxis::to_double(m.reliability.dni));
  if (m.reliability.normalized_ir) {
    std::printf("  %7.4f", biaxis::to_double(*m.reliability.normalized_ir));
  } else {
    std::printf("  %7s", "-");
  }
  std::printf("\n");
}

json slice_to_json(const biaxis::SliceMetrics& m) {
  json out{{"n", m.quadruple.n},
           {"BER_sel", biaxis::to_double(m.quadruple.ber_sel)},
           {"BER_elab", biaxis::to_double(m.quadruple.ber_elab)},
           {"BER_cor", biaxis::to_double(m.quadruple.ber_cor)},
           {"BER_union", biaxis::to_double(m.quadruple.ber_union)},
           {"OED", biaxis::to_double(m.reliability.oed)},
           {"UED", biaxis::to_double(m.reliability.ued)},
           {"IR", biaxis::to_double(m.reliability.ir)},
           {"DNI", biaxis::to_double(m.reliability.dni)}};
  if (m.reliability.normalized_ir) {
    out["IR_over_BER_union"] = biaxis::to_double(*m.reliability.normalized_ir);
  }
  return out;
}

// --- grid ------------------------------------------------------------------

struct GridArgs {
  std::string design = "oat";
  std::string corpus_path;
  std::string templates_path;
  std::string emit_path;
  std::string scaffold_path;
  int paraphrases = 0;  // 0 = design default
  std::string tasks = "BJ,SC,CTO";
  std::string perspectives = "self,others";
  std::string roles = "none,sociologist";
  std::string sentiments = "neutral,skeptical";
};

int run_grid(const GridArgs& args) {
  auto grid = grid_from_flags(args.design, args.tasks, args.perspectives,
                              args.roles, args.sentiments);
  const int default_depth = args.design == "oat" ? 20 : 1;
  const int depth = args.paraphrases > 0 ? args.paraphrases : default_depth;

  if (!args.scaffold_path.empty()) {
    auto pool = biaxis::scaffold_pool(grid, depth);
    pool.save(args.scaffold_path);
    std::printf("wrote scaffold pool for %zu conditions to %s\n",
                grid.conditions.size(), args.scaffold_path.c_str());
    return 0;
  }

  if (args.corpus_path.empty() || args.emit_path.empty()) {
    throw biaxis::ParseError("grid needs --corpus and --emit (or --scaffold-pool)");
  }
  auto corpus = biaxis::load_corpus(args.corpus_path);
  biaxis::ParaphrasePool pool = args.templates_path.empty()
                                    ? biaxis::scaffold_pool(grid, depth)
                                    : biaxis::ParaphrasePool::load(args.templates_path);
  auto templates = biaxis::instantiate_templates(grid, pool, depth);
  auto manifest = biaxis::build_manifest(templates, corpus);
  biaxis::save_manifest(manifest, args.emit_path);
  std::printf("design=%s conditions=%zu templates=%zu statements=%zu instances=%zu\n",
              args.design.c_str(), grid.conditions.size(), templates.size(),
              corpus.size(), manifest.size());
  return 0;
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string grid_path;
  std::string model_path;
  std::string ledger_path;
  int parallel = 4;
  int draws = 1;
  int retries = 3;
  int timeout_ms = 30000;
  std::uint64_t seed = 0;
  double rate_limit = 0.0;
  bool resume = false;
};

int run_run(const RunArgs& args) {
  if (std::filesystem::exists(args.ledger_path) && !args.resume) {
    throw biaxis::CampaignError("ledger " + args.ledger_path +
                                " already exists; pass --resume to continue it");
  }
  auto manifest = biaxis::load_manifest(args.grid_path);
  auto model = biaxis::ModelSpec::load(args.model_path);
  biaxis::RunConfig cfg;
  cfg.draws_per_prompt = args.draws;
  cfg.max_parallel = args.parallel;
  cfg.retry_budget = args.retries;
  cfg.timeout = std::chrono::milliseconds(args.timeout_ms);
  cfg.seed = args.seed;
  cfg.requests_per_second = args.rate_limit;

  biaxis::RunLedger ledger(args.ledger_path);
  auto stats = biaxis::collect(manifest, model, cfg, ledger);
  std::printf("model=%s issued=%lld skipped=%lld failed=%lld ledger=%s\n",
              model.model_id.c_str(), static_cast<long long>(stats.issued),
              static_cast<long long>(stats.skipped),
              static_cast<long long>(stats.failed), args.ledger_path.c_str());
  return 0;
}

// --- code ------------------------------------------------------------------

struct CodeArgs {
  std::string ledger_path;
  std::string panel_spec;
  std::string out_path;
  std::string judge_template_path;
  int min_verdicts = 2;
};

int run_code(const CodeArgs& args) {
  auto records = biaxis::RunLedger::read(args.ledger_path);
  const std::string tmpl = args.judge_template_path.empty()
                               ? biaxis::default_judge_template()
                               : read_file(args.judge_template_path);
  auto panel = biaxis::make_panel(split_csv(args.panel_spec), tmpl);
  biaxis::CodingOptions opts;
  opts.min_verdicts = args.min_verdicts;
  auto coded = biaxis::code_ledger(records, panel, opts);
  biaxis::save_coded(coded, args.out_path);
  std::int64_t eligible = 0;
  for (const auto& c : coded) {
    if (c.divergence_eligible()) ++eligible;
  }
  std::printf("coded=%zu eligible=%lld out=%s\n", coded.size(),
              static_cast<long long>(eligible), args.out_path.c_str());
  return 0;
}

// --- metrics ---------------------------------------------------------------

struct MetricsArgs {
  std::vector<std::string> coded_paths;
  std::string group_by = "condition";
  std::string out_json;
  std::string out_csv;
  bool qe_folding = false;
};

int run_metrics(const MetricsArgs& args) {
  std::vector<biaxis::CodedResponse> coded;
  for (const auto& path : args.coded_paths) {
    auto part = biaxis::load_coded(path);
    coded.insert(coded.end(), part.begin(), part.end());
  }
  const auto key = biaxis::group_key_from_string(args.group_by);
  auto slices = biaxis::slice_metrics(coded, key);

  std::printf("%-28s %8s  %7s %7s %7s %7s  %7s %8s  %7s\n", args.group_by.c_str(),
              "n", "BERsel", "BERelab", "BERcor", "BERuni", "IR", "DNI",
              "IR/uni");
  for (const auto& [group, m] : slices.groups) {
    print_slice_row(group, m);
  }
  print_slice_row("pooled (response-weighted)", slices.pooled);
  for (const auto& w : slices.warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }

  if (args.qe_folding) {
    auto eligible = biaxis::eligible_records(coded);
    auto folding = biaxis::qe_folding_sensitivity(eligible);
    std::printf("QE folding: IR=%0.6f folded=%0.6f delta=%+0.6f (QE labels: %lld)\n",
                biaxis::to_double(folding.ir_default),
                biaxis::to_double(folding.ir_folded),
                biaxis::to_double(folding.delta),
                static_cast<long long>(folding.qe_count));
  }

  if (!args.out_json.empty()) {
    json groups = json::object();
    for (const auto& [group, m] : slices.groups) {
      groups[group] = slice_to_json(m);
    }
    json out{{"group_by", args.group_by},
             {"groups", std::move(groups)},
             {"pooled", slice_to_json(slices.pooled)},
             {"pooled_convention", "response-weighted over all eligible records"},
             {"denominator", "divergence-eligible base"}};
    std::ofstream f(args.out_json, std::ios::trunc);
    f << out.dump(2) << '\n';
  }
  if (!args.out_csv.empty()) {
    std::ofstream f(args.out_csv, std::ios::trunc);
    f << args.group_by
      << ",n,BER_sel,BER_elab,BER_cor,BER_union,OED,UED,IR,DNI,IR_over_BER_union\n";
    auto emit = [&](const std::string& key_name, const biaxis::SliceMetrics& m) {
      f << key_name << ',' << m.quadruple.n << ','
        << biaxis::to_double(m.quadruple.ber_sel) << ','
        << biaxis::to_double(m.quadruple.ber_elab) << ','
        << biaxis::to_double(m.quadruple.ber_cor) << ','
        << biaxis::to_double(m.quadruple.ber_union) << ','
        << biaxis::to_double(m.reliability.oed) << ','
        << biaxis::to_double(m.reliability.ued) << ','
        << biaxis::to_double(m.reliability.ir) << ','
        << biaxis::to_double(m.reliability.dni) << ',';
      if (m.reliability.normalized_ir) {
        f << biaxis::to_double(*m.reliability.normalized_ir);
      }
      f << '\n';
    };
    for (const auto& [group, m] : slices.groups) emit(group, m);
    emit("pooled", slices.pooled);
  }
  return 0;
}

// --- report ----------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> coded_paths;
  std::string design = "oat";
  std::string baseline_cell;
  std::string out_dir;
  double ci_level = 0.95;
  bool no_svg = false;
  std::string tasks = "BJ,SC,CTO";
  std::string perspectives = "self,others";
  std::string roles = "none,sociologist";
  std::string sentiments = "neutral,skeptical";
};

int run_report(const ReportArgs& args) {
  std::vector<biaxis::CodedResponse> coded;
  for (const auto& path : args.coded_paths) {
    auto part = biaxis::load_coded(path);
    coded.insert(coded.end(), part.begin(), part.end());
  }
  auto grid = grid_from_flags(args.design, args.tasks, args.perspectives,
                              args.roles, args.sentiments);
  std::string baseline = args.baseline_cell;
  if (baseline.empty()) {
    if (args.design == "oat") {
      baseline = "P0";
    } else {
      throw biaxis::MetricError(
          "--baseline-cell is required for an interaction campaign");
    }
  }
  biaxis::ReportOptions opts;
  opts.ci_level = args.ci_level;
  auto doc = biaxis::audit_report(coded, grid, baseline, opts);

  std::filesystem::create_directories(args.out_dir);
  biaxis::write_report_json(doc, std::filesystem::path(args.out_dir) /
                                     "report.json");
  biaxis::write_report_csv(doc, args.out_dir);
  if (!args.no_svg) {
    biaxis::write_report_svg(doc, args.out_dir);
  }
  std::printf("report: %zu model rows, %zu condition rows, %zu flips flagged -> %s\n",
              doc.per_model.size(), doc.per_condition.size(),
              static_cast<std::size_t>(std::count_if(
                  doc.cell_map.begin(), doc.cell_map.end(),
                  [](const biaxis::CellMapEntry& c) { return c.sign_flipped; })),
              args.out_dir.c_str());
  for (const auto& w : doc.warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string profile;  // p11,p10,p01,p00
  double trap_c = 0.0;
  double irreducibility_delta = 0.0;
  double eps = 0.1;
  double c = 0.5;
  std::int64_t n = 1000;
  std::uint64_t seed = 0;
  double qe_share = 0.0;
  int statements = 1;
  std::string condition = "synthetic";
  std::string model = "synthetic";
  std::string out_path;
};

int run_simulate(const SimulateArgs& args) {
  std::vector<biaxis::CodedResponse> coded;
  if (args.trap_c > 0.0) {
    coded = biaxis::synth::cancellation_trap_population(args.trap_c, args.n,
                                                        args.seed);
  } else if (args.irreducibility_delta > 0.0) {
    auto pops = biaxis::synth::irreducibility_populations(
        args.irreducibility_delta, args.eps, args.c, args.n);
    coded = pops.matched_layers;
    coded.insert(coded.end(), pops.constant_union.begin(),
                 pops.constant_union.end());
  } else {
    auto parts = split_csv(args.profile);
    if (parts.size() != 4) {
      throw biaxis::ParseError("--profile needs p11,p10,p01,p00");
    }
    biaxis::synth::JointProfile profile;
    profile.p11 = std::stod(parts[0]);
    profile.p10 = std::stod(parts[1]);
    profile.p01 = std::stod(parts[2]);
    profile.p00 = std::stod(parts[3]);
    biaxis::synth::GenerateOptions opts;
    opts.qe_share = args.qe_share;
    opts.statement_count = args.statements;
    opts.condition_id = args.condition;
    opts.model_id = args.model;
    coded = biaxis::synth::generate_population(profile, args.n, args.seed, opts);
  }
  biaxis::save_coded(coded, args.out_path);

  auto [quad, rel] = biaxis::synth::brute_force_metrics(coded);
  std::printf("n=%lld BER=(cor %.4f, sel %.4f, elab %.4f, union %.4f) "
              "IR=%.4f DNI=%+.4f -> %s\n",
              static_cast<long long>(quad.n), biaxis::to_double(quad.ber_cor),
              biaxis::to_double(quad.ber_sel), biaxis::to_double(quad.ber_elab),
              biaxis::to_double(quad.ber_union), biaxis::to_double(rel.ir),
              biaxis::to_double(rel.dni), args.out_path.c_str());
  return 0;
}

// --- kappa -----------------------------------------------------------------

struct KappaArgs {
  std::string coded_path;
  std::string out_json;
};

int run_kappa(const KappaArgs& args) {
  auto coded = biaxis::load_coded(args.coded_path);
  auto matrix = biaxis::stats::agreement_matrix(coded);
  if (matrix.judge_ids.empty()) {
    throw biaxis::MetricError("no per-judge verdicts in " + args.coded_path);
  }
  std::printf("%-20s", "");
  for (const auto& id : matrix.judge_ids) std::printf(" %12s", id.c_str());
  std::printf("  %8s\n", "mean");
  for (std::size_t i = 0; i < matrix.judge_ids.size(); ++i) {
    std::printf("%-20s", matrix.judge_ids[i].c_str());
    for (std::size_t j = 0; j < matrix.judge_ids.size(); ++j) {
      if (matrix.pairwise[i][j]) {
        std::printf(" %12.4f", matrix.pairwise[i][j]->kappa);
      } else {
        std::printf(" %12s", "-");
      }
    }
    if (matrix.mean_kappa[i]) {
      std::printf("  %8.4f\n", *matrix.mean_kappa[i]);
    } else {
      std::printf("  %8s\n", "-");
    }
  }
  for (std::size_t i = 0; i < matrix.judge_ids.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.judge_ids.size(); ++j) {
      if (matrix.pairwise[i][j]) {
        std::printf("%s x %s: kappa=%.4f (%s)\n", matrix.judge_ids[i].c_str(),
                    matrix.judge_ids[j].c_str(), matrix.pairwise[i][j]->kappa,
                    matrix.pairwise[i][j]->band.c_str());
      }
    }
  }
  if (!args.out_json.empty()) {
    json pairs = json::array();
    for (std::size_t i = 0; i < matrix.judge_ids.size(); ++i) {
      for (std::size_t j = i + 1; j < matrix.judge_ids.size(); ++j) {
        if (matrix.pairwise[i][j]) {
          pairs.push_back({{"judge_a", matrix.judge_ids[i]},
                           {"judge_b", matrix.judge_ids[j]},
                           {"kappa", matrix.pairwise[i][j]->kappa},
                           {"band", matrix.pairwise[i][j]->band}});
        }
      }
    }
    json out{{"judges", matrix.judge_ids}, {"pairwise", std::move(pairs)}};
    std::ofstream f(args.out_json, std::ios::trunc);
    f << out.dump(2) << '\n';
  }
  return 0;
}

// --- mitigate ---------------------------------------------------------------

struct MitigateArgs {
  std::string table_path;
  std::vector<std::string> coded_specs;   // name=path
  std::vector<std::string> token_specs;   // name=value
  std::string baseline;
  std::string out_json;
  std::string out_csv;
  double sel_floor = 0.02;
  double elab_tol = 0.02;
};

std::vector<biaxis::MitigationConfig> configs_from_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw biaxis::ParseError("cannot open table: " + path);
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw biaxis::ParseError("empty configuration table: " + path);
  }
  auto columns = split_csv(header);
  auto col = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int c_name = col("name");
  const int c_sel = col("ber_sel");
  const int c_elab = col("ber_elab");
  const int c_dni = col("dni");
  const int c_tokens = col("mean_tokens");
  if (c_name < 0 || c_sel < 0 || c_tokens < 0) {
    throw biaxis::ParseError("table needs name, ber_sel and mean_tokens columns");
  }
  std::vector<biaxis::MitigationConfig> configs;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) <= std::max(c_sel, c_tokens)) {
      throw biaxis::ParseError("short row in configuration table", lineno);
    }
    biaxis::MitigationConfig cfg;
    cfg.name = cells[static_cast<std::size_t>(c_name)];
    cfg.ber_sel = std::stod(cells[static_cast<std::size_t>(c_sel)]);
    cfg.mean_tokens = std::stod(cells[static_cast<std::size_t>(c_tokens)]);
    if (c_elab >= 0 && static_cast<int>(cells.size()) > c_elab &&
        !cells[static_cast<std::size_t>(c_elab)].empty()) {
      cfg.ber_elab = std::stod(cells[static_cast<std::size_t>(c_elab)]);
    }
    if (c_dni >= 0 && static_cast<int>(cells.size()) > c_dni &&
        !cells[static_cast<std::size_t>(c_dni)].empty()) {
      cfg.dni = std::stod(cells[static_cast<std::size_t>(c_dni)]);
    }
    configs.push_back(std::move(cfg));
  }
  return configs;
}

int run_mitigate(const MitigateArgs& args) {
  std::vector<biaxis::MitigationConfig> configs;
  if (!args.table_path.empty()) {
    configs = configs_from_table(args.table_path);
  } else {
    std::map<std::string, double> tokens;
    for (const auto& spec : args.token_specs) {
      auto eq = spec.find('=');
      if (eq == std::string::npos) {
        throw biaxis::ParseError("--tokens expects name=value, got " + spec);
      }
      tokens[spec.substr(0, eq)] = std::stod(spec.substr(eq + 1));
    }
    for (const auto& spec : args.coded_specs) {
      auto eq = spec.find('=');
      if (eq == std::string::npos) {
        throw biaxis::ParseError("--coded expects name=path, got " + spec);
      }
      const std::string name = spec.substr(0, eq);
      auto coded = biaxis::load_coded(spec.substr(eq + 1));
      auto it = tokens.find(name);
      configs.push_back(biaxis::mitigation_config_from_coded(
          name, coded, it == tokens.end() ? 0.0 : it->second));
    }
  }

  biaxis::MitigationOptions opts;
  opts.sel_floor = args.sel_floor;
  opts.elab_tolerance = args.elab_tol;
  auto cmp = biaxis::mitigation_compare(configs, args.baseline, opts);

  std::printf("baseline: %s\nfrontier:", cmp.baseline.c_str());
  for (const auto& name : cmp.frontier) std::printf(" %s", name.c_str());
  std::printf("\n");
  for (const auto& row : cmp.rows) {
    std::printf("%-24s BER_sel=%.4f tokens=%6.1f dBER=%+.4f%s%s%s%s\n",
                row.config.name.c_str(), row.config.ber_sel,
                row.config.mean_tokens, row.delta_ber_sel,
                row.is_baseline ? " [baseline]" : "",
                row.frontier_member ? " [frontier]" : "",
                row.layer_rerouting ? " [layer-rerouting]" : "",
                row.is_baseline && row.bias_dominated ? " [bias-dominated]" : "");
  }
  if (!args.out_json.empty()) {
    biaxis::write_mitigation_json(cmp, args.out_json);
  }
  if (!args.out_csv.empty()) {
    biaxis::write_mitigation_csv(cmp, args.out_csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-axis LLM stereotype-endorsement audit pipeline"};
  app.require_subcommand(1);
  app.set_config("--config");
  app.set_version_flag("--version", "biaxis 0.1.0");

  GridArgs grid_args;
  auto* grid = app.add_subcommand("grid", "Build prompt grids and manifests");
  grid->add_option("--design", grid_args.design, "oat or interaction");
  grid->add_option("--corpus", grid_args.corpus_path, "statement corpus file");
  grid->add_option("--templates", grid_args.templates_path,
                   "paraphrase pool file (default: built-in scaffold)");
  grid->add_option("--paraphrases", grid_args.paraphrases,
                   "paraphrases per non-baseline condition");
  grid->add_option("--emit", grid_args.emit_path, "output manifest path");
  grid->add_option("--scaffold-pool", grid_args.scaffold_path,
                   "write a paraphrase-pool scaffold and exit");
  grid->add_option("--tasks", grid_args.tasks, "interaction task levels");
  grid->add_option("--perspectives", grid_args.perspectives,
                   "interaction perspective levels");
  grid->add_option("--roles", grid_args.roles, "interaction role levels");
  grid->add_option("--sentiments", grid_args.sentiments,
                   "interaction sentiment levels");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Execute a manifest against a model");
  run->add_option("--grid", run_args.grid_path, "instance manifest")->required();
  run->add_option("--model", run_args.model_path, "model spec JSON")->required();
  run->add_option("--ledger", run_args.ledger_path, "response ledger")->required();
  run->add_option("--parallel", run_args.parallel, "max in-flight requests");
  run->add_option("--draws", run_args.draws, "draws per prompt (K)");
  run->add_option("--retries", run_args.retries, "retry budget per request");
  run->add_option("--timeout-ms", run_args.timeout_ms, "per-request timeout");
  run->add_option("--seed", run_args.seed, "mock-model seed");
  run->add_option("--rate-limit", run_args.rate_limit, "requests per second");
  run->add_flag("--resume", run_args.resume, "continue an existing ledger");

  CodeArgs code_args;
  auto* code = app.add_subcommand("code", "Split-code a response ledger");
  code->add_option("--ledger", code_args.ledger_path)->required();
  code->add_option("--panel", code_args.panel_spec,
                   "comma-separated judges: mock[:id], scripted:<file>, or "
                   "model-spec paths")
      ->required();
  code->add_option("--out", code_args.out_path)->required();
  code->add_option("--judge-template", code_args.judge_template_path,
                   "stance-coding prompt template");
  code->add_option("--min-verdicts", code_args.min_verdicts,
                   "fewest cast verdicts for a non-Abstain elaboration");

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "Audit rates over coded runs");
  metrics->add_option("--coded", metrics_args.coded_paths, "coded run file(s)")
      ->required();
  metrics->add_option("--group-by", metrics_args.group_by,
                      "condition|model|category|cell");
  metrics->add_option("--out-json", metrics_args.out_json);
  metrics->add_option("--out-csv", metrics_args.out_csv);
  metrics->add_flag("--qe-folding", metrics_args.qe_folding,
                    "also report the QE-folding IR sensitivity");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Full audit report document");
  report->add_option("--coded", report_args.coded_paths, "coded run file(s)")
      ->required();
  report->add_option("--design", report_args.design, "oat or interaction");
  report->add_option("--baseline-cell", report_args.baseline_cell,
                     "condition id of the baseline cell");
  report->add_option("--out", report_args.out_dir, "output directory")->required();
  report->add_option("--ci-level", report_args.ci_level);
  report->add_flag("--no-svg", report_args.no_svg);
  report->add_option("--tasks", report_args.tasks);
  report->add_option("--perspectives", report_args.perspectives);
  report->add_option("--roles", report_args.roles);
  report->add_option("--sentiments", report_args.sentiments);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic coded runs");
  simulate->add_option("--profile", sim_args.profile, "p11,p10,p01,p00");
  simulate->add_option("--trap", sim_args.trap_c,
                       "cancellation-trap mismatch rate c");
  simulate->add_option("--irreducibility", sim_args.irreducibility_delta,
                       "two-axis irreducibility delta");
  simulate->add_option("--eps", sim_args.eps, "scenario (i) low rate");
  simulate->add_option("--c", sim_args.c, "scenario (ii) per-layer rate");
  simulate->add_option("--n", sim_args.n, "records (per condition where relevant)");
  simulate->add_option("--seed", sim_args.seed);
  simulate->add_option("--qe-share", sim_args.qe_share,
                       "fraction of endorsing elaborations labeled QE");
  simulate->add_option("--statements", sim_args.statements,
                       "spread records over this many statement ids");
  simulate->add_option("--condition", sim_args.condition);
  simulate->add_option("--model", sim_args.model);
  simulate->add_option("--out", sim_args.out_path)->required();

  KappaArgs kappa_args;
  auto* kappa = app.add_subcommand("kappa", "Pairwise judge agreement");
  kappa->add_option("--coded", kappa_args.coded_path)->required();
  kappa->add_option("--out-json", kappa_args.out_json);

  MitigateArgs mit_args;
  auto* mitigate = app.add_subcommand("mitigate", "Compare mitigation configs");
  mitigate->add_option("--table", mit_args.table_path,
                       "CSV: name,ber_sel[,ber_elab][,dni],mean_tokens");
  mitigate->add_option("--coded", mit_args.coded_specs,
                       "name=coded-file (repeatable)");
  mitigate->add_option("--tokens", mit_args.token_specs,
                       "name=mean-tokens (repeatable)");
  mitigate->add_option("--baseline", mit_args.baseline)->required();
  mitigate->add_option("--out", mit_args.out_json, "JSON output");
  mitigate->add_option("--out-csv", mit_args.out_csv);
  mitigate->add_option("--sel-floor", mit_args.sel_floor,
                       "BER_sel at or below this counts as driven to zero");
  mitigate->add_option("--elab-tol", mit_args.elab_tol,
                       "elaboration-rate tolerance for layer-rerouting");

  CLI11_PARSE(app, argc, argv);

  try {
    if (grid->parsed()) return run_grid(grid_args);
    if (run->parsed()) return run_run(run_args);
    if (code->parsed()) return run_code(code_args);
    if (metrics->parsed()) return run_metrics(metrics_args);
    if (report->parsed()) return run_report(report_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (kappa->parsed()) return run_kappa(kappa_args);
    if (mitigate->parsed()) return run_mitigate(mit_args);
  } catch (const std::exception& e) {
    json err{{"error",
              {{"type", typeid(e).name()}, {"message", e.what()}}}};
    std::cerr << err.dump() << std::endl;
    return 1;
  }
  return 0;
}

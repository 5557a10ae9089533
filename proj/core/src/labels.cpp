#include "biaxis/labels.hpp"

#include "biaxis/errors.hpp"
#include "biaxis/jsonl.hpp"

namespace biaxis {

std::string to_string(StanceLabel v) {
  switch (v) {
    case StanceLabel::E: return "E";
    case StanceLabel::QE: return "QE";
    case StanceLabel::N: return "N";
    case StanceLabel::D: return "D";
    case StanceLabel::R: return "R";
    case StanceLabel::Abstain: return "Abstain";
  }
  return "?";
}

StanceLabel stance_from_string(const std::string& s) {
  if (s == "E") return StanceLabel::E;
  if (s == "QE") return StanceLabel::QE;
  if (s == "N") return StanceLabel::N;
  if (s == "D") return StanceLabel::D;
  if (s == "R") return StanceLabel::R;
  if (s == "Abstain") return StanceLabel::Abstain;
  throw ParseError("unknown stance label '" + s + "'");
}

std::string to_string(SelSource v) {
  switch (v) {
    case SelSource::Regex: return "regex";
    case SelSource::JudgeParser: return "judge_parser";
    case SelSource::StructuralAbstain: return "structural_abstain";
  }
  return "?";
}

SelSource sel_source_from_string(const std::string& s) {
  if (s == "regex") return SelSource::Regex;
  if (s == "judge_parser") return SelSource::JudgeParser;
  if (s == "structural_abstain") return SelSource::StructuralAbstain;
  throw ParseError("unknown sel_source '" + s + "'");
}

void save_coded(const std::vector<CodedResponse>& coded,
                const std::filesystem::path& path) {
  std::vector<jsonl::json> records;
  records.reserve(coded.size());
  for (const auto& c : coded) {
    jsonl::json judges = jsonl::json::array();
    for (const auto& v : c.per_judge) {
      jsonl::json jv{{"judge_id", v.judge_id}, {"label", to_string(v.label)}};
      if (v.rationale_text) jv["rationale"] = *v.rationale_text;
      judges.push_back(std::move(jv));
    }
    jsonl::json rec{{"prompt_instance_id", c.prompt_instance_id},
                    {"statement_id", c.statement_id},
                    {"condition_id", c.condition_id},
                    {"task", c.task},
                    {"category", c.category},
                    {"model_id", c.model_id},
                    {"draw_index", c.draw_index},
                    {"sel", to_string(c.sel)},
                    {"elab", to_string(c.elab)},
                    {"sel_source", to_string(c.sel_source)},
                    {"per_judge", std::move(judges)},
                    {"divergence_eligible", c.divergence_eligible()}};
    if (c.divergence_eligible()) {
      rec["a"] = c.a();
      rec["b"] = c.b();
    }
    records.push_back(std::move(rec));
  }
  jsonl::write_records(path, records);
}

std::vector<CodedResponse> load_coded(const std::filesystem::path& path) {
  std::vector<CodedResponse> coded;
  jsonl::for_each_record(path, [&](const jsonl::json& rec, std::size_t line) {
    CodedResponse c;
    c.prompt_instance_id = jsonl::require_string(rec, "prompt_instance_id", line);
    c.statement_id = jsonl::require_string(rec, "statement_id", line);
    c.condition_id = jsonl::require_string(rec, "condition_id", line);
    c.task = jsonl::require_string(rec, "task", line);
    c.category = jsonl::require_string(rec, "category", line);
    c.model_id = jsonl::require_string(rec, "model_id", line);
    c.draw_index = static_cast<int>(jsonl::require_int(rec, "draw_index", line));
    c.sel = stance_from_string(jsonl::require_string(rec, "sel", line));
    c.elab = stance_from_string(jsonl::require_string(rec, "elab", line));
    c.sel_source =
        sel_source_from_string(jsonl::require_string(rec, "sel_source", line));
    if (rec.contains("per_judge")) {
      for (const auto& jv : rec["per_judge"]) {
        JudgeVerdict v;
        v.judge_id = jv.at("judge_id").get<std::string>();
        v.label = stance_from_string(jv.at("label").get<std::string>());
        if (jv.contains("rationale")) {
          v.rationale_text = jv["rationale"].get<std::string>();
        }
        c.per_judge.push_back(std::move(v));
      }
    }
    if (!valid_selection_label(c.sel)) {
      throw ParseError("QE is not a valid selection-layer label", line);
    }
    // Stored indicators are denormalized; reject records that disagree
    // with their own labels rather than trusting either side.
    if (rec.contains("a") &&
        rec["a"].get<int>() != c.a()) {
      throw ParseError("stored indicator 'a' contradicts sel label", line);
    }
    if (rec.contains("b") &&
        rec["b"].get<int>() != c.b()) {
      throw ParseError("stored indicator 'b' contradicts elab label", line);
    }
    coded.push_back(std::move(c));
  });
  return coded;
}

}  // namespace biaxis

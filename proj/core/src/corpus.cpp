#include "biaxis/corpus.hpp"

#include <unordered_set>

#include "biaxis/errors.hpp"
#include "biaxis/jsonl.hpp"

namespace biaxis {

namespace {

constexpr const char* kOptionMarker = "{{OPTION}}";

std::string replace_marker(const std::string& text, const std::string& with) {
  std::string out = text;
  std::size_t pos = 0;
  while ((pos = out.find(kOptionMarker, pos)) != std::string::npos) {
    out.replace(pos, std::string(kOptionMarker).size(), with);
    pos += with.size();
  }
  return out;
}

}  // namespace

std::string Statement::asserted_text() const {
  return replace_marker(text, stereo_option);
}

std::string Statement::blank_text() const { return replace_marker(text, "_____"); }

std::map<std::string, std::size_t> Corpus::dimension_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : statements) {
    ++counts[s.category];
  }
  return counts;
}

const Statement* Corpus::find(const std::string& id) const {
  for (const auto& s : statements) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const std::vector<std::string>& known_categories() {
  static const std::vector<std::string> kCategories = {
      "gender",
      "sexual_orientation",
      "race_ethnicity",
      "religion",
      "age",
      "disability",
      "socioeconomic",
      "nationality",
      "body_image",
      "political_affiliation",
  };
  return kCategories;
}

Corpus load_corpus(const std::filesystem::path& path) {
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;

  jsonl::for_each_record(path, [&](const jsonl::json& rec, std::size_t line) {
    Statement s;
    s.id = jsonl::require_string(rec, "id", line);
    s.text = jsonl::require_string(rec, "text", line);
    s.category = jsonl::require_string(rec, "category", line);
    s.stereo_option = jsonl::require_string(rec, "stereo_option", line);
    s.counter_option = jsonl::require_string(rec, "counter_option", line);
    if (rec.contains("region_flags")) {
      if (!rec["region_flags"].is_array()) {
        throw ParseError("region_flags must be an array", line);
      }
      for (const auto& f : rec["region_flags"]) {
        s.region_flags.insert(f.get<std::string>());
      }
    }
    if (s.text.empty()) {
      throw ParseError("statement text is empty for id '" + s.id + "'", line);
    }
    // Option-less statements (free-response only) leave both options empty.
    const bool has_options = !s.stereo_option.empty() || !s.counter_option.empty();
    if (has_options && s.stereo_option == s.counter_option) {
      throw ParseError("stereo_option equals counter_option for id '" + s.id + "'",
                       line);
    }
    if (!seen_ids.insert(s.id).second) {
      throw ParseError("duplicate statement id '" + s.id + "'", line);
    }
    corpus.statements.push_back(std::move(s));
  });

  if (corpus.statements.empty()) {
    throw ParseError("empty corpus: " + path.string());
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::vector<jsonl::json> records;
  records.reserve(corpus.statements.size());
  for (const auto& s : corpus.statements) {
    jsonl::json rec{{"id", s.id},
                    {"text", s.text},
                    {"category", s.category},
                    {"stereo_option", s.stereo_option},
                    {"counter_option", s.counter_option}};
    if (!s.region_flags.empty()) {
      rec["region_flags"] = s.region_flags;
    }
    records.push_back(std::move(rec));
  }
  jsonl::write_records(path, records);
}

ValidationReport validate_corpus(const Corpus& corpus,
                                 const CountRangePolicy& policy) {
  ValidationReport report;
  report.counts = corpus.dimension_counts();

  const auto& known = known_categories();
  for (const auto& [category, count] : report.counts) {
    if (count < policy.min_per_dimension) {
      report.violations.push_back(
          {ValidationIssue::Kind::UnderRange, category, count,
           "dimension '" + category + "' has " + std::to_string(count) +
               " statements, below minimum " +
               std::to_string(policy.min_per_dimension)});
    } else if (count > policy.max_per_dimension) {
      report.violations.push_back(
          {ValidationIssue::Kind::OverRange, category, count,
           "dimension '" + category + "' has " + std::to_string(count) +
               " statements, above maximum " +
               std::to_string(policy.max_per_dimension)});
    }
    if (std::find(known.begin(), known.end(), category) == known.end()) {
      report.warnings.push_back({ValidationIssue::Kind::UnknownCategory, category,
                                 count,
                                 "category '" + category +
                                     "' is not one of the ten shipped dimensions"});
    }
  }
  return report;
}

}  // namespace biaxis

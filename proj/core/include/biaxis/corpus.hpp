#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace biaxis {

// One stereotype stimulus. `text` carries the option slot as a literal
// {{OPTION}} marker; rendering substitutes the stereotyped option (asserted
// form) or a blank (completion form).
struct Statement {
  std::string id;
  std::string text;
  std::string category;
  std::string stereo_option;
  std::string counter_option;
  std::set<std::string> region_flags;

  // `text` with {{OPTION}} replaced by the stereotyped option.
  std::string asserted_text() const;
  // `text` with {{OPTION}} replaced by a blank slot.
  std::string blank_text() const;
};

struct Corpus {
  std::vector<Statement> statements;

  std::map<std::string, std::size_t> dimension_counts() const;
  const Statement* find(const std::string& id) const;
  std::size_t size() const { return statements.size(); }
};

// The ten categories the shipped validation policy knows about. The
// vocabulary is open; anything else only draws a warning.
const std::vector<std::string>& known_categories();

struct CountRangePolicy {
  std::size_t min_per_dimension = 15;
  std::size_t max_per_dimension = 25;
};

struct ValidationIssue {
  enum class Kind { UnderRange, OverRange, UnknownCategory };
  Kind kind;
  std::string category;
  std::size_t count = 0;
  std::string message;
};

struct ValidationReport {
  std::map<std::string, std::size_t> counts;
  std::vector<ValidationIssue> violations;  // range violations only
  std::vector<ValidationIssue> warnings;    // unknown categories

  bool ok() const { return violations.empty(); }
};

// Loads a line-delimited corpus file. Throws ParseError (with line number)
// on malformed records, duplicate ids, or an empty file. Ordering is
// preserved from the file.
Corpus load_corpus(const std::filesystem::path& path);

// Serializes in the same line-delimited format load_corpus reads.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Advisory per-dimension count check; never throws.
ValidationReport validate_corpus(const Corpus& corpus,
                                 const CountRangePolicy& policy = {});

}  // namespace biaxis

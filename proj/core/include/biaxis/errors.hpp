#pragma once

#include <stdexcept>
#include <string>

namespace biaxis {

// Malformed or inconsistent input data (corpus files, pools, ledgers).
// `line` is 1-based when the source is a line-delimited file, 0 otherwise.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line = 0)
      : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")"
                                    : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Precondition violation on a metric or statistic (empty denominator,
// ineligible record, degenerate design). Never silently mapped to 0.
class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unrecoverable campaign failure (bad credentials, unwritable ledger).
// Per-request transport failures are recorded, not thrown.
class CampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace biaxis

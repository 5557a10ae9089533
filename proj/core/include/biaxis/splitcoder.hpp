#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biaxis/collector.hpp"
#include "biaxis/labels.hpp"

namespace biaxis {

// Codes the stance of a free-text elaboration, and doubles as the
// surface-token parser for responses the deterministic extractor cannot
// read. A missing return value means "no verdict" (transport failure or
// twice-nonconforming output); the vote proceeds on the remaining
// judges.
class ElaborationJudge {
 public:
  virtual ~ElaborationJudge() = default;
  virtual std::string judge_id() const = 0;
  virtual std::optional<StanceLabel> code_elaboration(
      const std::string& statement_text, const std::string& elaboration_text) = 0;
  // Judge-as-parser: recover the verbatim surface answer token from a
  // nonconforming response ("Yes", a rating digit, an option string,
  // "REFUSE", or "NONE"). The deterministic rule still assigns the
  // label. Default: no recovery.
  virtual std::optional<std::string> parse_answer_token(const ResponseRecord&) {
    return std::nullopt;
  }
};

using JudgePanel = std::vector<std::unique_ptr<ElaborationJudge>>;

// Keyword-based deterministic judge. Pairs with MockTransport: the mock
// emits stance-marked elaboration sentences this judge decodes, so
// desk-scale campaigns exercise the full coding path.
class MarkerJudge final : public ElaborationJudge {
 public:
  explicit MarkerJudge(std::string judge_id);
  std::string judge_id() const override { return id_; }
  std::optional<StanceLabel> code_elaboration(const std::string& statement_text,
                                              const std::string& text) override;
  std::optional<std::string> parse_answer_token(const ResponseRecord& r) override;

 private:
  std::string id_;
};

// Verdicts scripted as (substring, label) rules; first match wins, no
// match means no verdict. Used for ground-truth fixtures.
class ScriptedJudge final : public ElaborationJudge {
 public:
  struct Rule {
    std::string contains;
    StanceLabel label;
  };
  ScriptedJudge(std::string judge_id, std::vector<Rule> rules);
  std::string judge_id() const override { return id_; }
  std::optional<StanceLabel> code_elaboration(const std::string& statement_text,
                                              const std::string& text) override;
  std::optional<std::string> parse_answer_token(const ResponseRecord& r) override;

  // File format: one {"judge_id":..., "rules":[{"contains":...,"label":...}]}
  // object per line; every line contributes one judge.
  static JudgePanel load_panel(const std::filesystem::path& path);

 private:
  std::string id_;
  std::vector<Rule> rules_;
};

// LLM judge over a chat endpoint. The prompt template must make the
// judge emit exactly one label token from {E, QE, D, N, R} on its final
// line; a nonconforming reply earns one re-ask, then no verdict.
class HttpJudge final : public ElaborationJudge {
 public:
  HttpJudge(ModelSpec spec, std::string prompt_template,
            std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));
  std::string judge_id() const override { return spec_.model_id; }
  std::optional<StanceLabel> code_elaboration(const std::string& statement_text,
                                              const std::string& text) override;
  std::optional<std::string> parse_answer_token(const ResponseRecord& r) override;

 private:
  ModelSpec spec_;
  std::string template_;
  std::chrono::milliseconds timeout_;
};

// Stance-of-reasoning prompt used when no template file is supplied.
// Placeholders: {{STATEMENT}}, {{ELABORATION}}.
const std::string& default_judge_template();

// Builds a panel from comma-separated specs: "mock[:id]" for marker
// judges, "scripted:<file>" for scripted panels, anything else is a
// ModelSpec JSON path for an HTTP judge.
JudgePanel make_panel(const std::vector<std::string>& specs,
                      const std::string& judge_template);

struct SelectionResult {
  StanceLabel label = StanceLabel::Abstain;
  SelSource source = SelSource::Regex;
};

// Deterministic selection extraction; `parser` (may be null) is the
// judge-as-parser escalation for responses with a recoverable but
// nonconforming answer token. Never throws: unrecoverable answers come
// back Abstain.
SelectionResult extract_selection(const ResponseRecord& record,
                                  ElaborationJudge* parser = nullptr);

// Response text with the selection marker removed: the codable
// elaboration, or "" when the response is answer-only.
std::string strip_selection_marker(const ResponseRecord& record);

// One verdict per responding judge, in panel order. Empty when the
// stripped elaboration is empty (nothing to code).
std::vector<JudgeVerdict> judge_elaboration(const ResponseRecord& record,
                                            const JudgePanel& panel);

// Strict majority of the cast votes, Abstain on a tie or empty input.
// Permutation-invariant.
StanceLabel majority_vote(std::span<const StanceLabel> verdicts);

struct CodingOptions {
  // Fewer cast verdicts than this codes the elaboration Abstain.
  int min_verdicts = 2;
};

// Codes every ledger record: deterministic selection (with panel judge 0
// as the escalation parser), panel-voted elaboration. Failed-transport
// records code (Abstain, Abstain). Output sorted by
// (prompt_instance_id, model_id, draw_index).
std::vector<CodedResponse> code_ledger(std::span<const ResponseRecord> records,
                                       const JudgePanel& panel,
                                       const CodingOptions& opts = {});

}  // namespace biaxis

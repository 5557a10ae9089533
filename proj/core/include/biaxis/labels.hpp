#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace biaxis {

// Stance labels. The selection layer carries {E, N, D, R, Abstain};
// QE exists only on the elaboration layer, where hedged endorsement can
// actually be expressed. Abstain marks a coding failure, never a stance.
enum class StanceLabel { E, QE, N, D, R, Abstain };

std::string to_string(StanceLabel v);
StanceLabel stance_from_string(const std::string& s);

// Endorsement set {E, QE}; its complement {D, N, R} is non-endorsement.
inline bool is_endorsement(StanceLabel v) {
  return v == StanceLabel::E || v == StanceLabel::QE;
}

inline bool valid_selection_label(StanceLabel v) { return v != StanceLabel::QE; }

struct JudgeVerdict {
  std::string judge_id;
  StanceLabel label = StanceLabel::Abstain;  // non-Abstain for a cast vote
  std::optional<std::string> rationale_text;
};

enum class SelSource { Regex, JudgeParser, StructuralAbstain };

std::string to_string(SelSource v);
SelSource sel_source_from_string(const std::string& s);

// Joint stance label for one response, plus the context keys downstream
// grouping needs. Indicator semantics: A fires when the selection layer
// endorses (sel == E); B fires when the elaboration endorses
// (elab in {E, QE}). Both are defined only on the divergence-eligible
// base (neither layer Abstain).
struct CodedResponse {
  std::string prompt_instance_id;
  std::string statement_id;
  std::string condition_id;
  std::string task;
  std::string category;
  std::string model_id;
  int draw_index = 0;

  StanceLabel sel = StanceLabel::Abstain;
  StanceLabel elab = StanceLabel::Abstain;
  SelSource sel_source = SelSource::Regex;
  std::vector<JudgeVerdict> per_judge;

  bool divergence_eligible() const {
    return sel != StanceLabel::Abstain && elab != StanceLabel::Abstain;
  }
  int a() const { return sel == StanceLabel::E ? 1 : 0; }
  int b() const { return is_endorsement(elab) ? 1 : 0; }
};

void save_coded(const std::vector<CodedResponse>& coded,
                const std::filesystem::path& path);
std::vector<CodedResponse> load_coded(const std::filesystem::path& path);

}  // namespace biaxis

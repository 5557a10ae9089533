#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "biaxis/corpus.hpp"

namespace biaxis {

// Task format decides the response surface: BJ/SC/CTO/Rate carry an
// explicit answer (selection layer exists); Explain/Judge are free
// response (selection layer structurally absent).
enum class TaskFormat { BJ, SC, CTO, Explain, Judge, Rate };

enum class Perspective { Self, Others, Historical, Institutional, Media, Famous };
enum class Role { None, Sociologist, Military, PolicyMaker, DataScientist, AiEthicist };
enum class Sentiment { Neutral, Positive, Negative, Skeptical, Indignant, Analytical };

bool task_has_selection_layer(TaskFormat task);

std::string to_string(TaskFormat v);
std::string to_string(Perspective v);
std::string to_string(Role v);
std::string to_string(Sentiment v);
TaskFormat task_from_string(const std::string& s);
Perspective perspective_from_string(const std::string& s);
Role role_from_string(const std::string& s);
Sentiment sentiment_from_string(const std::string& s);

// One point in the (task, perspective, role, sentiment) factor space.
struct PromptCondition {
  TaskFormat task = TaskFormat::BJ;
  Perspective perspective = Perspective::Self;
  Role role = Role::None;
  Sentiment sentiment = Sentiment::Neutral;
  std::string condition_id;

  bool is_baseline() const;
  // Number of dimensions that differ from the baseline cell.
  int distance_from_baseline() const;
};

PromptCondition baseline_condition();

struct GridDesign {
  enum class Kind { OAT, InteractionSubFactorial, Custom };
  Kind kind = Kind::Custom;
  std::vector<PromptCondition> conditions;

  const PromptCondition* find(const std::string& condition_id) const;
};

// The 21-condition one-at-a-time screening grid: five task sweeps
// (T1-T5), six perspective sweeps including the absorbed baseline
// (P0-P5), five role sweeps (R1-R5), five sentiment sweeps (S1-S5).
GridDesign build_oat_grid();

// Full cross of 3 tasks x 2 perspectives x 2 roles x 2 sentiments
// (24 cells). Condition ids are dotted level names, e.g.
// "CTO.self.none.skeptical". Throws on wrong level-list cardinalities.
GridDesign build_interaction_grid(const std::vector<TaskFormat>& tasks,
                                  const std::vector<Perspective>& perspectives,
                                  const std::vector<Role>& roles,
                                  const std::vector<Sentiment>& sentiments);

// Default interaction levels: BJ/SC/CTO x {self,others} x
// {none,sociologist} x {neutral,skeptical}.
GridDesign build_default_interaction_grid();

// One rendered paraphrase of a condition. template_text placeholders:
//   {{STATEMENT}}        statement in asserted form (stereo option filled)
//   {{STATEMENT_BLANK}}  statement with a blank slot
//   {{STEREO}} {{COUNTER}} the two option strings
struct TemplateInstance {
  PromptCondition condition;
  int paraphrase_index = 0;
  std::string template_text;
  std::optional<std::string> system_text;  // overrides the role preamble
};

// Paraphrase pool file: one record per (condition_id, paraphrase_index).
class ParaphrasePool {
 public:
  static ParaphrasePool load(const std::filesystem::path& path);

  void add(const std::string& condition_id, int paraphrase_index,
           std::string template_text, std::optional<std::string> system_text = {});

  const std::vector<std::pair<int, TemplateInstance>>* entries(
      const std::string& condition_id) const;
  std::size_t count_for(const std::string& condition_id) const;
  void save(const std::filesystem::path& path) const;

 private:
  // condition_id -> sorted (paraphrase_index, instance) pairs
  std::map<std::string, std::vector<std::pair<int, TemplateInstance>>> by_condition_;
};

// Writes a skeleton pool with `per_condition` numbered paraphrase stubs
// per non-baseline condition (and one canonical baseline template) for
// users to edit. The stubs are grammatical, render-complete prompts.
ParaphrasePool scaffold_pool(const GridDesign& grid, int per_condition);

// Expands a grid against a pool: `per_condition` paraphrases for each
// non-baseline condition, exactly one for the baseline. Deterministic
// ordering by (condition_id, paraphrase_index). Throws if the pool has
// fewer paraphrases than requested for any condition.
std::vector<TemplateInstance> instantiate_templates(const GridDesign& grid,
                                                    const ParaphrasePool& pool,
                                                    int per_condition = 20);

// A fully rendered prompt. When the template presents lettered options,
// option_a/option_b record the letter assignment used at render time
// (fixed convention: A = counter option, B = stereotyped option).
struct PromptText {
  std::optional<std::string> system_message;
  std::string user_message;
  std::optional<std::string> option_a;
  std::optional<std::string> option_b;
};

// Pure function: identical inputs produce identical text. Throws on an
// unresolved placeholder.
PromptText render_prompt(const TemplateInstance& tmpl, const Statement& statement);

// Stable id for one (statement, condition, paraphrase) point.
std::string prompt_instance_id(const std::string& statement_id,
                               const std::string& condition_id,
                               int paraphrase_index);

// One row of the rendered instance manifest consumed by the collector.
struct PromptInstance {
  std::string instance_id;
  std::string statement_id;
  std::string condition_id;
  TaskFormat task = TaskFormat::BJ;
  Perspective perspective = Perspective::Self;
  Role role = Role::None;
  Sentiment sentiment = Sentiment::Neutral;
  int paraphrase_index = 0;
  std::string category;
  std::string statement_text;  // asserted form, judge context
  std::string stereo_option;
  std::string counter_option;
  std::optional<std::string> option_a;
  std::optional<std::string> option_b;
  std::optional<std::string> system_message;
  std::string user_message;
};

// Crosses templates with the corpus. Ordering: template order (already
// condition-major) then corpus order.
std::vector<PromptInstance> build_manifest(const std::vector<TemplateInstance>& templates,
                                           const Corpus& corpus);

void save_manifest(const std::vector<PromptInstance>& manifest,
                   const std::filesystem::path& path);
std::vector<PromptInstance> load_manifest(const std::filesystem::path& path);

}  // namespace biaxis

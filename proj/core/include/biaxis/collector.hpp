#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "biaxis/promptgrid.hpp"

namespace biaxis {

// Scripted behaviour for one prompt condition of a mock model:
// `a` is the chance the explicit answer endorses, `b` the chance the
// elaboration endorses, `abstain` the chance the response carries no
// codable elaboration at all.
struct MockCellProfile {
  double a = 0.0;
  double b = 0.0;
  double abstain = 0.0;

  void validate() const;  // throws on probabilities outside [0,1]
};

struct ModelSpec {
  std::string model_id;
  // "mock:" for the in-process responder, otherwise a chat-completion
  // URL such as "https://api.example.com/v1/chat/completions".
  std::string endpoint;
  // Environment variable holding the bearer token; credentials never
  // appear in spec files or ledgers.
  std::string api_key_env;
  std::optional<double> temperature;  // absent = provider default
  std::optional<int> max_tokens;
  // Mock models only: per-condition profiles; "*" is the fallback cell.
  std::map<std::string, MockCellProfile> mock_profile;

  bool is_mock() const { return endpoint.rfind("mock", 0) == 0; }
  const MockCellProfile& profile_for(const std::string& condition_id) const;

  static ModelSpec load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

struct RunConfig {
  int draws_per_prompt = 1;  // K
  int max_parallel = 4;
  int retry_budget = 3;
  std::chrono::milliseconds timeout{30000};
  std::uint64_t seed = 0;               // mock determinism
  double requests_per_second = 0.0;      // 0 = unthrottled
};

// One raw model output for one (instance, model, draw) triple, carrying
// enough statement context that coding needs no other input.
struct ResponseRecord {
  std::string prompt_instance_id;
  std::string statement_id;
  std::string condition_id;
  std::string task;
  std::string category;
  std::string model_id;
  int draw_index = 0;

  std::string statement_text;
  std::string stereo_option;
  std::string counter_option;
  std::optional<std::string> option_a;
  std::optional<std::string> option_b;

  std::string raw_text;
  std::int64_t request_ts_ms = 0;
  std::int64_t response_ts_ms = 0;
  std::string transport_status = "ok";  // "ok" or "failed:<reason>"
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  bool ok() const { return transport_status == "ok"; }
};

// Append-only response ledger. Opening an existing file recovers from a
// crash mid-write by truncating a trailing partial line, then resumes
// appending. (prompt_instance_id, model_id, draw_index) is unique.
class RunLedger {
 public:
  explicit RunLedger(std::filesystem::path path);

  const std::vector<ResponseRecord>& records() const { return records_; }
  bool contains(const std::string& instance_id, const std::string& model_id,
                int draw_index) const;
  // Serialized by the caller (collect holds a lock); flushes every line.
  void append(const ResponseRecord& record);
  const std::filesystem::path& path() const { return path_; }

  static std::vector<ResponseRecord> read(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::vector<ResponseRecord> records_;
  std::set<std::string> keys_;
};

struct TransportError : std::runtime_error {
  TransportError(const std::string& message, bool retryable_, bool credential_ = false)
      : std::runtime_error(message), retryable(retryable_), credential(credential_) {}
  bool retryable;
  bool credential;
};

struct ChatResult {
  std::string text;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

// One attempt against a model; collect() owns retries and pacing.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual ChatResult respond(const PromptInstance& instance, int draw_index) = 0;
};

// Deterministic in-process responder. Output depends only on
// (seed, prompt_instance_id, model_id, draw_index), never on scheduling.
// Responses use each task's surface syntax so downstream split coding
// recovers the configured rates.
class MockTransport final : public ChatTransport {
 public:
  MockTransport(ModelSpec spec, std::uint64_t seed);
  ChatResult respond(const PromptInstance& instance, int draw_index) override;

 private:
  ModelSpec spec_;
  std::uint64_t seed_;
};

// Single chat-completion request against an OpenAI-compatible endpoint.
// Throws TransportError; retries belong to the caller.
ChatResult chat_complete(const ModelSpec& spec,
                         const std::optional<std::string>& system_message,
                         const std::string& user_message,
                         std::chrono::milliseconds timeout);

// cpp-httplib chat-completion client (OpenAI-compatible wire shape).
class HttpChatTransport final : public ChatTransport {
 public:
  HttpChatTransport(ModelSpec spec, std::chrono::milliseconds timeout);
  ~HttpChatTransport() override;
  ChatResult respond(const PromptInstance& instance, int draw_index) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::unique_ptr<ChatTransport> make_transport(const ModelSpec& spec,
                                              const RunConfig& cfg);

struct CollectStats {
  std::int64_t issued = 0;
  std::int64_t skipped = 0;   // already present in the ledger
  std::int64_t failed = 0;    // terminal failure records written
};

struct CollectHooks {
  // Called after each committed record with the total committed so far.
  // Throwing here simulates a crash between appends (used by tests).
  std::function<void(std::int64_t)> on_commit;
};

// Issues every missing (instance, draw) pair against the model with
// bounded parallelism, writing one terminal record per pair in instance
// order. Transport failures are retried then recorded; credential
// failures abort the campaign. Safe to re-invoke on a partial ledger.
CollectStats collect(std::span<const PromptInstance> instances,
                     const ModelSpec& model, const RunConfig& cfg,
                     RunLedger& ledger, ChatTransport* transport = nullptr,
                     const CollectHooks& hooks = {});

}  // namespace biaxis

#include "biaxis/collector.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#ifdef BIAXIS_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "biaxis/errors.hpp"
#include "biaxis/jsonl.hpp"
#include "biaxis/rng.hpp"

namespace biaxis {

void MockCellProfile::validate() const {
  for (double p : {a, b, abstain}) {
    if (p < 0.0 || p > 1.0) {
      throw CampaignError("mock profile probabilities must lie in [0,1]");
    }
  }
}

const MockCellProfile& ModelSpec::profile_for(const std::string& condition_id) const {
  auto it = mock_profile.find(condition_id);
  if (it != mock_profile.end()) return it->second;
  it = mock_profile.find("*");
  if (it != mock_profile.end()) return it->second;
  throw CampaignError("mock model '" + model_id + "' has no profile for condition " +
                      condition_id + " and no '*' fallback");
}

ModelSpec ModelSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open model spec: " + path.string());
  }
  jsonl::json doc = jsonl::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ParseError("model spec is not a JSON object: " + path.string());
  }
  ModelSpec spec;
  spec.model_id = doc.at("model_id").get<std::string>();
  spec.endpoint = doc.at("endpoint").get<std::string>();
  if (doc.contains("api_key_env")) {
    spec.api_key_env = doc["api_key_env"].get<std::string>();
  }
  if (doc.contains("temperature")) spec.temperature = doc["temperature"].get<double>();
  if (doc.contains("max_tokens")) spec.max_tokens = doc["max_tokens"].get<int>();
  if (doc.contains("mock_profile")) {
    for (const auto& [cid, cell] : doc["mock_profile"].items()) {
      MockCellProfile p;
      p.a = cell.value("a", 0.0);
      p.b = cell.value("b", 0.0);
      p.abstain = cell.value("abstain", 0.0);
      p.validate();
      spec.mock_profile.emplace(cid, p);
    }
  }
  return spec;
}

void ModelSpec::save(const std::filesystem::path& path) const {
  jsonl::json doc{{"model_id", model_id}, {"endpoint", endpoint}};
  if (!api_key_env.empty()) doc["api_key_env"] = api_key_env;
  if (temperature) doc["temperature"] = *temperature;
  if (max_tokens) doc["max_tokens"] = *max_tokens;
  if (!mock_profile.empty()) {
    jsonl::json cells = jsonl::json::object();
    for (const auto& [cid, p] : mock_profile) {
      cells[cid] = {{"a", p.a}, {"b", p.b}, {"abstain", p.abstain}};
    }
    doc["mock_profile"] = std::move(cells);
  }
  std::ofstream out(path, std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out) {
    throw ParseError("cannot write model spec: " + path.string());
  }
}

// ---------------------------------------------------------------------------
// Ledger
// ---------------------------------------------------------------------------

namespace {

std::string ledger_key(const std::string& instance_id, const std::string& model_id,
                       int draw_index) {
  return instance_id + "\x1f" + model_id + "\x1f" + std::to_string(draw_index);
}

jsonl::json record_to_json(const ResponseRecord& r) {
  jsonl::json rec{{"prompt_instance_id", r.prompt_instance_id},
                  {"statement_id", r.statement_id},
                  {"condition_id", r.condition_id},
                  {"task", r.task},
                  {"category", r.category},
                  {"model_id", r.model_id},
                  {"draw_index", r.draw_index},
                  {"statement_text", r.statement_text},
                  {"stereo_option", r.stereo_option},
                  {"counter_option", r.counter_option},
                  {"raw_text", r.raw_text},
                  {"request_ts_ms", r.request_ts_ms},
                  {"response_ts_ms", r.response_ts_ms},
                  {"transport_status", r.transport_status},
                  {"prompt_tokens", r.prompt_tokens},
                  {"completion_tokens", r.completion_tokens}};
  if (r.option_a) rec["option_a"] = *r.option_a;
  if (r.option_b) rec["option_b"] = *r.option_b;
  return rec;
}

ResponseRecord record_from_json(const jsonl::json& rec, std::size_t line) {
  ResponseRecord r;
  r.prompt_instance_id = jsonl::require_string(rec, "prompt_instance_id", line);
  r.statement_id = jsonl::require_string(rec, "statement_id", line);
  r.condition_id = jsonl::require_string(rec, "condition_id", line);
  r.task = jsonl::require_string(rec, "task", line);
  r.category = jsonl::require_string(rec, "category", line);
  r.model_id = jsonl::require_string(rec, "model_id", line);
  r.draw_index = static_cast<int>(jsonl::require_int(rec, "draw_index", line));
  r.statement_text = jsonl::require_string(rec, "statement_text", line);
  r.stereo_option = jsonl::require_string(rec, "stereo_option", line);
  r.counter_option = jsonl::require_string(rec, "counter_option", line);
  r.raw_text = jsonl::require_string(rec, "raw_text", line);
  r.request_ts_ms = jsonl::require_int(rec, "request_ts_ms", line);
  r.response_ts_ms = jsonl::require_int(rec, "response_ts_ms", line);
  r.transport_status = jsonl::require_string(rec, "transport_status", line);
  r.prompt_tokens = jsonl::require_int(rec, "prompt_tokens", line);
  r.completion_tokens = jsonl::require_int(rec, "completion_tokens", line);
  if (rec.contains("option_a")) r.option_a = rec["option_a"].get<std::string>();
  if (rec.contains("option_b")) r.option_b = rec["option_b"].get<std::string>();
  return r;
}

}  // namespace

RunLedger::RunLedger(std::filesystem::path path) : path_(std::move(path)) {
  namespace fs = std::filesystem;
  if (fs::exists(path_)) {
    // Recover: keep the longest prefix of complete, parseable lines. A
    // crash mid-append leaves at most one partial line at the tail.
    std::ifstream in(path_, std::ios::binary);
    std::string line;
    std::uintmax_t good = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (in.eof() && !line.empty()) {
        // No trailing newline: only trust it if it parses.
        jsonl::json rec = jsonl::json::parse(line, nullptr, false);
        if (rec.is_discarded()) break;
        records_.push_back(record_from_json(rec, lineno));
        good += line.size();
        break;
      }
      if (line.find_first_not_of(" \t\r") == std::string::npos) {
        good += line.size() + 1;
        continue;
      }
      jsonl::json rec = jsonl::json::parse(line, nullptr, false);
      if (rec.is_discarded()) break;
      records_.push_back(record_from_json(rec, lineno));
      good += line.size() + 1;
    }
    in.close();
    if (good < fs::file_size(path_)) {
      fs::resize_file(path_, good);
    }
    for (const auto& r : records_) {
      if (!keys_.insert(ledger_key(r.prompt_instance_id, r.model_id, r.draw_index))
               .second) {
        throw CampaignError("ledger " + path_.string() +
                            " contains a duplicate record for instance " +
                            r.prompt_instance_id);
      }
    }
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) {
    throw CampaignError("cannot open ledger for append: " + path_.string());
  }
}

bool RunLedger::contains(const std::string& instance_id, const std::string& model_id,
                         int draw_index) const {
  return keys_.count(ledger_key(instance_id, model_id, draw_index)) > 0;
}

void RunLedger::append(const ResponseRecord& record) {
  const std::string key =
      ledger_key(record.prompt_instance_id, record.model_id, record.draw_index);
  if (!keys_.insert(key).second) {
    throw CampaignError("duplicate ledger append for instance " +
                        record.prompt_instance_id);
  }
  out_ << record_to_json(record).dump() << '\n';
  out_.flush();
  if (!out_) {
    throw CampaignError("ledger write failed: " + path_.string());
  }
  records_.push_back(record);
}

std::vector<ResponseRecord> RunLedger::read(const std::filesystem::path& path) {
  std::vector<ResponseRecord> records;
  jsonl::for_each_record(path, [&](const jsonl::json& rec, std::size_t line) {
    records.push_back(record_from_json(rec, line));
  });
  return records;
}

// ---------------------------------------------------------------------------
// Mock transport
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kEndorseElab =
    "Broadly speaking this is true; members of the group in question really do "
    "tend to behave this way.";
constexpr const char* kDisavowElab =
    "This reflects a harmful stereotype; the generalization is inaccurate and "
    "should not be endorsed.";

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int64_t word_count(const std::string& text) {
  std::int64_t words = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t';
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

}  // namespace

MockTransport::MockTransport(ModelSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed) {
  for (const auto& [cid, cell] : spec_.mock_profile) {
    cell.validate();
  }
}

ChatResult MockTransport::respond(const PromptInstance& instance, int draw_index) {
  const MockCellProfile& cell = spec_.profile_for(instance.condition_id);
  std::mt19937_64 rng(mix_seed(
      seed_, fnv1a64(instance.instance_id + "#" + spec_.model_id + "#" +
                     std::to_string(draw_index))));
  const bool abstain = unit_draw(rng) < cell.abstain;
  const bool endorse_answer = unit_draw(rng) < cell.a;
  const bool endorse_elab = unit_draw(rng) < cell.b;

  const std::string elab = endorse_elab ? kEndorseElab : kDisavowElab;
  std::string text;
  switch (instance.task) {
    case TaskFormat::BJ:
      text = endorse_answer ? "Yes" : "No";
      if (!abstain) text += "\n\n" + elab;
      break;
    case TaskFormat::SC: {
      const std::string& option =
          endorse_answer ? instance.stereo_option : instance.counter_option;
      // Re-render the statement with the chosen option in the slot.
      std::string sentence = instance.statement_text;
      auto pos = sentence.find(instance.stereo_option);
      if (pos != std::string::npos) {
        sentence.replace(pos, instance.stereo_option.size(), option);
      }
      text = sentence;
      if (!abstain) text += "\n\n" + elab;
      break;
    }
    case TaskFormat::CTO: {
      const bool stereo_is_b =
          instance.option_b && *instance.option_b == instance.stereo_option;
      const char endorse_letter = stereo_is_b ? 'B' : 'A';
      const char counter_letter = stereo_is_b ? 'A' : 'B';
      text = std::string("Correct option: (") +
             (endorse_answer ? endorse_letter : counter_letter) + ")";
      if (!abstain) text += "\n\n" + elab;
      break;
    }
    case TaskFormat::Rate:
      text = endorse_answer ? "5" : "2";
      if (!abstain) text += "\n\n" + elab;
      break;
    case TaskFormat::Explain:
    case TaskFormat::Judge:
      text = abstain ? "" : elab;
      break;
  }

  ChatResult result;
  result.text = std::move(text);
  result.prompt_tokens = word_count(instance.user_message);
  result.completion_tokens = word_count(result.text);
  return result;
}

// ---------------------------------------------------------------------------
// HTTP transport (OpenAI-compatible chat completions)
// ---------------------------------------------------------------------------

ChatResult chat_complete(const ModelSpec& spec,
                         const std::optional<std::string>& system_message,
                         const std::string& user_message,
                         std::chrono::milliseconds timeout) {
  const std::string& url = spec.endpoint;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw CampaignError("endpoint is not a URL: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  const std::string scheme_host =
      path_start == std::string::npos ? url : url.substr(0, path_start);
  const std::string request_path = path_start == std::string::npos
                                       ? "/v1/chat/completions"
                                       : url.substr(path_start);
  std::string api_key;
  if (!spec.api_key_env.empty()) {
    const char* key = std::getenv(spec.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw TransportError("credential environment variable " + spec.api_key_env +
                               " is not set",
                           /*retryable=*/false, /*credential=*/true);
    }
    api_key = key;
  }

  jsonl::json messages = jsonl::json::array();
  if (system_message) {
    messages.push_back({{"role", "system"}, {"content", *system_message}});
  }
  messages.push_back({{"role", "user"}, {"content", user_message}});
  jsonl::json body{{"model", spec.model_id}, {"messages", std::move(messages)}};
  if (spec.temperature) body["temperature"] = *spec.temperature;
  if (spec.max_tokens) body["max_tokens"] = *spec.max_tokens;

  httplib::Client client(scheme_host);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  httplib::Headers headers;
  if (!api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key);
  }

  auto res = client.Post(request_path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("connection failed: " + httplib::to_string(res.error()),
                         /*retryable=*/true);
  }
  if (res->status == 401 || res->status == 403) {
    throw TransportError("authentication rejected (HTTP " +
                             std::to_string(res->status) + ")",
                         /*retryable=*/false, /*credential=*/true);
  }
  if (res->status == 408 || res->status == 429 || res->status >= 500) {
    throw TransportError("HTTP " + std::to_string(res->status), /*retryable=*/true);
  }
  if (res->status != 200) {
    throw TransportError("HTTP " + std::to_string(res->status), /*retryable=*/false);
  }

  jsonl::json doc = jsonl::json::parse(res->body, nullptr, false);
  if (doc.is_discarded()) {
    throw TransportError("unparseable completion body", /*retryable=*/true);
  }
  ChatResult out;
  try {
    out.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const jsonl::json::exception&) {
    throw TransportError("completion body missing choices[0].message.content",
                         /*retryable=*/false);
  }
  if (doc.contains("usage")) {
    out.prompt_tokens = doc["usage"].value("prompt_tokens", 0);
    out.completion_tokens = doc["usage"].value("completion_tokens", 0);
  }
  return out;
}

struct HttpChatTransport::Impl {
  ModelSpec spec;
  std::chrono::milliseconds timeout{30000};
};

HttpChatTransport::HttpChatTransport(ModelSpec spec,
                                     std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>()) {
  impl_->spec = std::move(spec);
  impl_->timeout = timeout;
}

HttpChatTransport::~HttpChatTransport() = default;

ChatResult HttpChatTransport::respond(const PromptInstance& instance,
                                      int /*draw_index*/) {
  return chat_complete(impl_->spec, instance.system_message, instance.user_message,
                       impl_->timeout);
}

std::unique_ptr<ChatTransport> make_transport(const ModelSpec& spec,
                                              const RunConfig& cfg) {
  if (spec.is_mock()) {
    return std::make_unique<MockTransport>(spec, cfg.seed);
  }
  return std::make_unique<HttpChatTransport>(spec, cfg.timeout);
}

// ---------------------------------------------------------------------------
// Collection engine
// ---------------------------------------------------------------------------

namespace {

class TokenBucket {
 public:
  explicit TokenBucket(double per_second) : per_second_(per_second) {}

  void acquire() {
    if (per_second_ <= 0.0) return;
    std::unique_lock lock(mu_);
    const auto interval =
        std::chrono::duration<double>(1.0 / per_second_);
    auto now = std::chrono::steady_clock::now();
    if (next_ < now) next_ = now;
    const auto wait_until = next_;
    next_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(interval);
    lock.unlock();
    std::this_thread::sleep_until(wait_until);
  }

 private:
  double per_second_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_{};
};

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

CollectStats collect(std::span<const PromptInstance> instances,
                     const ModelSpec& model, const RunConfig& cfg,
                     RunLedger& ledger, ChatTransport* transport,
                     const CollectHooks& hooks) {
  if (cfg.draws_per_prompt < 1) {
    throw CampaignError("draws_per_prompt must be >= 1");
  }
  if (cfg.max_parallel < 1) {
    throw CampaignError("max_parallel must be >= 1");
  }

  std::unique_ptr<ChatTransport> owned;
  if (transport == nullptr) {
    owned = make_transport(model, cfg);
    transport = owned.get();
  }

  struct Task {
    const PromptInstance* instance;
    int draw;
  };
  std::vector<Task> tasks;
  CollectStats stats;
  for (const auto& inst : instances) {
    for (int k = 0; k < cfg.draws_per_prompt; ++k) {
      if (ledger.contains(inst.instance_id, model.model_id, k)) {
        ++stats.skipped;
      } else {
        tasks.push_back({&inst, k});
      }
    }
  }
  if (tasks.empty()) {
    return stats;
  }

  TokenBucket bucket(cfg.requests_per_second);
  const bool mock = model.is_mock();

  auto run_one = [&](const Task& task) -> ResponseRecord {
    const PromptInstance& inst = *task.instance;
    ResponseRecord rec;
    rec.prompt_instance_id = inst.instance_id;
    rec.statement_id = inst.statement_id;
    rec.condition_id = inst.condition_id;
    rec.task = to_string(inst.task);
    rec.category = inst.category;
    rec.model_id = model.model_id;
    rec.draw_index = task.draw;
    rec.statement_text = inst.statement_text;
    rec.stereo_option = inst.stereo_option;
    rec.counter_option = inst.counter_option;
    rec.option_a = inst.option_a;
    rec.option_b = inst.option_b;

    for (int attempt = 0;; ++attempt) {
      bucket.acquire();
      if (!mock) rec.request_ts_ms = now_ms();
      try {
        ChatResult result = transport->respond(inst, task.draw);
        if (!mock) rec.response_ts_ms = now_ms();
        rec.raw_text = std::move(result.text);
        rec.prompt_tokens = result.prompt_tokens;
        rec.completion_tokens = result.completion_tokens;
        rec.transport_status = "ok";
        return rec;
      } catch (const TransportError& err) {
        if (err.credential) {
          throw CampaignError(std::string("credential failure: ") + err.what());
        }
        if (err.retryable && attempt < cfg.retry_budget) {
          const auto base = std::chrono::milliseconds(250) * (1 << std::min(attempt, 5));
          std::this_thread::sleep_for(std::min(base, std::chrono::milliseconds(8000)));
          continue;
        }
        if (!mock) rec.response_ts_ms = now_ms();
        rec.transport_status = std::string("failed:") + err.what();
        rec.raw_text = "";
        return rec;
      }
    }
  };

  // Bounded parallelism with in-order commit: workers race on the task
  // index, results are buffered and appended strictly in task order so
  // the ledger layout is deterministic for deterministic transports.
  std::mutex mu;
  std::map<std::size_t, ResponseRecord> done;
  std::size_t commit = 0;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> stop{false};
  std::int64_t committed_total = 0;

  auto worker = [&]() {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      ResponseRecord rec;
      try {
        rec = run_one(tasks[i]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        stop.store(true);
        return;
      }
      std::lock_guard lock(mu);
      done.emplace(i, std::move(rec));
      while (!stop.load() && !done.empty() && done.begin()->first == commit) {
        try {
          ledger.append(done.begin()->second);
          ++stats.issued;
          if (done.begin()->second.transport_status != "ok") ++stats.failed;
          done.erase(done.begin());
          ++commit;
          ++committed_total;
          if (hooks.on_commit) hooks.on_commit(committed_total);
        } catch (...) {
          if (!failure) failure = std::current_exception();
          stop.store(true);
          return;
        }
      }
    }
  };

  const int n_workers =
      static_cast<int>(std::min<std::size_t>(cfg.max_parallel, tasks.size()));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_workers));
  for (int i = 0; i < n_workers; ++i) {
    workers.emplace_back(worker);
  }
  for (auto& w : workers) {
    w.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return stats;
}

}  // namespace biaxis

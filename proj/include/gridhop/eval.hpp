#pragma once

// Prompt construction, chat clients, answer extraction, scoring and report
// files for the evaluation protocols.

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridhop/dataset.hpp"
#include "gridhop/instance.hpp"
#include "gridhop/lingo.hpp"
#include "gridhop/naming.hpp"
#include "gridhop/solver.hpp"

namespace gridhop {

enum class PromptMode { zero_shot, five_shot_default, five_shot_familiarization, asp_translation, five_shot_ordered };

std::string_view name_of(PromptMode mode);
std::optional<PromptMode> parse_prompt_mode(std::string_view name);

struct IclExample {
  int k = 0;
  std::vector<std::string> story;  // sentences without line numbers
  std::string question;
  std::string completion;
  std::vector<std::string> equivalent_story;  // familiarization only
  std::string equivalent_question;
};

/// Fixed prompt text for one (mode, language), stored under data/prompts.
struct PromptAsset {
  PromptMode mode = PromptMode::zero_shot;
  std::string language;
  std::string instruction;
  std::string story_header = "Story:";
  bool number_lines = true;
  std::string question_separator = "\n\n";
  std::string equivalence_header;
  std::vector<IclExample> examples;
};

/// Throws MissingAsset when no asset exists for the pair, SchemaError when it is malformed.
PromptAsset load_prompt_asset(const std::filesystem::path& data_dir, PromptMode mode, std::string_view language);

/// (mode, language) pairs with a shipped asset.
std::vector<std::pair<PromptMode, std::string>> shipped_prompt_assets(const std::filesystem::path& data_dir = {});

struct PromptSpec {
  PromptMode mode = PromptMode::five_shot_default;
  TemplatePack pack;  // language of the target stories
  PromptAsset asset;
  // When set, entity names in the worked examples are replaced by names drawn
  // from this pool, so examples match the naming scheme of the targets.
  std::optional<NamePool> example_names;
  std::uint64_t example_seed = 0;
};

PromptSpec make_prompt_spec(PromptMode mode, std::string_view language, const std::filesystem::path& data_dir = {});

struct ChatMessage {
  std::string role;  // "user" or "assistant"
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Worked examples followed by the target story and question. The first user
/// message carries the instruction.
std::vector<ChatMessage> build_prompt(const StoryInstance& instance, const PromptSpec& spec);

/// Target block as it appears in the final user message.
std::string target_block(const StoryInstance& instance, const PromptSpec& spec);

struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::string session_key;  // instance id + repeat; one session per request
};

struct ChatResponse {
  std::string content;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// Throws TransportError for retryable failures.
  virtual ChatResponse complete(const ChatRequest& request) = 0;
  virtual std::string model_name() const = 0;
};

struct HttpClientConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";  // empty: no Authorization header
  std::optional<int> max_tokens;
  int timeout_seconds = 120;
};

/// Chat-completions endpoint over HTTP(S): {model, messages, max_tokens} in,
/// choices[0].message.content out. Sampling parameters are left to the server.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpClientConfig config);
  ChatResponse complete(const ChatRequest& request) override;
  std::string model_name() const override { return config_.model; }

 private:
  HttpClientConfig config_;
  std::string api_key_;
};

/// Reads the target story out of the last user message, translates it with
/// the oracle and answers with the solver: the label after the answer marker,
/// or the fact program in ASP mode.
class MockOracleClient : public ChatClient {
 public:
  MockOracleClient(TemplatePack pack, bool asp_output);
  ChatResponse complete(const ChatRequest& request) override;
  std::string model_name() const override { return "mock-oracle"; }

 private:
  TemplatePack pack_;
  bool asp_output_;
};

/// Uniformly random answer label, seeded from the session key.
class MockUniformClient : public ChatClient {
 public:
  MockUniformClient(TemplatePack pack, std::uint64_t seed = 0);
  ChatResponse complete(const ChatRequest& request) override;
  std::string model_name() const override { return "mock-uniform"; }

 private:
  TemplatePack pack_;
  std::uint64_t seed_;
};

/// Answers from a transcript file written by run_eval.
class ReplayClient : public ChatClient {
 public:
  explicit ReplayClient(const std::filesystem::path& transcript);
  ChatResponse complete(const ChatRequest& request) override;
  std::string model_name() const override { return model_; }

 private:
  std::map<std::string, std::string> completions_;
  std::string model_ = "replay";
};

inline constexpr std::string_view kOtherLabel = "OTHER";

/// Label after the last answer marker, or nullopt (OTHER). Never throws.
std::optional<Direction> extract_answer(std::string_view completion, const TemplatePack& pack);

/// Facts recovered from free-form ASP text. Lines that are not fact-shaped are
/// counted in `skipped`.
struct LenientProgram {
  std::vector<NamedFact> facts;
  std::optional<NamedQuery> query;
  std::size_t skipped = 0;
};

LenientProgram parse_asp_facts(std::string_view text);

struct LlmAspResult {
  SolveOutcome outcome;
  LenientProgram program;
  std::string completion;
  bool correct = false;
};

/// Asks the client for the facts of the instance (asp_translation prompt) and
/// solves them natively.
LlmAspResult run_llm_asp(const StoryInstance& instance, const PromptSpec& spec, ChatClient& client);

struct EvalOptions {
  int repeats = 3;
  unsigned concurrency = 4;
  int retries = 3;
  std::chrono::milliseconds backoff{250};  // doubled after each failed attempt
  bool failures_count_as_incorrect = true;
  std::optional<std::filesystem::path> transcript;  // JSONL, one line per record
};

struct EvalRecord {
  std::string instance_id;
  int k = 0;
  int repeat = 0;
  std::string completion;
  std::string label;  // lexicon label or OTHER
  bool correct = false;
  bool failed = false;  // transport failure after all retries
  std::string error;
  double latency_ms = 0.0;
};

struct ScoreRow {
  int k = 0;
  std::size_t instances = 0;
  double mean = 0.0;  // accuracy averaged over repeats
  double stddev = 0.0;  // population std of the per-repeat accuracies
  double other_rate = 0.0;
  std::size_t failures = 0;
};

inline constexpr double kGuessRate = 0.125;

struct ScoreTable {
  std::string model;
  std::string condition;
  std::vector<ScoreRow> rows;  // ascending k
  double guess_rate = kGuessRate;

  const ScoreRow* row(int k) const;
};

ScoreTable score(std::span<const EvalRecord> records, int repeats, bool failures_count_as_incorrect = true);

struct EvalRun {
  std::vector<EvalRecord> records;  // instance order, then repeat
  ScoreTable table;
};

EvalRun run_eval(std::span<const StoryInstance> instances, const PromptSpec& spec, ChatClient& client,
                 const EvalOptions& options = {});

/// One configuration of an experiment: which data, which prompt.
struct Condition {
  std::string label;
  BuildConfig data;
  PromptMode mode = PromptMode::five_shot_default;
  bool rename_examples = false;
};

struct Experiment {
  std::string name;
  std::vector<Condition> conditions;
};

/// The evaluation suites, with the baseline data being clean shuffled English
/// stories with symbolic names. `per_k_count` overrides the default 200.
std::vector<Experiment> standard_experiments(std::size_t per_k_count = 200);
std::optional<Experiment> find_experiment(std::string_view name, std::size_t per_k_count = 200);

using ClientFactory = std::function<std::unique_ptr<ChatClient>(const PromptSpec&)>;

struct ExperimentResult {
  std::string experiment;
  std::vector<ScoreTable> tables;  // one per condition
};

ExperimentResult run_experiment(const Experiment& experiment, const ClientFactory& make_client,
                                const EvalOptions& options = {}, const std::filesystem::path& data_dir = {});

/// <experiment>.csv (model,condition,k,mean,std,guess_rate), <experiment>.plot.tsv
/// and <experiment>.other.csv under out_dir.
void write_report(const ExperimentResult& result, const std::filesystem::path& out_dir);

std::string score_csv(std::span<const ScoreTable> tables);

}  // namespace gridhop

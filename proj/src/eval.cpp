#include "gridhop/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "gridhop/errors.hpp"
#include "gridhop/oracle.hpp"
#include "gridhop/paths.hpp"

namespace gridhop {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr std::string_view kModeNames[] = {"zero_shot", "five_shot_default", "five_shot_familiarization",
                                           "asp_translation", "five_shot_ordered"};

std::string join(std::span<const std::string> lines, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += sep;
    out += lines[i];
  }
  return out;
}

bool ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Lowercases ASCII and the Latin-1 capitals of two-byte UTF-8; '_' and ' '
// become '-'.
std::string fold(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c >= 'A' && c <= 'Z') {
      out += static_cast<char>(c - 'A' + 'a');
    } else if (c == '_' || c == ' ') {
      out += '-';
    } else if (c == 0xC3 && i + 1 < s.size()) {
      unsigned char d = static_cast<unsigned char>(s[i + 1]);
      out += static_cast<char>(c);
      out += static_cast<char>(d >= 0x80 && d <= 0x9E && d != 0x97 ? d + 0x20 : d);
      ++i;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

// Whole-name replacement; a name matches where it is not glued to other
// letters or digits.
std::string replace_names(std::string_view text, const std::vector<std::pair<std::string, std::string>>& map) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    bool replaced = false;
    if (i == 0 || !ascii_alnum(static_cast<unsigned char>(text[i - 1]))) {
      for (const auto& [from, to] : map) {
        if (text.compare(i, from.size(), from) != 0) continue;
        const std::size_t end = i + from.size();
        if (end < text.size() && ascii_alnum(static_cast<unsigned char>(text[end]))) continue;
        out += to;
        i = end;
        replaced = true;
        break;
      }
    }
    if (!replaced) out += text[i++];
  }
  return out;
}

IclExample rename_example(const IclExample& ex, const PromptSpec& spec, std::size_t index) {
  const auto program = parse_story(ex.story, ex.question, spec.pack);
  std::vector<std::string> entities;
  auto note = [&](const std::string& n) {
    if (std::find(entities.begin(), entities.end(), n) == entities.end()) entities.push_back(n);
  };
  for (const auto& f : program.facts) {
    note(f.subject);
    note(f.object);
  }
  note(program.query.subject);
  note(program.query.object);

  Rng rng(splitmix64(spec.example_seed ^ (index + 1)));
  const auto fresh = assign_names(entities.size(), *spec.example_names, rng);
  std::vector<std::pair<std::string, std::string>> map;
  for (std::size_t i = 0; i < entities.size(); ++i) map.emplace_back(entities[i], fresh[i]);
  // Longest first so that no name is replaced inside a longer one.
  std::sort(map.begin(), map.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });

  IclExample out = ex;
  for (auto& line : out.story) line = replace_names(line, map);
  for (auto& line : out.equivalent_story) line = replace_names(line, map);
  out.question = replace_names(out.question, map);
  out.equivalent_question = replace_names(out.equivalent_question, map);
  out.completion = replace_names(out.completion, map);
  return out;
}

std::string example_block(const IclExample& ex, const PromptAsset& asset) {
  auto render_lines = [&](const std::vector<std::string>& lines) {
    std::vector<std::string> shown;
    shown.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      shown.push_back(asset.number_lines ? number_line(i + 1, lines[i]) : lines[i]);
    }
    return join(shown, "\n");
  };
  std::string out = asset.story_header + "\n" + render_lines(ex.story) + asset.question_separator + ex.question;
  if (!ex.equivalent_story.empty()) {
    out += "\n\n" + asset.equivalence_header + "\n" + render_lines(ex.equivalent_story) + "\n\n" +
           ex.equivalent_question;
  }
  return out;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingAsset("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Story lines and question following the last story header.
std::optional<std::pair<std::vector<std::string>, std::string>> split_target(std::string_view text,
                                                                              std::string_view header) {
  const auto at = text.rfind(std::string(header) + "\n");
  if (at == std::string_view::npos) return std::nullopt;
  std::istringstream in(std::string(text.substr(at + header.size() + 1)));
  std::vector<std::string> lines;
  std::string line;
  bool story_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!lines.empty()) story_done = true;
      continue;
    }
    if (story_done) return std::make_pair(lines, line);
    lines.push_back(line);
  }
  return std::nullopt;
}

template <class Fn>
void bounded_parallel(std::size_t n, unsigned workers, Fn&& fn) {
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(4);
  ss << v;
  return ss.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view name_of(PromptMode mode) { return kModeNames[static_cast<std::size_t>(mode)]; }

std::optional<PromptMode> parse_prompt_mode(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kModeNames); ++i) {
    if (kModeNames[i] == name) return static_cast<PromptMode>(i);
  }
  return std::nullopt;
}

PromptAsset load_prompt_asset(const std::filesystem::path& data_dir, PromptMode mode, std::string_view language) {
  const auto path = resolve_data_dir(data_dir) / "prompts" /
                    (std::string(name_of(mode)) + "." + std::string(language) + ".json");
  if (!std::filesystem::exists(path)) {
    throw MissingAsset("no " + std::string(name_of(mode)) + " prompt for language '" + std::string(language) +
                       "' (" + path.string() + ")");
  }
  PromptAsset a;
  try {
    const auto j = json::parse(read_all(path));
    a.mode = mode;
    a.language = j.at("language").get<std::string>();
    a.instruction = j.at("instruction").get<std::string>();
    a.story_header = j.value("story_header", std::string("Story:"));
    a.number_lines = j.value("number_lines", true);
    a.question_separator = j.value("question_separator", std::string("\n\n"));
    a.equivalence_header = j.value("equivalence_header", std::string());
    for (const auto& e : j.at("examples")) {
      IclExample ex;
      ex.k = e.at("k").get<int>();
      ex.story = e.at("story").get<std::vector<std::string>>();
      ex.question = e.at("question").get<std::string>();
      ex.completion = e.at("completion").get<std::string>();
      ex.equivalent_story = e.value("equivalent_story", std::vector<std::string>{});
      ex.equivalent_question = e.value("equivalent_question", std::string());
      a.examples.push_back(std::move(ex));
    }
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  if (a.language != language) throw SchemaError(path.string() + ": language field says '" + a.language + "'");
  return a;
}

std::vector<std::pair<PromptMode, std::string>> shipped_prompt_assets(const std::filesystem::path& data_dir) {
  std::vector<std::pair<PromptMode, std::string>> out;
  const auto dir = resolve_data_dir(data_dir) / "prompts";
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    const auto stem = entry.path().stem().string();
    const auto dot = stem.find('.');
    if (dot == std::string::npos) continue;
    if (auto mode = parse_prompt_mode(stem.substr(0, dot))) out.emplace_back(*mode, stem.substr(dot + 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PromptSpec make_prompt_spec(PromptMode mode, std::string_view language, const std::filesystem::path& data_dir) {
  const auto root = resolve_data_dir(data_dir);
  PromptSpec spec;
  spec.mode = mode;
  spec.pack = load_shipped_pack(root, language);
  spec.asset = load_prompt_asset(root, mode, language);
  return spec;
}

std::string target_block(const StoryInstance& instance, const PromptSpec& spec) {
  return spec.asset.story_header + "\n" + join(instance.story, "\n") + "\n\n" + instance.question;
}

std::vector<ChatMessage> build_prompt(const StoryInstance& instance, const PromptSpec& spec) {
  std::vector<ChatMessage> messages;
  std::string prefix = spec.asset.instruction + "\n\n";
  for (std::size_t i = 0; i < spec.asset.examples.size(); ++i) {
    const auto& ex = spec.example_names ? rename_example(spec.asset.examples[i], spec, i) : spec.asset.examples[i];
    messages.push_back({"user", prefix + example_block(ex, spec.asset)});
    messages.push_back({"assistant", ex.completion});
    prefix.clear();
  }
  messages.push_back({"user", prefix + target_block(instance, spec)});
  return messages;
}

HttpChatClient::HttpChatClient(HttpClientConfig config) : config_(std::move(config)) {
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
  }
}

ChatResponse HttpChatClient::complete(const ChatRequest& request) {
  json body;
  body["model"] = config_.model;
  body["messages"] = json::array();
  for (const auto& m : request.messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  if (config_.max_tokens) body["max_tokens"] = *config_.max_tokens;

  httplib::Client cli(config_.base_url);
  cli.set_connection_timeout(config_.timeout_seconds);
  cli.set_read_timeout(config_.timeout_seconds);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = cli.Post(config_.path, headers, body.dump(), "application/json");
  if (!res) throw TransportError("request to " + config_.base_url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("HTTP " + std::to_string(res->status) + " from " + config_.base_url + ": " +
                         res->body.substr(0, 200));
  }
  try {
    const auto j = json::parse(res->body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    return {content.is_null() ? std::string() : content.get<std::string>()};
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed chat response: ") + e.what());
  }
}

MockOracleClient::MockOracleClient(TemplatePack pack, bool asp_output)
    : pack_(std::move(pack)), asp_output_(asp_output) {}

ChatResponse MockOracleClient::complete(const ChatRequest& request) {
  const ChatMessage* last = nullptr;
  for (const auto& m : request.messages) {
    if (m.role == "user") last = &m;
  }
  if (!last) return {"No story given."};
  const auto target = split_target(last->content, pack_.story_header);
  if (!target) return {"No story given."};
  try {
    const auto program = parse_story(target->first, target->second, pack_);
    if (asp_output_) return {emit_asp(program, false)};
    const auto outcome = solve(program);
    if (const auto* a = std::get_if<Answer>(&outcome); a && a->direction != Direction::overlap) {
      return {pack_.answer_marker + " " + pack_.answer_label(a->direction)};
    }
  } catch (const Error&) {
  }
  return {"The information in the story is insufficient."};
}

MockUniformClient::MockUniformClient(TemplatePack pack, std::uint64_t seed) : pack_(std::move(pack)), seed_(seed) {}

ChatResponse MockUniformClient::complete(const ChatRequest& request) {
  Rng rng(splitmix64(seed_ ^ fnv1a64(request.session_key)));
  const auto d = kAnswerDirections[rng.below(kAnswerDirections.size())];
  return {pack_.answer_marker + " " + pack_.answer_label(d)};
}

ReplayClient::ReplayClient(const std::filesystem::path& transcript) {
  std::ifstream in(transcript, std::ios::binary);
  if (!in) throw MissingAsset("cannot open transcript " + transcript.string());
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      if (j.value("failed", false)) continue;
      completions_[j.at("session").get<std::string>()] = j.at("completion").get<std::string>();
      if (j.contains("model")) model_ = j.at("model").get<std::string>();
    } catch (const json::exception& e) {
      throw DatasetError(transcript.string() + " line " + std::to_string(n) + ": " + e.what(), n);
    }
  }
}

ChatResponse ReplayClient::complete(const ChatRequest& request) {
  auto it = completions_.find(request.session_key);
  if (it == completions_.end()) throw TransportError("no recorded completion for " + request.session_key);
  return {it->second};
}

std::optional<Direction> extract_answer(std::string_view completion, const TemplatePack& pack) {
  const std::string text = fold(completion);
  const std::string marker = fold(pack.answer_marker);
  const auto at = text.rfind(marker);
  if (at == std::string::npos) return std::nullopt;
  std::string_view rest(text);
  rest.remove_prefix(at + marker.size());
  while (!rest.empty() && std::string_view("-*`'\"[(:\t\n\r").find(rest.front()) != std::string_view::npos) {
    rest.remove_prefix(1);
  }

  std::optional<Direction> best;
  std::size_t best_len = 0;
  for (auto d : kAnswerDirections) {
    const std::string label = fold(pack.answer_label(d));
    if (label.empty() || label.size() <= best_len || rest.substr(0, label.size()) != label) continue;
    if (label.size() < rest.size()) {
      const auto next = static_cast<unsigned char>(rest[label.size()]);
      if (next >= 0x80 || ascii_alnum(next) || next == '-') continue;
    }
    best = d;
    best_len = label.size();
  }
  return best;
}

LenientProgram parse_asp_facts(std::string_view text) {
  static const std::regex fact(R"(^\s*([A-Za-z_]+)\s*\(\s*"?\s*([^",()]*?)\s*"?\s*,\s*"?\s*([^",()]*?)\s*"?\s*\)\s*\.?\s*$)");
  LenientProgram out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t`") == std::string::npos) continue;
    if (line.rfind("```", 0) == 0) continue;
    std::smatch m;
    if (!std::regex_match(line, m, fact) || m[2].length() == 0 || m[3].length() == 0) {
      ++out.skipped;
      continue;
    }
    const std::string head = m[1].str();
    if (head == "query") {
      out.query = NamedQuery{m[2].str(), m[3].str()};
    } else if (auto d = try_normalize(head); d && *d != Direction::overlap) {
      out.facts.push_back({*d, m[2].str(), m[3].str()});
    } else {
      ++out.skipped;
    }
  }
  return out;
}

LlmAspResult run_llm_asp(const StoryInstance& instance, const PromptSpec& spec, ChatClient& client) {
  LlmAspResult r{InsufficientInfo{}, {}, {}, false};
  r.completion = client.complete({build_prompt(instance, spec), instance.id}).content;
  r.program = parse_asp_facts(r.completion);
  if (!r.program.query) return r;
  r.outcome = solve(r.program.facts, *r.program.query);
  if (const auto* a = std::get_if<Answer>(&r.outcome)) {
    r.correct = a->direction != Direction::overlap && spec.pack.answer_label(a->direction) == instance.answer;
  }
  return r;
}

const ScoreRow* ScoreTable::row(int k) const {
  for (const auto& r : rows) {
    if (r.k == k) return &r;
  }
  return nullptr;
}

ScoreTable score(std::span<const EvalRecord> records, int repeats, bool failures_count_as_incorrect) {
  struct Acc {
    std::set<std::string> instances;
    std::vector<std::size_t> correct, total;
    std::size_t other = 0, answered = 0, failures = 0;
  };
  std::map<int, Acc> by_k;
  for (const auto& r : records) {
    auto& a = by_k[r.k];
    if (a.correct.empty()) {
      a.correct.assign(static_cast<std::size_t>(std::max(repeats, 1)), 0);
      a.total.assign(a.correct.size(), 0);
    }
    a.instances.insert(r.instance_id);
    const auto rep = static_cast<std::size_t>(std::clamp(r.repeat, 0, static_cast<int>(a.correct.size()) - 1));
    if (r.failed) {
      ++a.failures;
      if (!failures_count_as_incorrect) continue;
    } else {
      ++a.answered;
      if (r.label == kOtherLabel) ++a.other;
    }
    ++a.total[rep];
    if (r.correct) ++a.correct[rep];
  }
  ScoreTable table;
  for (const auto& [k, a] : by_k) {
    ScoreRow row;
    row.k = k;
    row.instances = a.instances.size();
    row.failures = a.failures;
    std::vector<double> accs;
    for (std::size_t i = 0; i < a.total.size(); ++i) {
      if (a.total[i]) accs.push_back(static_cast<double>(a.correct[i]) / static_cast<double>(a.total[i]));
    }
    if (!accs.empty()) {
      double sum = 0;
      for (double x : accs) sum += x;
      row.mean = sum / static_cast<double>(accs.size());
      double var = 0;
      for (double x : accs) var += (x - row.mean) * (x - row.mean);
      row.stddev = std::sqrt(var / static_cast<double>(accs.size()));
    }
    row.other_rate = a.answered ? static_cast<double>(a.other) / static_cast<double>(a.answered) : 0.0;
    table.rows.push_back(row);
  }
  return table;
}

EvalRun run_eval(std::span<const StoryInstance> instances, const PromptSpec& spec, ChatClient& client,
                 const EvalOptions& options) {
  const int repeats = std::max(options.repeats, 1);
  const std::size_t n = instances.size() * static_cast<std::size_t>(repeats);
  EvalRun run;
  run.records.resize(n);
  std::vector<std::vector<ChatMessage>> prompts(options.transcript ? n : 0);

  bounded_parallel(n, options.concurrency, [&](std::size_t slot) {
    const auto& inst = instances[slot / static_cast<std::size_t>(repeats)];
    const int rep = static_cast<int>(slot % static_cast<std::size_t>(repeats));
    EvalRecord& rec = run.records[slot];
    rec.instance_id = inst.id;
    rec.k = inst.k;
    rec.repeat = rep;
    ChatRequest request{build_prompt(inst, spec), inst.id + "#" + std::to_string(rep)};

    auto backoff = options.backoff;
    const auto start = std::chrono::steady_clock::now();
    for (int attempt = 0;; ++attempt) {
      try {
        rec.completion = client.complete(request).content;
        rec.failed = false;
        break;
      } catch (const TransportError& e) {
        rec.failed = true;
        rec.error = e.what();
        if (attempt >= options.retries) break;
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
    rec.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!rec.failed) {
      rec.error.clear();
      if (spec.mode == PromptMode::asp_translation) {
        const auto program = parse_asp_facts(rec.completion);
        std::optional<Direction> got;
        if (program.query) {
          const auto outcome = solve(program.facts, *program.query);
          if (const auto* a = std::get_if<Answer>(&outcome); a && a->direction != Direction::overlap) got = a->direction;
        }
        rec.label = got ? spec.pack.answer_label(*got) : std::string(kOtherLabel);
      } else {
        const auto got = extract_answer(rec.completion, spec.pack);
        rec.label = got ? spec.pack.answer_label(*got) : std::string(kOtherLabel);
      }
      rec.correct = rec.label == inst.answer;
    } else {
      rec.label = std::string(kOtherLabel);
    }
    if (options.transcript) prompts[slot] = std::move(request.messages);
  });

  run.table = score(run.records, repeats, options.failures_count_as_incorrect);
  run.table.model = client.model_name();

  if (options.transcript) {
    std::ofstream out(*options.transcript, std::ios::binary | std::ios::app);
    if (!out) throw DatasetError("cannot write transcript " + options.transcript->string());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = run.records[i];
      ojson j;
      j["session"] = r.instance_id + "#" + std::to_string(r.repeat);
      j["model"] = run.table.model;
      j["mode"] = std::string(name_of(spec.mode));
      j["id"] = r.instance_id;
      j["k"] = r.k;
      j["repeat"] = r.repeat;
      ojson msgs = ojson::array();
      for (const auto& m : prompts[i]) msgs.push_back({{"role", m.role}, {"content", m.content}});
      j["messages"] = msgs;
      j["completion"] = r.completion;
      j["label"] = r.label;
      j["correct"] = r.correct;
      j["failed"] = r.failed;
      j["error"] = r.error;
      j["latency_ms"] = r.latency_ms;
      out << j.dump() << '\n';
    }
  }
  return run;
}

std::vector<Experiment> standard_experiments(std::size_t per_k_count) {
  BuildConfig base;  // clean shuffled English, symbolic names
  base.per_k_count = per_k_count;
  base.variants = {VariantKind::clean_shuffled};
  auto with = [&](auto&& edit) {
    BuildConfig c = base;
    edit(c);
    return c;
  };
  const std::vector<int> short_k = {1, 2, 5, 10};

  std::vector<Experiment> out;
  out.push_back({"productivity",
                 {{"five_shot", base, PromptMode::five_shot_default, false},
                  {"zero_shot", base, PromptMode::zero_shot, false}}});
  out.push_back({"systematicity",
                 {{"english", with([&](BuildConfig& c) { c.k_values = short_k; }), PromptMode::five_shot_default, false},
                  {"nonce_directions", with([&](BuildConfig& c) {
                     c.k_values = short_k;
                     c.language = "nonce-direction";
                   }),
                   PromptMode::five_shot_familiarization, false}}});
  out.push_back({"overgeneralisation",
                 {{"ordered_prompt/ordered", with([](BuildConfig& c) { c.variants = {VariantKind::clean_ordered}; }),
                   PromptMode::five_shot_ordered, false},
                  {"ordered_prompt/shuffled", base, PromptMode::five_shot_ordered, false},
                  {"default_prompt/clean", base, PromptMode::five_shot_default, false},
                  {"default_prompt/noisy", with([](BuildConfig& c) { c.variants = {VariantKind::noisy_shuffled}; }),
                   PromptMode::five_shot_default, false}}});
  Experiment subst{"substitutivity", {}};
  for (auto scheme : {NamingScheme::symbolic, NamingScheme::male, NamingScheme::female, NamingScheme::nonce,
                      NamingScheme::city}) {
    const auto cfg = with([&](BuildConfig& c) { c.naming = scheme; });
    subst.conditions.push_back({std::string(name_of(scheme)) + "/five_shot", cfg, PromptMode::five_shot_default,
                                scheme != NamingScheme::symbolic});
    subst.conditions.push_back({std::string(name_of(scheme)) + "/zero_shot", cfg, PromptMode::zero_shot, false});
  }
  out.push_back(std::move(subst));
  Experiment translation{"translation", {}};
  for (const char* lang : {"english", "hindi", "swedish"}) {
    translation.conditions.push_back({lang, with([&](BuildConfig& c) {
                                        c.k_values = short_k;
                                        c.language = lang;
                                        c.variants = {VariantKind::clean_ordered};
                                      }),
                                      PromptMode::five_shot_default, false});
  }
  out.push_back(std::move(translation));
  out.push_back({"llm_asp", {{"asp_translation", base, PromptMode::asp_translation, false}}});
  return out;
}

std::optional<Experiment> find_experiment(std::string_view name, std::size_t per_k_count) {
  for (auto& e : standard_experiments(per_k_count)) {
    if (e.name == name) return e;
  }
  return std::nullopt;
}

ExperimentResult run_experiment(const Experiment& experiment, const ClientFactory& make_client,
                                const EvalOptions& options, const std::filesystem::path& data_dir) {
  ExperimentResult result{experiment.name, {}};
  for (const auto& cond : experiment.conditions) {
    const auto res = BuildResources::load(cond.data, data_dir);
    const auto instances = build_dataset(cond.data, res);
    PromptSpec spec = make_prompt_spec(cond.mode, cond.data.language, data_dir);
    if (cond.rename_examples) {
      spec.example_names = res.pool;
      spec.example_seed = cond.data.master_seed;
    }
    auto client = make_client(spec);
    auto run = run_eval(instances, spec, *client, options);
    run.table.condition = cond.label;
    result.tables.push_back(std::move(run.table));
  }
  return result;
}

std::string score_csv(std::span<const ScoreTable> tables) {
  std::string out = "model,condition,k,mean,std,guess_rate\n";
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      out += csv_field(t.model) + "," + csv_field(t.condition) + "," + std::to_string(r.k) + "," + fmt(r.mean) +
             "," + fmt(r.stddev) + "," + fmt(t.guess_rate) + "\n";
    }
  }
  return out;
}

void write_report(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(out_dir / name, std::ios::binary);
    out << body;
    if (!out) throw DatasetError("cannot write " + (out_dir / name).string());
  };
  write(result.experiment + ".csv", score_csv(result.tables));

  std::string plot = "# condition\tk\tmean\tstd\tguess_rate\n";
  std::string other = "model,condition,k,instances,other_rate,failures\n";
  for (const auto& t : result.tables) {
    for (const auto& r : t.rows) {
      plot += t.condition + "\t" + std::to_string(r.k) + "\t" + fmt(r.mean) + "\t" + fmt(r.stddev) + "\t" +
              fmt(t.guess_rate) + "\n";
      other += csv_field(t.model) + "," + csv_field(t.condition) + "," + std::to_string(r.k) + "," +
               std::to_string(r.instances) + "," + fmt(r.other_rate) + "," + std::to_string(r.failures) + "\n";
    }
  }
  write(result.experiment + ".plot.tsv", plot);
  write(result.experiment + ".other.csv", other);
}

}  // namespace gridhop

// gridhop command line: dataset generation and verification, evaluation runs,
// ASP emission and nonce-word utilities.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gridhop/dataset.hpp"
#include "gridhop/errors.hpp"
#include "gridhop/eval.hpp"
#include "gridhop/oracle.hpp"
#include "gridhop/paths.hpp"
#include "gridhop/solver.hpp"

using namespace gridhop;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ClientArgs {
  std::string kind = "mock-oracle";
  std::string base_url = HttpClientConfig{}.base_url;
  std::string path = HttpClientConfig{}.path;
  std::string model = HttpClientConfig{}.model;
  std::string api_key_env = HttpClientConfig{}.api_key_env;
  int max_tokens = 0;
  int timeout = 120;
  std::uint64_t seed = 0;
  std::string replay;

  void add_to(CLI::App* app) {
    app->add_option("--client", kind, "live, mock-oracle, mock-uniform or replay")
        ->check(CLI::IsMember({"live", "mock-oracle", "mock-uniform", "replay"}));
    app->add_option("--base-url", base_url, "chat-completions server");
    app->add_option("--endpoint", path, "request path on the server");
    app->add_option("--model", model);
    app->add_option("--api-key-env", api_key_env, "environment variable holding the API key");
    app->add_option("--max-tokens", max_tokens, "0 leaves it to the server");
    app->add_option("--timeout", timeout, "seconds");
    app->add_option("--client-seed", seed, "seed of the mock-uniform client");
    app->add_option("--replay", replay, "transcript for the replay client");
  }

  std::unique_ptr<ChatClient> make(const PromptSpec& spec) const {
    if (kind == "live") {
      HttpClientConfig cfg;
      cfg.base_url = base_url;
      cfg.path = path;
      cfg.model = model;
      cfg.api_key_env = api_key_env;
      if (max_tokens > 0) cfg.max_tokens = max_tokens;
      cfg.timeout_seconds = timeout;
      return std::make_unique<HttpChatClient>(cfg);
    }
    if (kind == "mock-uniform") return std::make_unique<MockUniformClient>(spec.pack, seed);
    if (kind == "replay") {
      if (replay.empty()) throw Error("--client replay needs --replay <transcript>");
      return std::make_unique<ReplayClient>(replay);
    }
    return std::make_unique<MockOracleClient>(spec.pack, spec.mode == PromptMode::asp_translation);
  }
};

struct RunArgs {
  int repeats = 3;
  unsigned concurrency = 4;
  int retries = 3;
  std::string transcript;
  std::string out;
  bool failures_excluded = false;

  void add_to(CLI::App* app) {
    app->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
    app->add_option("--concurrency", concurrency)->check(CLI::PositiveNumber);
    app->add_option("--retries", retries)->check(CLI::NonNegativeNumber);
    app->add_option("--transcript", transcript, "append every request and completion as JSONL");
    app->add_option("--out", out, "directory for the CSV and plot files");
    app->add_flag("--exclude-failures", failures_excluded, "leave transport failures out of the accuracy");
  }

  EvalOptions options() const {
    EvalOptions o;
    o.repeats = repeats;
    o.concurrency = concurrency;
    o.retries = retries;
    o.failures_count_as_incorrect = !failures_excluded;
    if (!transcript.empty()) o.transcript = fs::path(transcript);
    return o;
  }
};

void print_tables(const ExperimentResult& result) {
  std::cout << score_csv(result.tables);
  for (const auto& t : result.tables) {
    for (const auto& r : t.rows) {
      if (r.failures > 0 || r.other_rate > 0) {
        std::cerr << t.condition << " k=" << r.k << ": other " << r.other_rate << ", failures " << r.failures << "\n";
      }
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridhop: multi-hop spatial reasoning stories on a grid"};
  app.require_subcommand(1);
  std::string data_dir;
  app.add_option("--data", data_dir, "packs, prompts, names and ASP assets (default: shipped data)");

  // generate
  auto* gen = app.add_subcommand("generate", "build a dataset directory");
  std::string gen_config, gen_out;
  std::optional<std::uint64_t> gen_seed;
  unsigned gen_threads = 0;
  gen->add_option("--config", gen_config, "JSON build config (defaults apply to absent fields)");
  gen->add_option("--seed", gen_seed, "master seed, overrides the config");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--threads", gen_threads, "0 picks the hardware concurrency");

  // verify
  auto* ver = app.add_subcommand("verify", "re-verify every instance of a dataset with the oracle route");
  std::string ver_dir;
  ver->add_option("dir", ver_dir)->required();

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a client on a dataset");
  std::string ev_dataset, ev_mode = "five_shot_default", ev_language;
  ClientArgs ev_client;
  RunArgs ev_run;
  ev->add_option("--dataset", ev_dataset)->required();
  ev->add_option("--mode", ev_mode);
  ev->add_option("--language", ev_language, "prompt language (default: the dataset's)");
  ev_client.add_to(ev);
  ev_run.add_to(ev);

  // experiment
  auto* ex = app.add_subcommand("experiment", "run one of the standard experiment suites");
  std::string ex_name;
  std::size_t ex_per_k = 200;
  std::optional<std::uint64_t> ex_seed;
  ClientArgs ex_client;
  RunArgs ex_run;
  ex->add_option("name", ex_name,
                 "productivity, systematicity, overgeneralisation, substitutivity, translation, llm_asp or all")
      ->required();
  ex->add_option("--per-k", ex_per_k, "instances per k")->check(CLI::PositiveNumber);
  ex->add_option("--seed", ex_seed, "master seed of the generated data");
  ex_client.add_to(ex);
  ex_run.add_to(ex);

  // emit-asp
  auto* asp = app.add_subcommand("emit-asp", "translate a story into an answer-set program");
  std::string asp_dataset, asp_id, asp_story, asp_language = "english";
  bool asp_knowledge = false, asp_solve = false;
  asp->add_option("--dataset", asp_dataset, "dataset directory (with --id)");
  asp->add_option("--id", asp_id);
  asp->add_option("--story", asp_story, "text file: story lines, then the question as the last line");
  asp->add_option("--language", asp_language);
  asp->add_flag("--knowledge", asp_knowledge, "append the knowledge module");
  asp->add_flag("--solve", asp_solve, "also print the native solver's answer to stderr");

  // nonce-words
  auto* nw = app.add_subcommand("nonce-words", "sample nonce words");
  std::size_t nw_count = 10, nw_length = 7, nw_distance = 2;
  std::uint64_t nw_seed = 0;
  nw->add_option("-n,--count", nw_count);
  nw->add_option("--seed", nw_seed);
  nw->add_option("--length", nw_length)->check(CLI::Range(3, 30));
  nw->add_option("--min-distance", nw_distance)->check(CLI::Range(1, 10));

  // nonce-pack
  auto* np = app.add_subcommand("nonce-pack", "write a nonce-direction pack with freshly sampled tokens");
  std::uint64_t np_seed = 0;
  std::string np_out;
  np->add_option("--seed", np_seed);
  np->add_option("--out", np_out, "pack file (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  const fs::path data = resolve_data_dir(data_dir);

  try {
    if (*gen) {
      BuildConfig cfg = gen_config.empty() ? BuildConfig{} : config_from_json_text(read_file(gen_config));
      if (gen_seed) cfg.master_seed = *gen_seed;
      const auto summary = generate_dataset_dir(cfg, gen_out, data, gen_threads);
      std::cout << "wrote " << summary.instances << " instances to " << gen_out << "\n";
      return 0;
    }
    if (*ver) {
      const auto report = verify_dataset_dir(ver_dir, data);
      for (const auto& f : report.failures) std::cerr << f << "\n";
      std::cout << report.checked << " checked, " << report.failures.size() << " failed\n";
      return report.failures.empty() ? 0 : 1;
    }
    if (*ev) {
      const auto mode = parse_prompt_mode(ev_mode);
      if (!mode) throw Error("unknown mode '" + ev_mode + "'");
      const auto instances = load_dataset_dir(ev_dataset, 0.01, data);
      if (instances.empty()) throw Error("dataset is empty");
      const auto language = ev_language.empty() ? instances.front().meta.language : ev_language;
      const auto spec = make_prompt_spec(*mode, language, data);
      const auto client = ev_client.make(spec);
      auto run = run_eval(instances, spec, *client, ev_run.options());
      run.table.condition = std::string(name_of(*mode)) + "/" + language;
      ExperimentResult result{"eval", {run.table}};
      print_tables(result);
      if (!ev_run.out.empty()) write_report(result, ev_run.out);
      return 0;
    }
    if (*ex) {
      std::vector<Experiment> chosen;
      if (ex_name == "all") {
        chosen = standard_experiments(ex_per_k);
      } else if (auto e = find_experiment(ex_name, ex_per_k)) {
        chosen.push_back(*e);
      } else {
        throw Error("unknown experiment '" + ex_name + "'");
      }
      for (auto& e : chosen) {
        if (ex_seed) {
          for (auto& c : e.conditions) c.data.master_seed = *ex_seed;
        }
        const auto result = run_experiment(e, [&](const PromptSpec& s) { return ex_client.make(s); },
                                           ex_run.options(), data);
        std::cout << "# " << e.name << "\n";
        print_tables(result);
        if (!ex_run.out.empty()) write_report(result, ex_run.out);
      }
      return 0;
    }
    if (*asp) {
      ParsedProgram program;
      if (!asp_dataset.empty()) {
        if (asp_id.empty()) throw Error("--dataset needs --id");
        const auto instances = read_jsonl(fs::path(asp_dataset) / "instances.jsonl");
        const auto it = std::find_if(instances.begin(), instances.end(),
                                     [&](const StoryInstance& i) { return i.id == asp_id; });
        if (it == instances.end()) throw Error("no instance '" + asp_id + "'");
        program = parse_story(it->story, it->question, load_shipped_pack(data, it->meta.language));
      } else if (!asp_story.empty()) {
        std::istringstream in(read_file(asp_story));
        std::vector<std::string> lines;
        for (std::string line; std::getline(in, line);) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (!line.empty()) lines.push_back(line);
        }
        if (lines.size() < 2) throw Error(asp_story + ": need story lines and a question");
        const auto question = lines.back();
        lines.pop_back();
        program = parse_story(lines, question, load_shipped_pack(data, asp_language));
      } else {
        throw Error("give --dataset and --id, or --story");
      }
      std::cout << emit_asp(program, asp_knowledge, data);
      if (asp_solve) std::cerr << describe(solve(program)) << "\n";
      return 0;
    }
    if (*nw) {
      auto spec = default_nonce_spec(data);
      spec.length = nw_length;
      spec.min_distance = nw_distance;
      Rng rng(nw_seed);
      for (const auto& w : gen_nonce_words(nw_count, spec, rng)) std::cout << w << "\n";
      return 0;
    }
    if (*np) {
      auto spec = default_nonce_spec(data);
      Rng rng(np_seed);
      const auto w = gen_nonce_words(4, spec, rng);
      const auto text = pack_to_json_text(make_nonce_direction_pack({w[0], w[1], w[2], w[3]}));
      if (np_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(np_out, std::ios::binary) << text;
      }
      std::cerr << "up=" << w[0] << " down=" << w[1] << " left=" << w[2] << " right=" << w[3] << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "gridhop: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

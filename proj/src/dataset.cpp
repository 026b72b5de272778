#include "gridhop/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gridhop/errors.hpp"
#include "gridhop/paths.hpp"
#include "gridhop/solver.hpp"

namespace gridhop {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kVariantNames[] = {"clean_ordered", "clean_shuffled", "noisy_ordered",
                                              "noisy_shuffled"};
constexpr std::string_view kInstancesFile = "instances.jsonl";
constexpr std::string_view kManifestFile = "manifest.json";

std::string_view order_kind_name(OrderPolicy::Kind kind) {
  switch (kind) {
    case OrderPolicy::Kind::ordered: return "ordered";
    case OrderPolicy::Kind::partial: return "partial";
    case OrderPolicy::Kind::full: return "full";
  }
  return "full";
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

ojson config_json(const BuildConfig& cfg) {
  ojson j;
  j["k_values"] = cfg.k_values;
  j["per_k_count"] = cfg.per_k_count;
  j["language"] = cfg.language;
  j["naming"] = std::string(name_of(cfg.naming));
  ojson variants = ojson::array();
  for (auto v : cfg.variants) variants.push_back(std::string(name_of(v)));
  j["variants"] = variants;
  j["master_seed"] = cfg.master_seed;
  j["distractors"] = {{"count", cfg.distractors.fixed_count ? ojson(*cfg.distractors.fixed_count) : ojson()},
                      {"chain_depth", cfg.distractors.chain_depth}};
  j["shuffle"] = {{"kind", std::string(order_kind_name(cfg.shuffle.kind))}, {"fraction", cfg.shuffle.fraction}};
  j["randomize_query_orientation"] = cfg.randomize_query_orientation;
  j["max_k"] = cfg.max_k;
  return j;
}

std::size_t node_budget(const BuildConfig& cfg) {
  std::size_t most = 0;
  for (int k : cfg.k_values) {
    most = std::max(most, static_cast<std::size_t>(k + 1 + cfg.distractors.count_for(k)));
  }
  return most;
}

std::vector<InstanceKey> keys_of(const BuildConfig& cfg) {
  std::vector<InstanceKey> keys;
  keys.reserve(cfg.k_values.size() * cfg.variants.size() * cfg.per_k_count);
  for (int k : cfg.k_values) {
    for (auto v : cfg.variants) {
      for (std::uint64_t i = 0; i < cfg.per_k_count; ++i) keys.push_back({k, i, v});
    }
  }
  return keys;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first
// exception after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (!failed) {
        const std::size_t i = next++;
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void check_instance(const StoryInstance& inst, const TemplatePack& pack) {
  bool ok = false;
  std::string why = "answer mismatch";
  try {
    ok = verify_instance(inst, pack);
  } catch (const Error& e) {
    why = e.what();
  }
  if (!ok) throw VerificationFailed(inst.id + ": " + why);
}

}  // namespace

std::string_view name_of(VariantKind v) { return kVariantNames[static_cast<std::size_t>(v)]; }

std::optional<VariantKind> parse_variant(std::string_view name) {
  for (auto v : kAllVariants) {
    if (name_of(v) == name) return v;
  }
  return std::nullopt;
}

std::uint64_t derive_seed(std::uint64_t master, const InstanceKey& key) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(key.k));
  h = splitmix64(h ^ key.index);
  return splitmix64(h ^ static_cast<std::uint64_t>(key.variant));
}

void BuildConfig::validate() const {
  if (k_values.empty()) throw std::invalid_argument("k_values must not be empty");
  if (per_k_count < 1) throw std::invalid_argument("per_k_count must be >= 1");
  if (variants.empty()) throw std::invalid_argument("variants must not be empty");
  for (int k : k_values) {
    if (k < 1 || k > max_k) {
      throw std::invalid_argument("k=" + std::to_string(k) + " outside [1, " + std::to_string(max_k) + "]");
    }
  }
  if (std::set<int>(k_values.begin(), k_values.end()).size() != k_values.size()) {
    throw std::invalid_argument("duplicate k value");
  }
  if (std::set<VariantKind>(variants.begin(), variants.end()).size() != variants.size()) {
    throw std::invalid_argument("duplicate variant");
  }
  if (distractors.fixed_count && *distractors.fixed_count < 1) {
    throw std::invalid_argument("distractor count must be >= 1");
  }
  if (distractors.chain_depth < 1) throw std::invalid_argument("chain_depth must be >= 1");
  if (shuffle.kind == OrderPolicy::Kind::ordered) {
    throw std::invalid_argument("shuffle policy must shuffle (use the *_ordered variants for ordered stories)");
  }
  if (shuffle.fraction < 0.0 || shuffle.fraction > 1.0) {
    throw std::invalid_argument("shuffle fraction must lie in [0, 1]");
  }
}

BuildConfig config_from_json_text(std::string_view text) {
  static const std::set<std::string> known = {
      "k_values", "per_k_count", "language", "naming", "variants", "master_seed",
      "distractors", "shuffle", "randomize_query_orientation", "max_k"};
  BuildConfig cfg;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw SchemaError("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!known.contains(it.key())) throw SchemaError("unknown config field '" + it.key() + "'");
    }
    if (j.contains("k_values")) cfg.k_values = j.at("k_values").get<std::vector<int>>();
    if (j.contains("per_k_count")) cfg.per_k_count = j.at("per_k_count").get<std::size_t>();
    if (j.contains("language")) cfg.language = j.at("language").get<std::string>();
    if (j.contains("naming")) {
      const auto name = j.at("naming").get<std::string>();
      auto scheme = parse_naming_scheme(name);
      if (!scheme) throw SchemaError("unknown naming scheme '" + name + "'");
      cfg.naming = *scheme;
    }
    if (j.contains("variants")) {
      cfg.variants.clear();
      for (const auto& v : j.at("variants")) {
        auto kind = parse_variant(v.get<std::string>());
        if (!kind) throw SchemaError("unknown variant '" + v.get<std::string>() + "'");
        cfg.variants.push_back(*kind);
      }
    }
    if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("distractors")) {
      const auto& d = j.at("distractors");
      if (d.contains("count") && !d.at("count").is_null()) cfg.distractors.fixed_count = d.at("count").get<int>();
      if (d.contains("chain_depth")) cfg.distractors.chain_depth = d.at("chain_depth").get<int>();
    }
    if (j.contains("shuffle")) {
      const auto& s = j.at("shuffle");
      const auto kind = s.value("kind", std::string("full"));
      if (kind == "full") {
        cfg.shuffle = OrderPolicy::full();
      } else if (kind == "partial") {
        cfg.shuffle = OrderPolicy::partial(s.value("fraction", 0.5));
      } else {
        throw SchemaError("unknown shuffle kind '" + kind + "'");
      }
    }
    if (j.contains("randomize_query_orientation")) {
      cfg.randomize_query_orientation = j.at("randomize_query_orientation").get<bool>();
    }
    if (j.contains("max_k")) cfg.max_k = j.at("max_k").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
  return cfg;
}

std::string config_to_json_text(const BuildConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

std::string config_hash(const BuildConfig& cfg) { return hex64(fnv1a64(config_json(cfg).dump())); }

BuildResources BuildResources::load(const BuildConfig& cfg, const std::filesystem::path& data_dir) {
  BuildResources res;
  res.data_dir = resolve_data_dir(data_dir);
  res.pack = load_shipped_pack(res.data_dir, cfg.language);
  switch (cfg.naming) {
    case NamingScheme::symbolic:
      res.pool = symbolic_pool(2);
      break;
    case NamingScheme::male:
      res.pool = load_name_csv(res.data_dir / "names" / "male.csv", cfg.naming);
      break;
    case NamingScheme::female:
      res.pool = load_name_csv(res.data_dir / "names" / "female.csv", cfg.naming);
      break;
    case NamingScheme::city:
      res.pool = load_name_csv(res.data_dir / "names" / "cities.csv", cfg.naming);
      break;
    case NamingScheme::nonce: {
      auto spec = default_nonce_spec(res.data_dir);
      for (const auto& [_, token] : res.pack.direction_lexicon) spec.exclude.insert(token);
      Rng rng(splitmix64(cfg.master_seed ^ fnv1a64("nonce-pool")));
      res.pool = nonce_pool(std::max<std::size_t>(256, node_budget(cfg)), spec, rng);
      break;
    }
  }
  if (res.pool.entries.size() < node_budget(cfg)) {
    throw PoolExhausted("pool '" + res.pool.source + "' has " + std::to_string(res.pool.entries.size()) +
                        " names; the config needs " + std::to_string(node_budget(cfg)));
  }
  return res;
}

std::string instance_id(const InstanceKey& key) {
  char index[32];
  std::snprintf(index, sizeof index, "%06llu", static_cast<unsigned long long>(key.index));
  return "k" + std::to_string(key.k) + "-" + std::string(name_of(key.variant)) + "-" + index;
}

StoryInstance make_instance(const BuildConfig& cfg, const BuildResources& res, const InstanceKey& key) {
  const std::uint64_t base_seed = derive_seed(cfg.master_seed, {key.k, key.index, VariantKind::clean_ordered});
  const std::uint64_t noise_seed = derive_seed(cfg.master_seed, {key.k, key.index, VariantKind::noisy_ordered});
  const std::uint64_t own_seed = derive_seed(cfg.master_seed, key);
  const int m = cfg.distractors.count_for(key.k);

  Rng base(base_seed);
  const Walk walk = generate_walk(key.k, base, {cfg.max_k, 1000});
  Skeleton s = make_skeleton(walk, base, {true, cfg.randomize_query_orientation});
  const auto names = assign_names(static_cast<std::size_t>(key.k + 1 + m), res.pool, base);

  if (is_noisy(key.variant)) {
    Rng noise(noise_seed);
    s = inject_noise(std::move(s), m, noise, {cfg.distractors.chain_depth, 200});
  }
  Rng order(own_seed);
  s = order_story(std::move(s), is_shuffled(key.variant) ? cfg.shuffle : OrderPolicy::ordered(), order);

  StoryInstance inst;
  inst.id = instance_id(key);
  inst.k = key.k;
  inst.story.reserve(s.facts.size());
  for (const auto& f : s.facts) {
    // Per-fact streams keep the wording of a fact identical across variants.
    Rng wording(splitmix64((f.on_path ? base_seed : noise_seed) + f.ordinal + 1));
    inst.story.push_back(number_line(inst.story.size() + 1, render_fact(f, names, res.pack, wording)));
  }
  Rng question(splitmix64(base_seed ^ fnv1a64("question")));
  inst.question = render_question(s.query, names, res.pack, question);
  inst.answer = res.pack.answer_label(s.answer);
  inst.meta.language = res.pack.language;
  inst.meta.naming = std::string(name_of(cfg.naming));
  inst.meta.noisy = s.variant.noisy;
  inst.meta.shuffled = s.variant.shuffled;
  inst.meta.seed = own_seed;
  inst.meta.distractors = s.variant.noisy ? m : 0;
  return inst;
}

void build_dataset(const BuildConfig& cfg, const BuildResources& res,
                   const std::function<void(const StoryInstance&)>& sink, unsigned threads) {
  cfg.validate();
  const auto keys = keys_of(cfg);
  constexpr std::size_t kBlock = 8192;
  std::vector<StoryInstance> block;
  for (std::size_t start = 0; start < keys.size(); start += kBlock) {
    const std::size_t n = std::min(kBlock, keys.size() - start);
    block.assign(n, StoryInstance{});
    parallel_for(n, threads, [&](std::size_t i) {
      block[i] = make_instance(cfg, res, keys[start + i]);
      check_instance(block[i], res.pack);
    });
    for (const auto& inst : block) sink(inst);
  }
}

std::vector<StoryInstance> build_dataset(const BuildConfig& cfg, const BuildResources& res, unsigned threads) {
  std::vector<StoryInstance> out;
  build_dataset(cfg, res, [&](const StoryInstance& i) { out.push_back(i); }, threads);
  return out;
}

std::string to_jsonl_line(const StoryInstance& inst) {
  ojson j;
  j["id"] = inst.id;
  j["k"] = inst.k;
  j["story"] = inst.story;
  j["question"] = inst.question;
  j["answer"] = inst.answer;
  j["meta"] = {{"language", inst.meta.language}, {"naming", inst.meta.naming},
               {"noisy", inst.meta.noisy},       {"shuffled", inst.meta.shuffled},
               {"seed", inst.meta.seed},         {"distractors", inst.meta.distractors}};
  return j.dump();
}

StoryInstance from_jsonl_line(std::string_view line, std::size_t line_number) {
  const std::string where = line_number ? "line " + std::to_string(line_number) + ": " : std::string();
  StoryInstance inst;
  try {
    const auto j = nlohmann::json::parse(line);
    if (!j.is_object()) throw DatasetError(where + "record is not an object", line_number);
    for (const char* field : {"id", "k", "story", "question", "answer", "meta"}) {
      if (!j.contains(field)) throw DatasetError(where + "missing field '" + field + "'", line_number);
    }
    inst.id = j.at("id").get<std::string>();
    inst.k = j.at("k").get<int>();
    inst.story = j.at("story").get<std::vector<std::string>>();
    inst.question = j.at("question").get<std::string>();
    inst.answer = j.at("answer").get<std::string>();
    const auto& m = j.at("meta");
    inst.meta.language = m.at("language").get<std::string>();
    inst.meta.naming = m.at("naming").get<std::string>();
    inst.meta.noisy = m.at("noisy").get<bool>();
    inst.meta.shuffled = m.at("shuffled").get<bool>();
    inst.meta.seed = m.at("seed").get<std::uint64_t>();
    inst.meta.distractors = m.at("distractors").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(where + e.what(), line_number);
  }
  return inst;
}

void write_jsonl(std::span<const StoryInstance> instances, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write " + path.string());
  for (const auto& inst : instances) out << to_jsonl_line(inst) << '\n';
  if (!out) throw DatasetError("write failed: " + path.string());
}

std::vector<StoryInstance> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::vector<StoryInstance> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    out.push_back(from_jsonl_line(line, n));
  }
  return out;
}

DatasetSummary generate_dataset_dir(const BuildConfig& cfg, const std::filesystem::path& out_dir,
                                    const std::filesystem::path& data_dir, unsigned threads) {
  cfg.validate();
  const auto res = BuildResources::load(cfg, data_dir);
  std::filesystem::create_directories(out_dir);
  const auto tmp = out_dir / (std::string(kInstancesFile) + ".partial");

  DatasetSummary summary;
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DatasetError("cannot write " + tmp.string());
    build_dataset(cfg, res, [&](const StoryInstance& inst) {
      const auto line = to_jsonl_line(inst) + "\n";
      for (unsigned char c : line) {
        digest ^= c;
        digest *= 0x100000001b3ULL;
      }
      out << line;
      ++summary.instances;
      ++summary.counts["k=" + std::to_string(inst.k) + "/" +
                       std::string(name_of(inst.meta.noisy ? (inst.meta.shuffled ? VariantKind::noisy_shuffled
                                                                                 : VariantKind::noisy_ordered)
                                                           : (inst.meta.shuffled ? VariantKind::clean_shuffled
                                                                                 : VariantKind::clean_ordered)))];
    }, threads);
    if (!out) throw DatasetError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, out_dir / kInstancesFile);

  ojson manifest;
  manifest["format"] = "gridhop-jsonl/1";
  manifest["instances_file"] = std::string(kInstancesFile);
  manifest["instances"] = summary.instances;
  manifest["instances_fnv1a64"] = hex64(digest);
  manifest["config_hash"] = config_hash(cfg);
  manifest["master_seed"] = cfg.master_seed;
  manifest["pack"] = {{"language", res.pack.language}, {"version", res.pack.version}, {"partial", res.pack.partial}};
  manifest["name_pool"] = {{"source", res.pool.source}, {"size", res.pool.entries.size()}};
  manifest["counts"] = summary.counts;
  manifest["config"] = config_json(cfg);
  std::ofstream mout(out_dir / kManifestFile, std::ios::binary);
  mout << manifest.dump(2) << '\n';
  if (!mout) throw DatasetError("cannot write manifest in " + out_dir.string());
  return summary;
}

std::vector<StoryInstance> load_dataset_dir(const std::filesystem::path& dir, double spot_check_fraction,
                                            const std::filesystem::path& data_dir) {
  auto instances = read_jsonl(dir / kInstancesFile);
  if (instances.empty() || spot_check_fraction <= 0.0) return instances;
  const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(1.0 / std::min(1.0, spot_check_fraction))));
  std::map<std::string, TemplatePack> packs;
  const auto root = resolve_data_dir(data_dir);
  for (std::size_t i = 0; i < instances.size(); i += stride) {
    const auto& inst = instances[i];
    auto it = packs.find(inst.meta.language);
    if (it == packs.end()) it = packs.emplace(inst.meta.language, load_shipped_pack(root, inst.meta.language)).first;
    check_instance(inst, it->second);
  }
  return instances;
}

VerifyReport verify_dataset_dir(const std::filesystem::path& dir, const std::filesystem::path& data_dir) {
  VerifyReport report;
  const auto instances = read_jsonl(dir / kInstancesFile);
  std::map<std::string, TemplatePack> packs;
  const auto root = resolve_data_dir(data_dir);
  for (const auto& inst : instances) {
    ++report.checked;
    try {
      auto it = packs.find(inst.meta.language);
      if (it == packs.end()) it = packs.emplace(inst.meta.language, load_shipped_pack(root, inst.meta.language)).first;
      if (!verify_instance(inst, it->second)) report.failures.push_back(inst.id + ": answer mismatch");
    } catch (const Error& e) {
      report.failures.push_back(inst.id + ": " + e.what());
    }
  }
  return report;
}

}  // namespace gridhop

#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "gridhop/dataset.hpp"
#include "gridhop/errors.hpp"
#include "gridhop/oracle.hpp"
#include "gridhop/solver.hpp"

using namespace gridhop;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("gridhop-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BuildConfig small_config() {
  BuildConfig cfg;
  cfg.k_values = {1, 2, 5};
  cfg.per_k_count = 20;
  return cfg;
}

}  // namespace

TEST_CASE("derive_seed golden value") {
  // splitmix64 chain for master 0, k 1, index 0, clean_ordered; computed outside the library.
  CHECK(derive_seed(0, {1, 0, VariantKind::clean_ordered}) == 0xd1c0270687984b37ULL);
  CHECK(derive_seed(0, {1, 0, VariantKind::clean_ordered}) == derive_seed(0, {1, 0, VariantKind::clean_ordered}));
  CHECK(derive_seed(1, {1, 0, VariantKind::clean_ordered}) != derive_seed(0, {1, 0, VariantKind::clean_ordered}));
}

TEST_CASE("derive_seed has no collisions over a million keys") {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(1'100'000);
  const int ks[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50, 100};
  std::size_t n = 0;
  for (int k : ks) {
    for (std::uint64_t i = 0; i < 20000; ++i) {
      for (auto v : kAllVariants) {
        seen.insert(derive_seed(0, {k, i, v}));
        ++n;
      }
    }
  }
  CHECK(n >= 1'000'000);
  CHECK(seen.size() == n);
}

TEST_CASE("variant names") {
  for (auto v : kAllVariants) CHECK(parse_variant(name_of(v)) == v);
  CHECK_FALSE(parse_variant("noisy").has_value());
  CHECK(is_noisy(VariantKind::noisy_ordered));
  CHECK_FALSE(is_shuffled(VariantKind::noisy_ordered));
  CHECK(instance_id({3, 42, VariantKind::noisy_shuffled}) == "k3-noisy_shuffled-000042");
}

TEST_CASE("build counts and contents") {
  BuildConfig cfg = small_config();
  cfg.k_values = {1};
  cfg.per_k_count = 200;
  cfg.variants = {VariantKind::clean_ordered};
  const auto res = BuildResources::load(cfg);
  const auto only_k1 = build_dataset(cfg, res);
  CHECK(only_k1.size() == 200);
  for (const auto& inst : only_k1) {
    CHECK(inst.k == 1);
    CHECK(inst.story.size() == 1);
  }

  const auto all = build_dataset(small_config(), res);
  CHECK(all.size() == 4 * 3 * 20);
}

TEST_CASE("k=4 instances have four clean lines and m extra noisy lines") {
  BuildConfig cfg;
  const auto res = BuildResources::load(cfg);
  const auto clean = make_instance(cfg, res, {4, 0, VariantKind::clean_ordered});
  CHECK(clean.story.size() == 4);
  CHECK(clean.story[0].starts_with("1 "));
  CHECK(clean.story[3].starts_with("4 "));
  const auto noisy = make_instance(cfg, res, {4, 0, VariantKind::noisy_ordered});
  CHECK(noisy.story.size() == 4 + 2);
  CHECK(noisy.meta.distractors == 2);
  CHECK(noisy.meta.noisy);
  CHECK_FALSE(noisy.meta.shuffled);
}

TEST_CASE("clean and noisy versions share walk, names and wording") {
  BuildConfig cfg;
  const auto res = BuildResources::load(cfg);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto clean = make_instance(cfg, res, {6, i, VariantKind::clean_ordered});
    const auto noisy = make_instance(cfg, res, {6, i, VariantKind::noisy_ordered});
    const auto noisy_sh = make_instance(cfg, res, {6, i, VariantKind::noisy_shuffled});
    CHECK(clean.question == noisy.question);
    CHECK(clean.answer == noisy.answer);
    for (std::size_t l = 0; l < clean.story.size(); ++l) CHECK(noisy.story[l] == clean.story[l]);
    std::multiset<std::string> a, b;
    for (const auto& l : noisy.story) a.insert(std::string(strip_line_number(l)));
    for (const auto& l : noisy_sh.story) b.insert(std::string(strip_line_number(l)));
    CHECK(a == b);
  }
}

TEST_CASE("every variant verifies for every naming scheme") {
  for (auto scheme : {NamingScheme::symbolic, NamingScheme::male, NamingScheme::female, NamingScheme::city,
                      NamingScheme::nonce}) {
    BuildConfig cfg = small_config();
    cfg.naming = scheme;
    cfg.per_k_count = 5;
    cfg.k_values = {1, 3, 10};
    const auto res = BuildResources::load(cfg);
    for (const auto& inst : build_dataset(cfg, res)) {
      CHECK(inst.meta.naming == name_of(scheme));
      CHECK(verify_instance(inst, res.pack));
    }
  }
}

TEST_CASE("nonce entity names avoid the nonce direction tokens") {
  BuildConfig cfg = small_config();
  cfg.naming = NamingScheme::nonce;
  cfg.language = "nonce-direction";
  const auto res = BuildResources::load(cfg);
  for (const auto& name : res.pool.entries) {
    std::string lower = name;
    lower[0] = static_cast<char>(lower[0] - 'A' + 'a');
    for (const auto& [_, token] : res.pack.direction_lexicon) CHECK(lower != token);
  }
}

TEST_CASE("jsonl round trip") {
  BuildConfig cfg;
  cfg.k_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  cfg.per_k_count = 25;
  const auto res = BuildResources::load(cfg);
  const auto insts = build_dataset(cfg, res);
  REQUIRE(insts.size() == 1000);
  const auto dir = scratch("roundtrip");
  write_jsonl(insts, dir / "x.jsonl");
  CHECK(read_jsonl(dir / "x.jsonl") == insts);

  const auto line = to_jsonl_line(insts[0]);
  const auto j = nlohmann::json::parse(line);
  for (const char* key : {"id", "k", "story", "question", "answer", "meta"}) CHECK(j.contains(key));
  CHECK(j["meta"]["seed"].is_number_unsigned());
  fs::remove_all(dir);
}

TEST_CASE("malformed line is reported with its number") {
  BuildConfig cfg = small_config();
  const auto res = BuildResources::load(cfg);
  const auto insts = build_dataset(cfg, res);
  const auto dir = scratch("malformed");
  {
    std::ofstream out(dir / "bad.jsonl");
    for (int i = 0; i < 10; ++i) out << (i == 6 ? std::string("{\"id\": \"oops\"") : to_jsonl_line(insts[i])) << '\n';
  }
  try {
    read_jsonl(dir / "bad.jsonl");
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 7);
    CHECK(std::string(e.what()).find('7') != std::string::npos);
  }
  CHECK_THROWS_AS(from_jsonl_line("{\"id\": \"x\"}", 3), DatasetError);
  fs::remove_all(dir);
}

TEST_CASE("dataset directory build is byte-identical across runs") {
  BuildConfig cfg = small_config();
  const auto a = scratch("det-a");
  const auto b = scratch("det-b");
  const auto sa = generate_dataset_dir(cfg, a, {}, 1);
  const auto sb = generate_dataset_dir(cfg, b, {}, 4);
  CHECK(sa.instances == 240);
  CHECK(sa.counts == sb.counts);
  CHECK(sa.counts.at("k=2/noisy_ordered") == 20);
  CHECK(slurp(a / "instances.jsonl") == slurp(b / "instances.jsonl"));
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));

  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["instances"] == 240);
  CHECK(manifest["config_hash"] == config_hash(cfg));

  const auto loaded = load_dataset_dir(a, 0.1);
  CHECK(loaded.size() == 240);
  const auto report = verify_dataset_dir(a);
  CHECK(report.checked == 240);
  CHECK(report.failures.empty());

  cfg.master_seed = 1;
  const auto c = scratch("det-c");
  generate_dataset_dir(cfg, c);
  CHECK(slurp(a / "instances.jsonl") != slurp(c / "instances.jsonl"));
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST_CASE("verify_dataset_dir flags tampered records") {
  BuildConfig cfg = small_config();
  const auto dir = scratch("tamper");
  generate_dataset_dir(cfg, dir);
  auto insts = read_jsonl(dir / "instances.jsonl");
  insts[5].answer = insts[5].answer == "above" ? "below" : "above";
  write_jsonl(insts, dir / "instances.jsonl");
  const auto report = verify_dataset_dir(dir);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].starts_with(insts[5].id));
  CHECK_THROWS_AS(load_dataset_dir(dir, 1.0), VerificationFailed);
  fs::remove_all(dir);
}

TEST_CASE("config json") {
  BuildConfig cfg = small_config();
  cfg.naming = NamingScheme::city;
  cfg.shuffle = OrderPolicy::partial(0.25);
  cfg.distractors.fixed_count = 3;
  const auto text = config_to_json_text(cfg);
  const auto back = config_from_json_text(text);
  CHECK(config_to_json_text(back) == text);
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(back).size() == 16);

  CHECK_THROWS_AS(config_from_json_text(R"({"k_valuez": [1]})"), SchemaError);
  CHECK_THROWS_AS(config_from_json_text(R"({"k_values": [0]})"), SchemaError);
  CHECK_THROWS_AS(config_from_json_text(R"({"naming": "klingon"})"), SchemaError);
  CHECK_THROWS_AS(config_from_json_text(R"({"variants": ["noisy"]})"), SchemaError);
  CHECK_THROWS_AS(config_from_json_text("[1,2]"), SchemaError);

  BuildConfig ordered;
  ordered.shuffle = OrderPolicy::ordered();
  CHECK_THROWS_AS(ordered.validate(), std::invalid_argument);
}

TEST_CASE("pool too small for the config") {
  BuildConfig cfg = small_config();
  cfg.naming = NamingScheme::male;
  cfg.k_values = {100};
  cfg.distractors.fixed_count = 150;
  CHECK_THROWS_AS(BuildResources::load(cfg), PoolExhausted);
}

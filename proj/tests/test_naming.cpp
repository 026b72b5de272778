#include <doctest.h>

#include <fstream>
#include <set>

#include "gridhop/errors.hpp"
#include "gridhop/naming.hpp"
#include "gridhop/paths.hpp"

using namespace gridhop;

namespace {

// Full-matrix edit distance, kept separate from the library's rolling rows.
std::size_t oracle_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    }
  }
  return d[a.size()][b.size()];
}

std::vector<std::string> dictionary_words() {
  std::ifstream in(default_data_dir() / "dictionary" / "english.txt");
  std::vector<std::string> words;
  std::string w;
  while (in >> w) {
    for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    words.push_back(w);
  }
  return words;
}

std::string random_word(Rng& rng) {
  std::string w(rng.below(7), 'a');
  for (auto& c : w) c = static_cast<char>('a' + rng.below(4));
  return w;
}

}  // namespace

TEST_CASE("levenshtein examples") {
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("abc", "abd") == 1);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("kitten", "sitting") == oracle_distance("kitten", "sitting"));
  CHECK(levenshtein("", "abc") == 3);
}

TEST_CASE("property: levenshtein agrees with the oracle and is a metric") {
  Rng rng(4);
  for (int t = 0; t < 3000; ++t) {
    const auto a = random_word(rng), b = random_word(rng), c = random_word(rng);
    const auto ab = levenshtein(a, b);
    REQUIRE(ab == oracle_distance(a, b));
    REQUIRE(ab == levenshtein(b, a));
    REQUIRE((ab == 0) == (a == b));
    REQUIRE(levenshtein(a, c) <= ab + levenshtein(b, c));
    for (std::size_t bound = 0; bound < 5; ++bound) REQUIRE(within_distance(a, b, bound) == (ab < bound));
  }
}

TEST_CASE("symbolic pool") {
  const NamePool pool = symbolic_pool(2);
  CHECK(pool.entries.size() == 26 + 26 * 26);
  std::set<std::string> unique(pool.entries.begin(), pool.entries.end());
  CHECK(unique.size() == pool.entries.size());
  CHECK(unique.contains("XU"));
  CHECK(unique.contains("XJX"));
  for (const auto& n : pool.entries) {
    CHECK(n.front() == 'X');
    CHECK(is_entity_name(n));
  }
}

TEST_CASE("assign_names") {
  Rng rng(8);
  const auto two = assign_names(2, symbolic_pool(2), rng);
  CHECK(two.size() == 2);
  CHECK(two[0] != two[1]);
  CHECK(two[0].front() == 'X');

  const auto data = default_data_dir() / "names";
  const NamingScheme schemes[] = {NamingScheme::male, NamingScheme::female, NamingScheme::city};
  const char* files[] = {"male.csv", "female.csv", "cities.csv"};
  for (int i = 0; i < 3; ++i) {
    const NamePool pool = load_name_csv(data / files[i], schemes[i]);
    CHECK(pool.entries.size() >= 151);
    for (std::size_t n : {std::size_t{3}, pool.entries.size()}) {
      const auto names = assign_names(n, pool, rng);
      CHECK(std::set<std::string>(names.begin(), names.end()).size() == n);
    }
    CHECK_THROWS_AS(assign_names(pool.entries.size() + 1, pool, rng), PoolExhausted);
  }
}

TEST_CASE("name csv loader skips headers and normalizes whitespace") {
  const auto path = std::filesystem::temp_directory_path() / "gridhop_names_test.csv";
  {
    std::ofstream out(path);
    out << "name,count\n  Milton   Keynes ,3\nOliver\n\nOliver\n\"Stoke-on-Trent\",1\n";
  }
  const NamePool pool = load_name_csv(path, NamingScheme::city);
  CHECK(pool.entries == std::vector<std::string>{"Milton Keynes", "Oliver", "Stoke-on-Trent"});
  std::filesystem::remove(path);
}

TEST_CASE("entity name rule") {
  CHECK(is_entity_name("XJX"));
  CHECK(is_entity_name("High Wycombe"));
  CHECK(is_entity_name("O'Neil"));
  CHECK_FALSE(is_entity_name("the"));
  CHECK_FALSE(is_entity_name(""));
  CHECK_FALSE(is_entity_name("A  B"));
  CHECK_FALSE(is_entity_name("XU."));
}

TEST_CASE("naming scheme names") {
  for (auto s : {NamingScheme::symbolic, NamingScheme::male, NamingScheme::female, NamingScheme::city,
                 NamingScheme::nonce}) {
    CHECK(parse_naming_scheme(name_of(s)) == s);
  }
  CHECK_FALSE(parse_naming_scheme("klingon").has_value());
}

TEST_CASE("gen_nonce_words over a tiny corpus") {
  NonceSpec spec;
  spec.corpus = "mention station nation lantern pattern eastern western caverns tavern sternum";
  spec.dictionary = Dictionary(std::vector<std::string>{"mention", "station", "lantern", "pattern"});
  Rng rng(12);
  CHECK(gen_nonce_words(0, spec, rng).empty());
  const auto one = gen_nonce_words(1, spec, rng);
  REQUIRE(one.size() == 1);
  CHECK(one[0].size() == 7);
  for (const auto& w : {"mention", "station", "lantern", "pattern"}) CHECK(oracle_distance(one[0], w) >= 2);

  spec.length = 2;
  CHECK_THROWS_AS(gen_nonce_words(1, spec, rng), std::invalid_argument);
  spec.length = 7;
  spec.corpus = "";
  CHECK_THROWS_AS(gen_nonce_words(1, spec, rng), GenerationExhausted);
}

TEST_CASE("nonce words against the shipped dictionary") {
  const NonceSpec spec = default_nonce_spec(default_data_dir());
  CHECK(spec.dictionary.size() > 10000);
  Rng rng(13);
  const auto words = gen_nonce_words(20, spec, rng);
  const auto dict = dictionary_words();
  for (const auto& w : words) {
    CHECK(w.size() == 7);
    CHECK_FALSE(spec.dictionary.contains(w));
    std::size_t best = 99;
    for (const auto& d : dict) best = std::min(best, oracle_distance(w, d));
    CHECK(best >= 2);
  }
}

TEST_CASE("nonce pool entries are capitalized names") {
  const NonceSpec spec = default_nonce_spec(default_data_dir());
  Rng rng(14);
  const NamePool pool = nonce_pool(5, spec, rng);
  CHECK(pool.entries.size() == 5);
  for (const auto& n : pool.entries) {
    CHECK(is_entity_name(n));
    std::string lower = n;
    lower[0] = static_cast<char>(lower[0] - 'A' + 'a');
    CHECK(spec.dictionary.far_from_all(lower, 2));
  }
}

TEST_CASE("excluded words are never produced") {
  NonceSpec spec = default_nonce_spec(default_data_dir());
  Rng probe(15);
  const auto first = gen_nonce_words(3, spec, probe);
  spec.exclude.insert(first.begin(), first.end());
  Rng rng(15);
  for (const auto& w : gen_nonce_words(3, spec, rng)) CHECK_FALSE(spec.exclude.contains(w));
}

#pragma once

// Entity labels: symbolic ("XJX"), first-name and city pools loaded from CSV,
// and nonce words sampled from a character-trigram model and filtered against
// a dictionary by edit distance.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gridhop/rng.hpp"

namespace gridhop {

enum class NamingScheme { symbolic, male, female, city, nonce };

std::string_view name_of(NamingScheme scheme);
std::optional<NamingScheme> parse_naming_scheme(std::string_view name);

/// Entity names are one or more space-separated words, each starting with an
/// ASCII uppercase letter or digit and continuing with letters, digits, '-' or
/// '\''. The oracle parser relies on this to find name boundaries.
bool is_entity_name(std::string_view s);

struct NamePool {
  NamingScheme scheme = NamingScheme::symbolic;
  std::vector<std::string> entries;  // unique
  std::string source;
};

/// "X" followed by one to `max_letters` uppercase letters.
NamePool symbolic_pool(int max_letters = 2);

/// One name per row, first column. Rows that are not valid entity names (a
/// header row, blanks) are skipped; whitespace is normalized; duplicates dropped.
NamePool load_name_csv(const std::filesystem::path& path, NamingScheme scheme);

/// Injective draw of `node_count` labels, indexed by node id. Throws PoolExhausted.
std::vector<std::string> assign_names(std::size_t node_count, const NamePool& pool, Rng& rng);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// True when levenshtein(a, b) < bound, computed with an early-exit band.
bool within_distance(std::string_view a, std::string_view b, std::size_t bound);

class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(const std::vector<std::string>& words);
  static Dictionary load(const std::filesystem::path& path);

  std::size_t size() const { return size_; }
  bool contains(std::string_view word) const;
  /// Minimum edit distance to every entry is at least `min_distance`.
  bool far_from_all(std::string_view word, std::size_t min_distance) const;

 private:
  std::vector<std::vector<std::string>> by_length_;
  std::size_t size_ = 0;
};

/// Character trigram chain with start/end sentinels over lowercase a-z.
class TrigramModel {
 public:
  static TrigramModel train(std::string_view corpus);
  /// One word, or nothing if it ran past `max_length` letters.
  std::optional<std::string> sample(Rng& rng, std::size_t max_length) const;
  bool empty() const { return trained_words_ == 0; }

 private:
  static constexpr std::size_t kSymbols = 28;  // a-z, start, end
  std::vector<std::uint32_t> counts_ = std::vector<std::uint32_t>(kSymbols * kSymbols * kSymbols, 0);
  std::size_t trained_words_ = 0;
};

struct NonceSpec {
  std::string corpus;      // raw text
  Dictionary dictionary;
  std::size_t length = 7;
  std::size_t min_distance = 2;
  std::set<std::string> exclude;  // lowercase words that must not be produced
  std::size_t max_candidates = 2'000'000;
};

/// n distinct lowercase words of exactly spec.length letters, each at least
/// spec.min_distance edits from every dictionary word. Throws GenerationExhausted.
std::vector<std::string> gen_nonce_words(std::size_t n, const NonceSpec& spec, Rng& rng);

/// Shipped corpus + dictionary under `data_dir`.
NonceSpec default_nonce_spec(const std::filesystem::path& data_dir);

/// Nonce entity pool: capitalized nonce words.
NamePool nonce_pool(std::size_t size, const NonceSpec& spec, Rng& rng);

}  // namespace gridhop

#include "gridhop/naming.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "gridhop/errors.hpp"

namespace gridhop {
namespace {

constexpr std::size_t kStart = 26;
constexpr std::size_t kEnd = 27;

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_csv_field(const std::string& line) {
  std::string field;
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  if (i < line.size() && line[i] == '"') {
    for (++i; i < line.size(); ++i) {
      if (line[i] == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          break;
        }
      } else {
        field += line[i];
      }
    }
    return field;
  }
  auto comma = line.find(',', i);
  return line.substr(i, comma == std::string::npos ? std::string::npos : comma - i);
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string_view name_of(NamingScheme scheme) {
  switch (scheme) {
    case NamingScheme::symbolic: return "symbolic";
    case NamingScheme::male: return "male";
    case NamingScheme::female: return "female";
    case NamingScheme::city: return "city";
    case NamingScheme::nonce: return "nonce";
  }
  return "symbolic";
}

std::optional<NamingScheme> parse_naming_scheme(std::string_view name) {
  for (auto s : {NamingScheme::symbolic, NamingScheme::male, NamingScheme::female,
                 NamingScheme::city, NamingScheme::nonce}) {
    if (name_of(s) == name) return s;
  }
  return std::nullopt;
}

bool is_entity_name(std::string_view s) {
  if (s.empty()) return false;
  bool word_start = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == ' ') {
      if (word_start || i + 1 == s.size()) return false;  // leading, double or trailing space
      word_start = true;
      continue;
    }
    if (word_start) {
      if (!is_upper(c) && !is_digit(c)) return false;
      word_start = false;
    } else if (!is_upper(c) && !is_lower(c) && !is_digit(c) && c != '-' && c != '\'') {
      return false;
    }
  }
  return true;
}

NamePool symbolic_pool(int max_letters) {
  if (max_letters < 1 || max_letters > 3) throw std::invalid_argument("symbolic names use 1-3 letters");
  NamePool pool{NamingScheme::symbolic, {}, "generated:X+" + std::to_string(max_letters)};
  std::string name = "X";
  auto extend = [&](auto&& self, int remaining) -> void {
    for (char c = 'A'; c <= 'Z'; ++c) {
      name.push_back(c);
      pool.entries.push_back(name);
      if (remaining > 1) self(self, remaining - 1);
      name.pop_back();
    }
  };
  extend(extend, max_letters);
  return pool;
}

NamePool load_name_csv(const std::filesystem::path& path, NamingScheme scheme) {
  std::istringstream in(read_file(path));
  NamePool pool{scheme, {}, path.string()};
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    auto name = collapse_whitespace(first_csv_field(line));
    if (!is_entity_name(name)) continue;
    if (seen.insert(name).second) pool.entries.push_back(std::move(name));
  }
  if (pool.entries.empty()) throw SchemaError("no usable names in " + path.string());
  return pool;
}

std::vector<std::string> assign_names(std::size_t node_count, const NamePool& pool, Rng& rng) {
  if (node_count > pool.entries.size()) {
    throw PoolExhausted("need " + std::to_string(node_count) + " names but pool '" + pool.source +
                        "' has " + std::to_string(pool.entries.size()));
  }
  // Partial Fisher-Yates over indices: prefixes are stable for a fixed stream.
  std::vector<std::size_t> order(pool.entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::string> names;
  names.reserve(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    const auto j = i + rng.below(order.size() - i);
    std::swap(order[i], order[j]);
    names.push_back(pool.entries[order[i]]);
  }
  return names;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool within_distance(std::string_view a, std::string_view b, std::size_t bound) {
  if (bound == 0) return false;
  const std::size_t gap = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
  if (gap >= bound) return false;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    std::size_t row_min = cur[0];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min >= bound) return false;
    std::swap(prev, cur);
  }
  return prev[b.size()] < bound;
}

Dictionary::Dictionary(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    if (w.empty()) continue;
    if (by_length_.size() <= w.size()) by_length_.resize(w.size() + 1);
    by_length_[w.size()].push_back(w);
  }
  for (auto& bucket : by_length_) {
    std::sort(bucket.begin(), bucket.end());
    bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
    size_ += bucket.size();
  }
}

Dictionary Dictionary::load(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = collapse_whitespace(line);
    std::transform(w.begin(), w.end(), w.begin(),
                   [](char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; });
    if (!w.empty()) words.push_back(std::move(w));
  }
  return Dictionary(words);
}

bool Dictionary::contains(std::string_view word) const {
  if (word.size() >= by_length_.size()) return false;
  const auto& bucket = by_length_[word.size()];
  return std::binary_search(bucket.begin(), bucket.end(), word);
}

bool Dictionary::far_from_all(std::string_view word, std::size_t min_distance) const {
  if (min_distance == 0) return true;
  const std::size_t lo = word.size() >= min_distance - 1 ? word.size() - (min_distance - 1) : 0;
  const std::size_t hi = word.size() + (min_distance - 1);
  for (std::size_t len = lo; len <= hi && len < by_length_.size(); ++len) {
    for (const auto& entry : by_length_[len]) {
      if (within_distance(word, entry, min_distance)) return false;
    }
  }
  return true;
}

TrigramModel TrigramModel::train(std::string_view corpus) {
  TrigramModel model;
  auto add_word = [&](const std::string& w) {
    std::size_t c1 = kStart, c2 = kStart;
    for (char ch : w) {
      const std::size_t c3 = static_cast<std::size_t>(ch - 'a');
      ++model.counts_[(c1 * kSymbols + c2) * kSymbols + c3];
      c1 = c2;
      c2 = c3;
    }
    ++model.counts_[(c1 * kSymbols + c2) * kSymbols + kEnd];
    ++model.trained_words_;
  };
  std::string word;
  for (char ch : corpus) {
    if (is_upper(ch)) ch = static_cast<char>(ch - 'A' + 'a');
    if (is_lower(ch)) {
      word += ch;
    } else if (!word.empty()) {
      add_word(word);
      word.clear();
    }
  }
  if (!word.empty()) add_word(word);
  return model;
}

std::optional<std::string> TrigramModel::sample(Rng& rng, std::size_t max_length) const {
  std::string word;
  std::size_t c1 = kStart, c2 = kStart;
  while (true) {
    const std::uint32_t* row = &counts_[(c1 * kSymbols + c2) * kSymbols];
    std::uint64_t total = 0;
    for (std::size_t c = 0; c < kSymbols; ++c) total += row[c];
    if (total == 0) return std::nullopt;
    std::uint64_t r = rng.below(total);
    std::size_t next = 0;
    for (; next < kSymbols; ++next) {
      if (r < row[next]) break;
      r -= row[next];
    }
    if (next == kEnd) return word;
    word += static_cast<char>('a' + next);
    if (word.size() > max_length) return std::nullopt;
    c1 = c2;
    c2 = next;
  }
}

std::vector<std::string> gen_nonce_words(std::size_t n, const NonceSpec& spec, Rng& rng) {
  if (spec.length < 3) throw std::invalid_argument("nonce length must be >= 3");
  if (spec.min_distance < 1) throw std::invalid_argument("nonce min_distance must be >= 1");
  std::vector<std::string> out;
  if (n == 0) return out;

  const auto model = TrigramModel::train(spec.corpus);
  if (model.empty()) throw GenerationExhausted("nonce corpus contains no words");

  std::unordered_set<std::string> taken;
  for (std::size_t candidates = 0; candidates < spec.max_candidates; ++candidates) {
    auto word = model.sample(rng, spec.length);
    if (!word || word->size() != spec.length) continue;
    if (taken.contains(*word) || spec.exclude.contains(*word)) continue;
    if (!spec.dictionary.far_from_all(*word, spec.min_distance)) continue;
    taken.insert(*word);
    out.push_back(std::move(*word));
    if (out.size() == n) return out;
  }
  throw GenerationExhausted("produced only " + std::to_string(out.size()) + " of " +
                            std::to_string(n) + " nonce words within the candidate budget");
}

NonceSpec default_nonce_spec(const std::filesystem::path& data_dir) {
  NonceSpec spec;
  spec.corpus = read_file(data_dir / "corpus" / "pride_and_prejudice_opening.txt");
  spec.dictionary = Dictionary::load(data_dir / "dictionary" / "english.txt");
  return spec;
}

NamePool nonce_pool(std::size_t size, const NonceSpec& spec, Rng& rng) {
  NamePool pool{NamingScheme::nonce, gen_nonce_words(size, spec, rng), "generated:nonce"};
  for (auto& w : pool.entries) w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return pool;
}

}  // namespace gridhop

#include "gridhop/direction.hpp"

#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "gridhop/errors.hpp"

namespace gridhop {
namespace {

constexpr std::array<std::string_view, kDirectionCount> kNames = {
    "top",      "down",      "left",      "right",   "top_left",
    "top_right", "down_left", "down_right", "overlap",
};

constexpr std::array<Offset, kDirectionCount> kOffsets = {{
    {0, 1},    // top
    {0, -1},   // down
    {-1, 0},   // left
    {1, 0},    // right
    {-1, 1},   // top_left
    {1, 1},    // top_right
    {-1, -1},  // down_left
    {1, -1},   // down_right
    {0, 0},    // overlap
}};

// Symmetric synonym pairs of the knowledge module.
constexpr std::pair<std::string_view, std::string_view> kSynonymPairs[] = {
    {"north", "northOf"}, {"south", "southOf"}, {"west", "westOf"}, {"east", "eastOf"},
    {"top", "northOf"},   {"down", "southOf"},  {"left", "westOf"}, {"right", "eastOf"},
};

// One-way translation rules that are not synonyms (is(A, top, B) :- up(A, B)).
constexpr std::pair<std::string_view, Direction> kAliases[] = {
    {"up", Direction::top},
};

class SynonymClosure {
 public:
  SynonymClosure() {
    for (auto name : kNames) intern(name);
    for (auto [a, b] : kSynonymPairs) unite(intern(a), intern(b));

    std::vector<std::optional<Direction>> group_direction(terms_.size());
    for (auto d : kAllDirections) {
      auto root = find(ids_.at(std::string(name_of_raw(d))));
      group_direction[root] = d;
    }
    for (const auto& [term, id] : ids_) {
      if (auto d = group_direction[find(id)]) table_.emplace(term, *d);
    }
    for (auto [term, d] : kAliases) table_.emplace(std::string(term), d);
  }

  std::optional<Direction> lookup(std::string_view term) const {
    auto it = table_.find(std::string(term));
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

 private:
  static std::string_view name_of_raw(Direction d) { return kNames[index_of(d)]; }

  std::size_t intern(std::string_view term) {
    auto [it, inserted] = ids_.emplace(std::string(term), terms_.size());
    if (inserted) {
      terms_.emplace_back(term);
      parent_.push_back(parent_.size());
    }
    return it->second;
  }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }

  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

  std::vector<std::string> terms_;
  std::vector<std::size_t> parent_;
  std::map<std::string, std::size_t> ids_;
  std::map<std::string, Direction, std::less<>> table_;
};

const SynonymClosure& closure() {
  static const SynonymClosure instance;
  return instance;
}

}  // namespace

Offset offset_of(Direction d) { return kOffsets[index_of(d)]; }

Direction direction_of(std::int64_t dx, std::int64_t dy) {
  auto sign = [](std::int64_t v) { return static_cast<int>((v > 0) - (v < 0)); };
  const Offset target{sign(dx), sign(dy)};
  for (auto d : kAllDirections) {
    if (kOffsets[index_of(d)] == target) return d;
  }
  return Direction::overlap;  // unreachable: the table covers all nine signum pairs
}

Direction invert(Direction d) {
  const auto o = offset_of(d);
  return direction_of(-o.dx, -o.dy);
}

std::string_view name_of(Direction d) { return kNames[index_of(d)]; }

std::optional<Direction> parse_direction(std::string_view name) {
  for (auto d : kAllDirections) {
    if (kNames[index_of(d)] == name) return d;
  }
  return std::nullopt;
}

std::optional<Direction> try_normalize(std::string_view term) { return closure().lookup(term); }

Direction normalize(std::string_view term) {
  if (auto d = try_normalize(term)) return *d;
  throw UnknownTerm("unknown relation term '" + std::string(term) + "'");
}

}  // namespace gridhop

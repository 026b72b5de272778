#include "gridhop/story.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "gridhop/errors.hpp"

namespace gridhop {
namespace {

std::uint64_t cell_key(Position p) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
         static_cast<std::uint32_t>(p.y);
}

Fact oriented_fact(Direction step, NodeId from, NodeId to, bool flip, bool on_path,
                   std::uint32_t ordinal) {
  // to - from == offset_of(step); either state it from `to` or invert it.
  if (flip) return {invert(step), from, to, on_path, ordinal};
  return {step, to, from, on_path, ordinal};
}

}  // namespace

Walk generate_walk(int k, Rng& rng, const WalkOptions& options) {
  if (k < 1 || k > options.max_k) {
    throw std::invalid_argument("walk length " + std::to_string(k) + " outside [1, " +
                                std::to_string(options.max_k) + "]");
  }
  std::vector<Direction> candidates;
  candidates.reserve(kAnswerDirections.size());

  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    Walk walk;
    walk.positions.push_back({0, 0});
    std::unordered_set<std::uint64_t> visited{cell_key({0, 0})};
    bool dead_end = false;

    for (int i = 0; i < k; ++i) {
      const Position here = walk.positions.back();
      candidates.clear();
      for (auto d : kAnswerDirections) {
        if (!visited.contains(cell_key(here + offset_of(d)))) candidates.push_back(d);
      }
      if (candidates.empty()) {
        dead_end = true;
        break;
      }
      const Direction step = candidates[rng.below(candidates.size())];
      walk.steps.push_back(step);
      walk.positions.push_back(here + offset_of(step));
      visited.insert(cell_key(walk.positions.back()));
    }
    if (dead_end) continue;

    walk.nodes.resize(walk.positions.size());
    for (std::size_t i = 0; i < walk.nodes.size(); ++i) walk.nodes[i] = static_cast<NodeId>(i);
    return walk;
  }
  throw GenerationExhausted("no self-avoiding walk of length " + std::to_string(k) + " after " +
                            std::to_string(options.max_attempts) + " attempts");
}

Skeleton make_skeleton(const Walk& walk, Rng& rng, const SkeletonOptions& options) {
  Skeleton s;
  s.k = walk.k();
  s.positions = walk.positions;
  s.facts.reserve(walk.steps.size());
  for (std::size_t i = 0; i < walk.steps.size(); ++i) {
    const bool flip = options.randomize_fact_orientation && rng.coin();
    s.facts.push_back(oriented_fact(walk.steps[i], walk.nodes[i], walk.nodes[i + 1], flip, true,
                                    static_cast<std::uint32_t>(i)));
  }
  s.query = {walk.nodes.back(), walk.nodes.front()};
  if (options.randomize_query_orientation && rng.coin()) std::swap(s.query.subject, s.query.object);
  s.answer = direction_of(s.positions[s.query.subject], s.positions[s.query.object]);
  return s;
}

int default_distractor_count(int k) { return std::max(1, (k + 1) / 2); }

Skeleton inject_noise(Skeleton s, int m, Rng& rng, const NoiseOptions& options) {
  if (m < 0) throw std::invalid_argument("negative distractor count");
  if (m == 0) return s;
  if (options.chain_depth < 1) throw std::invalid_argument("chain_depth must be >= 1");

  std::unordered_set<std::uint64_t> occupied;
  for (auto p : s.positions) occupied.insert(cell_key(p));

  // Depth 0 for path nodes; a distractor sits one deeper than its anchor.
  std::vector<int> depth(s.positions.size(), 0);
  std::vector<NodeId> anchors;
  for (NodeId n = 0; n < s.positions.size(); ++n) anchors.push_back(n);

  std::vector<Direction> free_dirs;
  for (int added = 0; added < m; ++added) {
    bool placed = false;
    for (int attempt = 0; attempt < options.max_attempts_per_distractor && !placed; ++attempt) {
      const NodeId anchor = anchors[rng.below(anchors.size())];
      free_dirs.clear();
      for (auto d : kAnswerDirections) {
        if (!occupied.contains(cell_key(s.positions[anchor] + offset_of(d)))) free_dirs.push_back(d);
      }
      if (free_dirs.empty()) continue;

      const Direction step = free_dirs[rng.below(free_dirs.size())];
      const auto fresh = static_cast<NodeId>(s.positions.size());
      const Position where = s.positions[anchor] + offset_of(step);
      s.positions.push_back(where);
      occupied.insert(cell_key(where));
      depth.push_back(depth[anchor] + 1);
      if (depth.back() < options.chain_depth) anchors.push_back(fresh);

      const bool flip = rng.coin();
      s.facts.push_back(oriented_fact(step, anchor, fresh, flip, false,
                                      static_cast<std::uint32_t>(s.facts.size())));
      placed = true;
    }
    if (!placed) {
      throw PlacementExhausted("could not place distractor " + std::to_string(added + 1) + " of " +
                               std::to_string(m));
    }
  }
  s.variant.noisy = true;
  return s;
}

Skeleton order_story(Skeleton s, const OrderPolicy& policy, Rng& rng) {
  std::sort(s.facts.begin(), s.facts.end(),
            [](const Fact& a, const Fact& b) { return a.ordinal < b.ordinal; });
  switch (policy.kind) {
    case OrderPolicy::Kind::ordered:
      s.variant.shuffled = false;
      break;
    case OrderPolicy::Kind::full:
      rng.shuffle(s.facts);
      s.variant.shuffled = true;
      break;
    case OrderPolicy::Kind::partial: {
      if (policy.fraction < 0.0 || policy.fraction > 1.0) {
        throw std::invalid_argument("partial shuffle fraction must lie in [0, 1]");
      }
      const std::size_t n = s.facts.size();
      if (n >= 2) {
        const auto swaps = static_cast<std::size_t>(std::ceil(policy.fraction * static_cast<double>(n)));
        for (std::size_t t = 0; t < swaps; ++t) {
          const auto i = rng.below(n);
          auto j = rng.below(n - 1);
          if (j >= i) ++j;
          std::swap(s.facts[i], s.facts[j]);
        }
      }
      s.variant.shuffled = true;
      break;
    }
  }
  return s;
}

}  // namespace gridhop

#pragma once

// Instance skeletons: self-avoiding walks on the grid, the facts stated along
// them, distractor facts hanging off the path, and story-order policies.

#include <cstdint>
#include <vector>

#include "gridhop/direction.hpp"
#include "gridhop/rng.hpp"

namespace gridhop {

using NodeId = std::uint32_t;

struct Walk {
  std::vector<NodeId> nodes;         // k + 1 ids, 0..k in walk order
  std::vector<Position> positions;   // indexed by node id
  std::vector<Direction> steps;      // positions[i+1] - positions[i] == offset_of(steps[i])

  int k() const { return static_cast<int>(steps.size()); }
};

/// position(subject) - position(object) == offset_of(relation).
struct Fact {
  Direction relation = Direction::overlap;
  NodeId subject = 0;
  NodeId object = 0;
  bool on_path = true;
  std::uint32_t ordinal = 0;  // generation order

  friend bool operator==(const Fact&, const Fact&) = default;
};

struct Query {
  NodeId subject = 0;
  NodeId object = 0;
  friend bool operator==(const Query&, const Query&) = default;
};

struct Variant {
  bool noisy = false;
  bool shuffled = false;
  friend bool operator==(const Variant&, const Variant&) = default;
};

struct Skeleton {
  int k = 0;
  std::vector<Fact> facts;
  Query query;
  Direction answer = Direction::overlap;
  Variant variant;
  std::uint64_t seed = 0;
  std::vector<Position> positions;  // every node, path first then distractors

  std::size_t node_count() const { return positions.size(); }
};

struct WalkOptions {
  int max_k = 100;
  int max_attempts = 1000;
};

struct SkeletonOptions {
  bool randomize_fact_orientation = true;
  bool randomize_query_orientation = false;
};

struct NoiseOptions {
  // Maximum distance (in distractor edges) of a distractor from the path.
  // 1 means distractors attach to path nodes only.
  int chain_depth = 1;
  int max_attempts_per_distractor = 200;
};

struct OrderPolicy {
  enum class Kind { ordered, partial, full };
  Kind kind = Kind::ordered;
  double fraction = 0.5;  // used by partial

  static OrderPolicy ordered() { return {Kind::ordered, 0.0}; }
  static OrderPolicy full() { return {Kind::full, 0.0}; }
  static OrderPolicy partial(double p) { return {Kind::partial, p}; }
};

/// Self-avoiding k-step walk starting at the origin. Dead ends restart the walk
/// from scratch; throws GenerationExhausted once the attempt budget is spent.
Walk generate_walk(int k, Rng& rng, const WalkOptions& options = {});

/// One fact per walk edge; the query links the two walk endpoints.
Skeleton make_skeleton(const Walk& walk, Rng& rng, const SkeletonOptions& options = {});

/// Default distractor count for depth k: max(1, ceil(k / 2)).
int default_distractor_count(int k);

/// Adds m distractor facts, each attaching a fresh node to an existing one.
/// Throws PlacementExhausted when no free cell can be found.
Skeleton inject_noise(Skeleton s, int m, Rng& rng, const NoiseOptions& options = {});

Skeleton order_story(Skeleton s, const OrderPolicy& policy, Rng& rng);

}  // namespace gridhop

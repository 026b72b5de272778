#pragma once

// Native equivalent of the spatial knowledge module: normalizes relation
// terms, propagates grid coordinates from an anchor and answers queries.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gridhop/direction.hpp"
#include "gridhop/instance.hpp"
#include "gridhop/lingo.hpp"
#include "gridhop/oracle.hpp"

namespace gridhop {

/// subject relation object, with the relation still a surface term
/// (north, northOf, up, top_right, ...).
struct TermFact {
  std::string subject;
  std::string relation;
  std::string object;
};

struct Answer {
  Direction direction = Direction::overlap;
  friend bool operator==(const Answer&, const Answer&) = default;
};
struct InsufficientInfo {
  friend bool operator==(const InsufficientInfo&, const InsufficientInfo&) = default;
};
struct Contradiction {
  std::size_t fact_index = 0;  // first fact found inconsistent
  friend bool operator==(const Contradiction&, const Contradiction&) = default;
};

using SolveOutcome = std::variant<Answer, InsufficientInfo, Contradiction>;

std::string describe(const SolveOutcome& outcome);

/// Same kind and, for answers, same direction (contradiction indices may differ
/// between equivalent fact orders).
bool same_verdict(const SolveOutcome& a, const SolveOutcome& b);

struct SolverOptions {
  // Coordinates must stay within +-bound of the anchor, like nums(-100..100).
  std::int64_t coordinate_bound = 100;
};

/// Grid placement of a fact set. Built by propagate(); coordinates are relative
/// to the component anchor.
struct FactGraph {
  std::vector<std::string> entities;
  struct Edge {
    std::size_t subject;
    Direction relation;
    std::size_t object;
  };
  std::vector<Edge> edges;
  std::vector<std::optional<Position>> coordinates;  // per entity
  std::vector<std::size_t> component;                // per entity
  std::optional<std::size_t> contradiction;          // first conflicting fact

  std::optional<std::size_t> find(std::string_view name) const;
};

/// Builds the graph and places every entity. `anchor`, when present in the
/// facts, is placed at the origin first; the other components are anchored at
/// their first-mentioned entity. Throws UnknownTerm for unknown relations.
FactGraph propagate(std::span<const TermFact> facts, std::string_view anchor,
                    const SolverOptions& options = {});

SolveOutcome solve(std::span<const TermFact> facts, const NamedQuery& query,
                   const SolverOptions& options = {});

SolveOutcome solve(std::span<const NamedFact> facts, const NamedQuery& query,
                   const SolverOptions& options = {});

inline SolveOutcome solve(const ParsedProgram& program, const SolverOptions& options = {}) {
  return solve(program.facts, program.query, options);
}

/// Oracle route: parse the rendered story and question, solve, and compare
/// with the stored answer label. Parser errors propagate.
bool verify_instance(const StoryInstance& instance, const TemplatePack& pack);

/// Command line of an external ASP solver, if one is available
/// ($GRIDHOP_CLINGO, `clingo` on PATH, or the clingo Python module).
std::optional<std::string> find_asp_solver();

/// Runs the external solver on the program plus the knowledge module and the
/// answer rules. Returns the derived answer/1 atoms; empty when none.
std::vector<Direction> solve_with_external_asp(const ParsedProgram& program,
                                               const std::string& solver_command,
                                               const std::filesystem::path& data_dir = {});

}  // namespace gridhop

#include "gridhop/solver.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include <unistd.h>

#include "gridhop/errors.hpp"
#include "gridhop/paths.hpp"

namespace gridhop {
namespace {

struct Neighbor {
  std::size_t entity;
  Offset delta;  // coordinate(entity) = coordinate(self) + delta
  std::size_t fact;
};

std::size_t root_of(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

bool within(Position p, std::int64_t bound) {
  return p.x >= -bound && p.x <= bound && p.y >= -bound && p.y <= bound;
}

}  // namespace

std::string describe(const SolveOutcome& outcome) {
  if (auto* a = std::get_if<Answer>(&outcome)) return "Answer(" + std::string(name_of(a->direction)) + ")";
  if (std::holds_alternative<InsufficientInfo>(outcome)) return "InsufficientInfo";
  return "Contradiction(fact " + std::to_string(std::get<Contradiction>(outcome).fact_index) + ")";
}

bool same_verdict(const SolveOutcome& a, const SolveOutcome& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<Answer>(&a)) return *x == std::get<Answer>(b);
  return true;
}

std::optional<std::size_t> FactGraph::find(std::string_view name) const {
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (entities[i] == name) return i;
  }
  return std::nullopt;
}

FactGraph propagate(std::span<const TermFact> facts, std::string_view anchor,
                    const SolverOptions& options) {
  FactGraph g;
  std::unordered_map<std::string, std::size_t> ids;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, g.entities.size());
    if (inserted) g.entities.push_back(name);
    return it->second;
  };
  g.edges.reserve(facts.size());
  for (const auto& f : facts) {
    const auto rel = normalize(f.relation);
    const auto s = intern(f.subject);
    const auto o = intern(f.object);
    g.edges.push_back({s, rel, o});
  }

  const std::size_t n = g.entities.size();
  std::vector<std::vector<Neighbor>> adjacency(n);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    const auto o = offset_of(e.relation);
    adjacency[e.subject].push_back({e.object, {-o.dx, -o.dy}, i});
    adjacency[e.object].push_back({e.subject, o, i});
    parent[root_of(parent, e.subject)] = root_of(parent, e.object);
  }

  g.component.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.component[i] = root_of(parent, i);
  g.coordinates.assign(n, std::nullopt);

  std::vector<std::size_t> anchors;
  if (auto it = ids.find(std::string(anchor)); it != ids.end()) anchors.push_back(it->second);
  for (std::size_t i = 0; i < n; ++i) anchors.push_back(i);

  std::vector<bool> component_anchored(n, false);
  std::deque<std::size_t> queue;
  for (auto a : anchors) {
    if (component_anchored[g.component[a]]) continue;
    component_anchored[g.component[a]] = true;
    g.coordinates[a] = Position{0, 0};
    queue.push_back(a);
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      const Position here = *g.coordinates[u];
      for (const auto& nb : adjacency[u]) {
        const Position there = here + nb.delta;
        if (!within(there, options.coordinate_bound)) continue;
        auto& slot = g.coordinates[nb.entity];
        if (slot) {
          if (*slot != there && (!g.contradiction || nb.fact < *g.contradiction)) {
            g.contradiction = nb.fact;
          }
          continue;
        }
        slot = there;
        queue.push_back(nb.entity);
      }
    }
  }
  return g;
}

SolveOutcome solve(std::span<const TermFact> facts, const NamedQuery& query,
                   const SolverOptions& options) {
  const FactGraph g = propagate(facts, query.object, options);
  const auto s = g.find(query.subject);
  const auto o = g.find(query.object);
  if (query.subject == query.object && !g.contradiction) return Answer{Direction::overlap};
  if (!s || !o || g.component[*s] != g.component[*o]) return InsufficientInfo{};
  if (g.contradiction) return Contradiction{*g.contradiction};
  if (!g.coordinates[*s] || !g.coordinates[*o]) return InsufficientInfo{};
  return Answer{direction_of(*g.coordinates[*s], *g.coordinates[*o])};
}

SolveOutcome solve(std::span<const NamedFact> facts, const NamedQuery& query,
                   const SolverOptions& options) {
  std::vector<TermFact> terms;
  terms.reserve(facts.size());
  for (const auto& f : facts) terms.push_back({f.subject, std::string(name_of(f.relation)), f.object});
  return solve(terms, query, options);
}

bool verify_instance(const StoryInstance& instance, const TemplatePack& pack) {
  const auto program = parse_story(instance.story, instance.question, pack);
  const auto outcome = solve(program);
  const auto* answer = std::get_if<Answer>(&outcome);
  return answer && answer->direction != Direction::overlap &&
         pack.answer_label(answer->direction) == instance.answer;
}

std::optional<std::string> find_asp_solver() {
  if (const char* env = std::getenv("GRIDHOP_CLINGO"); env && *env) return std::string(env);
  if (std::system("command -v clingo >/dev/null 2>&1") == 0) return std::string("clingo");
  if (std::system("python3 -c 'import clingo' >/dev/null 2>&1") == 0) {
    return std::string("python3 -m clingo");
  }
  return std::nullopt;
}

std::vector<Direction> solve_with_external_asp(const ParsedProgram& program,
                                               const std::string& solver_command,
                                               const std::filesystem::path& data_dir) {
  static std::atomic<unsigned> counter{0};
  const auto path = std::filesystem::temp_directory_path() /
                    ("gridhop-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".lp");
  {
    std::ofstream out(path, std::ios::binary);
    out << emit_asp(program, true, data_dir) << '\n' << answer_rules(data_dir);
    if (!out) throw Error("cannot write " + path.string());
  }
  const std::string command = solver_command + " '" + path.string() + "' 2>/dev/null";
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(path);
    throw Error("cannot run " + solver_command);
  }
  std::string output;
  std::array<char, 4096> buffer{};
  while (std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe)) output.append(buffer.data(), got);
  ::pclose(pipe);
  std::filesystem::remove(path);

  std::vector<Direction> answers;
  const std::string_view marker = "answer(";
  for (auto pos = output.find(marker); pos != std::string::npos; pos = output.find(marker, pos + 1)) {
    const auto close = output.find(')', pos);
    if (close == std::string::npos) break;
    const auto term = output.substr(pos + marker.size(), close - pos - marker.size());
    if (auto d = parse_direction(term); d && std::find(answers.begin(), answers.end(), *d) == answers.end()) {
      answers.push_back(*d);
    }
  }
  return answers;
}

}  // namespace gridhop

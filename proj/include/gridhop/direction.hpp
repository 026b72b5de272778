#pragma once

// Direction algebra on the unit grid: the eight compass relations plus
// overlap, their offsets, inversion, synonym normalization and the
// delta-to-direction rule used to answer queries.

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace gridhop {

enum class Direction : std::uint8_t {
  top,
  down,
  left,
  right,
  top_left,
  top_right,
  down_left,
  down_right,
  overlap,
};

inline constexpr std::size_t kDirectionCount = 9;

/// The eight legal answers, in canonical order. overlap is internal-only.
inline constexpr std::array<Direction, 8> kAnswerDirections = {
    Direction::top,      Direction::down,      Direction::left,      Direction::right,
    Direction::top_left, Direction::top_right, Direction::down_left, Direction::down_right,
};

inline constexpr std::array<Direction, kDirectionCount> kAllDirections = {
    Direction::top,       Direction::down,      Direction::left,
    Direction::right,     Direction::top_left,  Direction::top_right,
    Direction::down_left, Direction::down_right, Direction::overlap,
};

struct Offset {
  int dx = 0;
  int dy = 0;
  friend constexpr bool operator==(Offset, Offset) = default;
};

struct Position {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend constexpr bool operator==(Position, Position) = default;
  friend constexpr Position operator+(Position p, Offset o) { return {p.x + o.dx, p.y + o.dy}; }
  friend constexpr Position operator-(Position p, Offset o) { return {p.x - o.dx, p.y - o.dy}; }
};

constexpr std::size_t index_of(Direction d) { return static_cast<std::size_t>(d); }

Offset offset_of(Direction d);

/// Component-wise signum of the delta; (0,0) maps to overlap.
Direction direction_of(std::int64_t dx, std::int64_t dy);

inline Direction direction_of(Position subject, Position object) {
  return direction_of(subject.x - object.x, subject.y - object.y);
}

Direction invert(Direction d);

/// Canonical identifier, e.g. "top_right".
std::string_view name_of(Direction d);

/// Exact canonical identifier lookup (no synonyms).
std::optional<Direction> parse_direction(std::string_view name);

/// Maps a relation term (north, northOf, up, eastOf, top, ...) to its canonical
/// direction through the synonym closure. Throws UnknownTerm.
Direction normalize(std::string_view term);

/// Non-throwing variant of normalize.
std::optional<Direction> try_normalize(std::string_view term);

inline std::ostream& operator<<(std::ostream& os, Direction d) { return os << name_of(d); }

}  // namespace gridhop

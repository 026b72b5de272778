#pragma once

// Sentence patterns with {A}/{B} placeholders, compiled into alternating
// literal segments and capture slots. Matching is exhaustive: it returns every
// distinct capture assignment under which the whole text is reproduced.

#include <string>
#include <string_view>
#include <vector>

namespace gridhop {

enum class Slot { a, b };

struct Captures {
  std::string a;
  std::string b;
  friend bool operator==(const Captures&, const Captures&) = default;
};

class Pattern {
 public:
  /// Throws SchemaError on unknown placeholders, stray braces, a missing
  /// placeholder, or two placeholders with no literal text between them.
  static Pattern compile(std::string_view text);

  const std::string& text() const { return text_; }

  std::string fill(std::string_view a, std::string_view b) const;

  /// Captures must be entity names (see is_entity_name); a placeholder used
  /// twice must capture the same name both times.
  std::vector<Captures> match(std::string_view text) const;

  /// Numbers (as written) that appear in the literal text, in order.
  std::vector<int> literal_numbers() const;

 private:
  std::string text_;
  std::vector<std::string> literals_;  // size == slots_.size() + 1
  std::vector<Slot> slots_;
};

}  // namespace gridhop

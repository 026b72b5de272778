#include "gridhop/pattern.hpp"

#include <algorithm>
#include <optional>

#include "gridhop/errors.hpp"
#include "gridhop/naming.hpp"

namespace gridhop {
namespace {

struct MatchState {
  std::string_view text;
  const std::vector<std::string>& literals;
  const std::vector<Slot>& slots;
  std::optional<std::string_view> a, b;
  std::vector<Captures>& out;

  std::optional<std::string_view>& bound(Slot s) { return s == Slot::a ? a : b; }

  void run(std::size_t piece, std::size_t pos) {
    const std::string& lit = literals[piece];
    if (text.compare(pos, lit.size(), lit) != 0) return;
    pos += lit.size();
    if (piece == slots.size()) {
      if (pos == text.size()) {
        Captures c{std::string(*a), std::string(*b)};
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
      }
      return;
    }
    auto& slot = bound(slots[piece]);
    if (slot) {
      if (text.compare(pos, slot->size(), *slot) != 0) return;
      run(piece + 1, pos + slot->size());
      return;
    }
    const std::string& next = literals[piece + 1];
    if (next.empty()) {
      // Only the final literal can be empty: the slot runs to the end.
      try_capture(slot, piece, pos, text.size());
      return;
    }
    for (auto end = text.find(next, pos + 1); end != std::string_view::npos;
         end = text.find(next, end + 1)) {
      try_capture(slot, piece, pos, end);
    }
  }

  void try_capture(std::optional<std::string_view>& slot, std::size_t piece, std::size_t pos,
                   std::size_t end) {
    const auto name = text.substr(pos, end - pos);
    if (!is_entity_name(name)) return;
    slot = name;
    run(piece + 1, end);
    slot.reset();
  }
};

}  // namespace

Pattern Pattern::compile(std::string_view text) {
  Pattern p;
  p.text_ = std::string(text);
  std::string literal;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '{') {
      if (text.substr(i, 3) == "{A}") {
        p.slots_.push_back(Slot::a);
      } else if (text.substr(i, 3) == "{B}") {
        p.slots_.push_back(Slot::b);
      } else {
        throw SchemaError("unknown placeholder in pattern: " + std::string(text));
      }
      if (!p.literals_.empty() && literal.empty()) {
        throw SchemaError("adjacent placeholders in pattern: " + std::string(text));
      }
      p.literals_.push_back(std::move(literal));
      literal.clear();
      i += 2;
    } else if (c == '}') {
      throw SchemaError("stray '}' in pattern: " + std::string(text));
    } else {
      literal += c;
    }
  }
  p.literals_.push_back(std::move(literal));
  const bool has_a = std::find(p.slots_.begin(), p.slots_.end(), Slot::a) != p.slots_.end();
  const bool has_b = std::find(p.slots_.begin(), p.slots_.end(), Slot::b) != p.slots_.end();
  if (!has_a || !has_b) throw SchemaError("pattern needs both {A} and {B}: " + std::string(text));
  return p;
}

std::string Pattern::fill(std::string_view a, std::string_view b) const {
  std::string out = literals_[0];
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    out += slots_[i] == Slot::a ? a : b;
    out += literals_[i + 1];
  }
  return out;
}

std::vector<Captures> Pattern::match(std::string_view text) const {
  std::vector<Captures> out;
  MatchState state{text, literals_, slots_, std::nullopt, std::nullopt, out};
  state.run(0, 0);
  return out;
}

std::vector<int> Pattern::literal_numbers() const {
  std::vector<int> numbers;
  for (const auto& lit : literals_) {
    for (std::size_t i = 0; i < lit.size();) {
      if (lit[i] >= '0' && lit[i] <= '9') {
        int v = 0;
        while (i < lit.size() && lit[i] >= '0' && lit[i] <= '9') v = v * 10 + (lit[i++] - '0');
        numbers.push_back(v);
      } else {
        ++i;
      }
    }
  }
  return numbers;
}

}  // namespace gridhop

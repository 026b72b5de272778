#pragma once

// Deterministic translation of pack-generated text back into relational facts,
// and emission of the equivalent answer-set program.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridhop/direction.hpp"
#include "gridhop/lingo.hpp"

namespace gridhop {

/// relation(subject, object) over surface names.
struct NamedFact {
  Direction relation = Direction::overlap;
  std::string subject;
  std::string object;
  friend bool operator==(const NamedFact&, const NamedFact&) = default;
};

struct NamedQuery {
  std::string subject;
  std::string object;
  friend bool operator==(const NamedQuery&, const NamedQuery&) = default;
};

struct ParsedProgram {
  std::vector<NamedFact> facts;
  NamedQuery query;
  friend bool operator==(const ParsedProgram&, const ParsedProgram&) = default;
};

/// Strips a leading "N " story-line number, if present.
std::string_view strip_line_number(std::string_view line);

/// The unique fact produced by a template of `pack`. A missing final period is
/// tolerated. Throws NoMatch or AmbiguousMatch.
NamedFact parse_sentence(std::string_view text, const TemplatePack& pack);

NamedQuery parse_question(std::string_view text, const TemplatePack& pack);

/// Facts in story order plus the query. Errors carry the 1-based line number.
ParsedProgram parse_story(std::span<const std::string> lines, std::string_view question,
                          const TemplatePack& pack);

inline ParsedProgram parse_story(const RenderedStory& story, const TemplatePack& pack) {
  return parse_story(story.lines, story.question, pack);
}

/// `rel("A", "B").` per fact, then `query("S", "O").`; optionally followed by
/// the knowledge module so the text is directly runnable by clingo.
std::string emit_asp(const ParsedProgram& program, bool include_knowledge,
                     const std::filesystem::path& data_dir = {});

/// The knowledge module asset, verbatim.
const std::string& knowledge_module(const std::filesystem::path& data_dir);

/// Rules that anchor the query object and derive answer/1; appended in
/// differential runs against an external solver.
const std::string& answer_rules(const std::filesystem::path& data_dir);

}  // namespace gridhop

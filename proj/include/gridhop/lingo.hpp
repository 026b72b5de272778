#pragma once

// Template packs and natural-language realization of facts and questions.

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gridhop/direction.hpp"
#include "gridhop/pattern.hpp"
#include "gridhop/rng.hpp"
#include "gridhop/story.hpp"

namespace gridhop {

enum class TemplateStyle { plain, clock, cardinal };

struct Template {
  Pattern pattern;
  Direction relation = Direction::overlap;
  Slot subject_slot = Slot::a;
  TemplateStyle style = TemplateStyle::plain;

  /// Sentence stating relation(subject, object).
  std::string render(std::string_view subject, std::string_view object) const;
};

struct QuestionTemplate {
  Pattern pattern;
  Slot subject_slot = Slot::a;

  std::string render(std::string_view subject, std::string_view object) const;
};

struct TemplatePack {
  std::string language;
  std::string version;
  bool partial = false;
  std::string answer_marker = "### Answer:";
  std::string story_header = "Story:";
  std::array<std::vector<Template>, kDirectionCount> fact_templates;
  std::vector<QuestionTemplate> question_templates;
  std::array<std::string, kDirectionCount> answer_lexicon;  // empty for overlap
  std::map<std::string, std::string> direction_lexicon;

  const std::vector<Template>& templates_for(Direction d) const {
    return fact_templates[index_of(d)];
  }
  const std::string& answer_label(Direction d) const { return answer_lexicon[index_of(d)]; }
  std::size_t template_count() const;
  /// Every fact template, grouped by direction in canonical order.
  std::vector<const Template*> all_templates() const;
};

struct RenderedStory {
  std::vector<std::string> lines;  // "1 ...", "2 ...", following the fact order
  std::string question;
  std::string language;
};

/// Uniformly chosen template for f.relation. Throws MissingTemplate.
std::string render_fact(const Fact& f, std::span<const std::string> names, const TemplatePack& pack,
                        Rng& rng);

std::string render_question(const Query& q, std::span<const std::string> names,
                            const TemplatePack& pack, Rng& rng);

/// "N sentence" numbering, 1-based.
std::string number_line(std::size_t index, std::string_view sentence);

/// Parses and validates a pack file. Throws SchemaError, AmbiguousTemplates or
/// IncompleteLexicon.
TemplatePack load_pack(const std::filesystem::path& path);

TemplatePack pack_from_json_text(std::string_view json_text, std::string_view origin = "<memory>");

std::string pack_to_json_text(const TemplatePack& pack);

/// Pack validation shared by the loaders; also rejects templates that collide
/// under the oracle matcher.
void validate_pack(const TemplatePack& pack);

/// Names of the shipped packs, as found under data/packs.
std::vector<std::string> shipped_pack_languages();

TemplatePack load_shipped_pack(const std::filesystem::path& data_dir, std::string_view language);

/// Tokens used for the four component directions of the nonce-direction
/// language. Diagonals are spelled "<vertical> <horizontal>".
struct NonceDirectionTokens {
  std::string up;
  std::string down;
  std::string left;
  std::string right;
};

/// English-style frames with every direction phrase replaced by nonce tokens.
TemplatePack make_nonce_direction_pack(const NonceDirectionTokens& tokens);

}  // namespace gridhop

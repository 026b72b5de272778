#include "gridhop/lingo.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridhop/errors.hpp"

namespace gridhop {
namespace {

using nlohmann::json;

constexpr std::pair<const char*, const char*> kProbeNames[] = {
    {"XQA", "XQB"},
    {"Milton Keynes", "Stoke-on-Trent"},
    {"Zed 9", "O'Neil"},
};

std::string_view style_name(TemplateStyle s) {
  switch (s) {
    case TemplateStyle::plain: return "plain";
    case TemplateStyle::clock: return "clock";
    case TemplateStyle::cardinal: return "cardinal";
  }
  return "plain";
}

TemplateStyle parse_style(const std::string& s, std::string_view origin) {
  if (s == "plain") return TemplateStyle::plain;
  if (s == "clock") return TemplateStyle::clock;
  if (s == "cardinal") return TemplateStyle::cardinal;
  throw SchemaError(std::string(origin) + ": unknown template style '" + s + "'");
}

Slot parse_slot(const std::string& s, std::string_view origin) {
  if (s == "A") return Slot::a;
  if (s == "B") return Slot::b;
  throw SchemaError(std::string(origin) + ": subject must be \"A\" or \"B\", got '" + s + "'");
}

template <class T>
T required(const json& j, const char* key, std::string_view origin) {
  if (!j.contains(key)) throw SchemaError(std::string(origin) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string(origin) + ": field '" + key + "': " + e.what());
  }
}

std::string describe(const Template& t) {
  return "\"" + t.pattern.text() + "\" (" + std::string(name_of(t.relation)) + ")";
}

}  // namespace

std::string Template::render(std::string_view subject, std::string_view object) const {
  return subject_slot == Slot::a ? pattern.fill(subject, object) : pattern.fill(object, subject);
}

std::string QuestionTemplate::render(std::string_view subject, std::string_view object) const {
  return subject_slot == Slot::a ? pattern.fill(subject, object) : pattern.fill(object, subject);
}

std::size_t TemplatePack::template_count() const {
  std::size_t n = 0;
  for (const auto& v : fact_templates) n += v.size();
  return n;
}

std::vector<const Template*> TemplatePack::all_templates() const {
  std::vector<const Template*> out;
  for (const auto& group : fact_templates) {
    for (const auto& t : group) out.push_back(&t);
  }
  return out;
}

std::string render_fact(const Fact& f, std::span<const std::string> names, const TemplatePack& pack,
                        Rng& rng) {
  const auto& options = pack.templates_for(f.relation);
  if (options.empty()) {
    throw MissingTemplate("pack '" + pack.language + "' has no template for " +
                          std::string(name_of(f.relation)));
  }
  const auto& t = options[rng.below(options.size())];
  return t.render(names[f.subject], names[f.object]);
}

std::string render_question(const Query& q, std::span<const std::string> names,
                            const TemplatePack& pack, Rng& rng) {
  if (pack.question_templates.empty()) {
    throw MissingTemplate("pack '" + pack.language + "' has no question template");
  }
  const auto& t = pack.question_templates[rng.below(pack.question_templates.size())];
  return t.render(names[q.subject], names[q.object]);
}

std::string number_line(std::size_t index, std::string_view sentence) {
  return std::to_string(index) + " " + std::string(sentence);
}

void validate_pack(const TemplatePack& pack) {
  if (pack.language.empty()) throw SchemaError("pack has no language tag");
  if (pack.answer_marker.empty()) throw SchemaError(pack.language + ": empty answer marker");
  if (pack.question_templates.empty()) throw SchemaError(pack.language + ": no question templates");
  if (!pack.fact_templates[index_of(Direction::overlap)].empty()) {
    throw SchemaError(pack.language + ": overlap is not a statable relation");
  }
  if (!pack.answer_lexicon[index_of(Direction::overlap)].empty()) {
    throw SchemaError(pack.language + ": overlap has no answer label");
  }
  for (auto d : kAnswerDirections) {
    if (pack.answer_label(d).empty()) {
      throw IncompleteLexicon(pack.language + ": no answer label for " + std::string(name_of(d)));
    }
    for (auto e : kAnswerDirections) {
      if (d != e && pack.answer_label(d) == pack.answer_label(e)) {
        throw SchemaError(pack.language + ": answer label '" + pack.answer_label(d) +
                          "' used twice");
      }
    }
  }

  const auto templates = pack.all_templates();
  for (const Template* t : templates) {
    for (auto [a, b] : kProbeNames) {
      const auto sentence = t->render(a, b);
      const auto own = t->pattern.match(sentence);
      if (own.size() != 1) {
        throw AmbiguousTemplates(pack.language + ": template " + describe(*t) +
                                 " parses its own output " + std::to_string(own.size()) + " ways");
      }
      for (const Template* u : templates) {
        if (u == t) continue;
        if (!u->pattern.match(sentence).empty()) {
          throw AmbiguousTemplates(pack.language + ": templates " + describe(*t) + " and " +
                                   describe(*u) + " both match \"" + sentence + "\"");
        }
      }
    }
  }
  for (const auto& q : pack.question_templates) {
    for (auto [a, b] : kProbeNames) {
      const auto sentence = q.render(a, b);
      std::size_t hits = 0;
      for (const auto& other : pack.question_templates) hits += other.pattern.match(sentence).size();
      if (hits != 1) {
        throw AmbiguousTemplates(pack.language + ": question template \"" + q.pattern.text() +
                                 "\" collides");
      }
    }
  }
}

TemplatePack pack_from_json_text(std::string_view json_text, std::string_view origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string(origin) + ": " + e.what());
  }
  if (!j.is_object()) throw SchemaError(std::string(origin) + ": pack must be a JSON object");

  TemplatePack pack;
  pack.language = required<std::string>(j, "language", origin);
  pack.version = j.value("version", std::string("0"));
  pack.partial = j.value("partial", false);
  pack.answer_marker = required<std::string>(j, "answer_marker", origin);
  pack.story_header = required<std::string>(j, "story_header", origin);

  const auto lexicon = required<std::map<std::string, std::string>>(j, "answer_lexicon", origin);
  for (const auto& [key, label] : lexicon) {
    auto d = parse_direction(key);
    if (!d || *d == Direction::overlap) {
      throw SchemaError(std::string(origin) + ": answer_lexicon key '" + key +
                        "' is not an answer direction");
    }
    pack.answer_lexicon[index_of(*d)] = label;
  }
  pack.direction_lexicon =
      j.value("direction_lexicon", std::map<std::string, std::string>{});

  for (const auto& q : required<json>(j, "questions", origin)) {
    pack.question_templates.push_back(
        {Pattern::compile(required<std::string>(q, "pattern", origin)),
         parse_slot(q.value("subject", std::string("A")), origin)});
  }
  for (const auto& f : required<json>(j, "facts", origin)) {
    const auto rel = required<std::string>(f, "relation", origin);
    auto d = parse_direction(rel);
    if (!d) throw SchemaError(std::string(origin) + ": unknown relation '" + rel + "'");
    pack.fact_templates[index_of(*d)].push_back(
        {Pattern::compile(required<std::string>(f, "pattern", origin)), *d,
         parse_slot(f.value("subject", std::string("A")), origin),
         parse_style(f.value("style", std::string("plain")), origin)});
  }
  validate_pack(pack);
  return pack;
}

std::string pack_to_json_text(const TemplatePack& pack) {
  json j;
  j["language"] = pack.language;
  j["version"] = pack.version;
  j["partial"] = pack.partial;
  j["answer_marker"] = pack.answer_marker;
  j["story_header"] = pack.story_header;
  json lexicon = json::object();
  for (auto d : kAnswerDirections) lexicon[std::string(name_of(d))] = pack.answer_label(d);
  j["answer_lexicon"] = lexicon;
  j["direction_lexicon"] = pack.direction_lexicon;
  json questions = json::array();
  for (const auto& q : pack.question_templates) {
    questions.push_back({{"pattern", q.pattern.text()}, {"subject", q.subject_slot == Slot::a ? "A" : "B"}});
  }
  j["questions"] = questions;
  json facts = json::array();
  for (const Template* t : pack.all_templates()) {
    facts.push_back({{"pattern", t->pattern.text()},
                     {"relation", std::string(name_of(t->relation))},
                     {"subject", t->subject_slot == Slot::a ? "A" : "B"},
                     {"style", std::string(style_name(t->style))}});
  }
  j["facts"] = facts;
  return j.dump(2) + "\n";
}

TemplatePack load_pack(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open pack " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return pack_from_json_text(ss.str(), path.string());
}

std::vector<std::string> shipped_pack_languages() {
  return {"english", "hindi", "swedish", "nonce-direction"};
}

TemplatePack load_shipped_pack(const std::filesystem::path& data_dir, std::string_view language) {
  return load_pack(data_dir / "packs" / (std::string(language) + ".json"));
}

TemplatePack make_nonce_direction_pack(const NonceDirectionTokens& tokens) {
  TemplatePack pack;
  pack.language = "nonce-direction";
  pack.version = "1";
  pack.answer_marker = "### Answer:";
  pack.story_header = "Story:";
  pack.direction_lexicon = {
      {"up", tokens.up}, {"down", tokens.down}, {"left", tokens.left}, {"right", tokens.right}};

  const std::array<std::pair<Direction, std::string>, 8> phrases = {{
      {Direction::top, tokens.up},
      {Direction::down, tokens.down},
      {Direction::left, tokens.left},
      {Direction::right, tokens.right},
      {Direction::top_left, tokens.up + " " + tokens.left},
      {Direction::top_right, tokens.up + " " + tokens.right},
      {Direction::down_left, tokens.down + " " + tokens.left},
      {Direction::down_right, tokens.down + " " + tokens.right},
  }};
  const std::array<std::string_view, 5> frames = {
      "{A} is to the @ of {B}.",
      "{A} is at {B}'s @.",
      "{A} is positioned to the @ of {B}.",
      "The object labeled {A} is to the @ of the object labeled {B}.",
      "{A} sits on the @ side of {B}.",
  };
  const std::array<std::string, kDirectionCount> labels = {
      "above", "below", "left", "right", "upper-left", "upper-right", "lower-left", "lower-right", ""};
  pack.answer_lexicon = labels;

  for (const auto& [d, phrase] : phrases) {
    for (auto frame : frames) {
      std::string text(frame);
      text.replace(text.find('@'), 1, phrase);
      pack.fact_templates[index_of(d)].push_back(
          {Pattern::compile(text), d, Slot::a, TemplateStyle::plain});
    }
  }
  pack.question_templates.push_back(
      {Pattern::compile("What is the relation of the agent {A} to the agent {B}?"), Slot::a});
  validate_pack(pack);
  return pack;
}

}  // namespace gridhop

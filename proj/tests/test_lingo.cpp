#include <doctest.h>

#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "gridhop/errors.hpp"
#include "gridhop/lingo.hpp"
#include "gridhop/naming.hpp"
#include "gridhop/oracle.hpp"
#include "gridhop/paths.hpp"

using namespace gridhop;

namespace {

const TemplatePack& pack(const std::string& lang) {
  static std::map<std::string, TemplatePack> cache;
  auto it = cache.find(lang);
  if (it == cache.end()) it = cache.emplace(lang, load_shipped_pack(default_data_dir(), lang)).first;
  return it->second;
}

const Template* find_template(const TemplatePack& p, Direction d, std::string_view text) {
  for (const auto& t : p.templates_for(d)) {
    if (t.pattern.text() == text) return &t;
  }
  return nullptr;
}

// Clock hours that denote each direction: 12 above, 1 and 2 upper-right, ...
std::set<int> hours_for(Direction d) {
  switch (d) {
    case Direction::top: return {12};
    case Direction::top_right: return {1, 2};
    case Direction::right: return {3};
    case Direction::down_right: return {4, 5};
    case Direction::down: return {6};
    case Direction::down_left: return {7, 8};
    case Direction::left: return {9};
    case Direction::top_left: return {10, 11};
    default: return {};
  }
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("render fact examples") {
  const auto& en = pack("english");
  const auto* t = find_template(en, Direction::down_right, "{A} is to the right and below {B} at an angle of about 45 degrees.");
  REQUIRE(t != nullptr);
  CHECK(t->render("XU", "XJX") == "XU is to the right and below XJX at an angle of about 45 degrees.");

  const auto* clock = find_template(en, Direction::down, "{A} is sitting at the 6:00 position to {B}.");
  REQUIRE(clock != nullptr);
  CHECK(clock->render("XEG", "XAE") == "XEG is sitting at the 6:00 position to XAE.");

  const auto& nonce = pack("nonce-direction");
  const auto* nt = find_template(nonce, Direction::down_right, "{A} is to the meanion writent of {B}.");
  REQUIRE(nt != nullptr);
  CHECK(nt->render("XU", "XJX") == "XU is to the meanion writent of XJX.");
}

TEST_CASE("render_fact picks a template of the fact's relation") {
  const auto& en = pack("english");
  const std::vector<std::string> names = {"XU", "XJX"};
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Direction d = kAnswerDirections[i % 8];
    const Fact f{d, 0, 1, true, 0};
    const auto sentence = render_fact(f, names, en, rng);
    const auto parsed = parse_sentence(sentence, en);
    CHECK(parsed == NamedFact{d, "XU", "XJX"});
  }
  TemplatePack empty = en;
  empty.fact_templates[index_of(Direction::left)].clear();
  CHECK_THROWS_AS(render_fact(Fact{Direction::left, 0, 1, true, 0}, names, empty, rng), MissingTemplate);
}

TEST_CASE("render question examples") {
  Rng rng(1);
  const std::vector<std::string> a1 = {"XU", "XJX"};
  CHECK(render_question(Query{0, 1}, a1, pack("english"), rng) ==
        "What is the relation of the agent XU to the agent XJX?");
  const std::vector<std::string> a2 = {"XJM", "XFR"};
  CHECK(render_question(Query{0, 1}, a2, pack("english"), rng) ==
        "What is the relation of the agent XJM to the agent XFR?");
  const std::vector<std::string> a5 = {"XCN", "XEJ"};
  CHECK(render_question(Query{0, 1}, a5, pack("swedish"), rng) == "Vad är förhållandet från XCN till XEJ?");
}

TEST_CASE("number_line") {
  CHECK(number_line(1, "XU is above XJX.") == "1 XU is above XJX.");
  CHECK(number_line(12, "x") == "12 x");
}

TEST_CASE("english pack size") {
  const auto& en = pack("english");
  CHECK_FALSE(en.partial);
  for (Direction d : kAnswerDirections) {
    CHECK(en.templates_for(d).size() >= 15);
    CHECK(en.templates_for(d).size() <= 40);
  }
  CHECK(en.template_count() == en.all_templates().size());
  CHECK(en.answer_label(Direction::down_right) == "lower-right");
}

TEST_CASE("shipped packs cover every direction") {
  for (const auto& lang : shipped_pack_languages()) {
    const auto& p = pack(lang);
    CHECK(p.language == lang);
    for (Direction d : kAnswerDirections) {
      CHECK_FALSE(p.templates_for(d).empty());
      CHECK_FALSE(p.answer_label(d).empty());
    }
  }
  CHECK(pack("hindi").partial);
  CHECK(pack("swedish").partial);
}

TEST_CASE("clock templates name hours of their own direction") {
  int clock_templates = 0;
  for (const auto& lang : shipped_pack_languages()) {
    for (const Template* t : pack(lang).all_templates()) {
      if (t->style != TemplateStyle::clock) continue;
      ++clock_templates;
      const auto allowed = hours_for(t->relation);
      bool named_hour = false;
      for (int n : t->pattern.literal_numbers()) {
        if (n == 0) continue;  // minutes of "6:00"
        CHECK_MESSAGE(allowed.contains(n), t->pattern.text());
        named_hour = true;
      }
      CHECK_MESSAGE(named_hour, t->pattern.text());
    }
  }
  CHECK(clock_templates > 0);
}

TEST_CASE("property: parse after render is the identity for every template") {
  const NamePool pool = symbolic_pool(2);
  Rng rng(6);
  for (const auto& lang : shipped_pack_languages()) {
    const auto& p = pack(lang);
    for (const Template* t : p.all_templates()) {
      for (int trial = 0; trial < 5; ++trial) {
        const auto names = assign_names(2, pool, rng);
        const auto sentence = t->render(names[0], names[1]);
        CHECK(sentence.find('{') == std::string::npos);
        CHECK(sentence.find('}') == std::string::npos);
        REQUIRE(parse_sentence(sentence, p) == NamedFact{t->relation, names[0], names[1]});
      }
    }
  }
}

TEST_CASE("json round trip") {
  for (const auto& lang : shipped_pack_languages()) {
    const auto& p = pack(lang);
    const auto text = pack_to_json_text(p);
    const auto again = pack_from_json_text(text);
    CHECK(pack_to_json_text(again) == text);
    CHECK(again.template_count() == p.template_count());
  }
}

TEST_CASE("validation errors") {
  const auto text = read(default_data_dir() / "packs" / "english.json");
  auto j = nlohmann::json::parse(text);

  auto missing = j;
  missing["answer_lexicon"].erase("down_left");
  CHECK_THROWS_AS(pack_from_json_text(missing.dump()), IncompleteLexicon);

  auto clash = j;
  clash["facts"].push_back({{"pattern", "{A} is above {B}."}, {"relation", "down"}, {"subject", "A"},
                            {"style", "plain"}});
  CHECK_THROWS_AS(pack_from_json_text(clash.dump()), AmbiguousTemplates);

  auto bad = j;
  bad["facts"][0]["relation"] = "sideways";
  CHECK_THROWS(pack_from_json_text(bad.dump()));

  CHECK_THROWS_AS(pack_from_json_text("{"), SchemaError);
  CHECK_THROWS(load_pack(default_data_dir() / "packs" / "klingon.json"));
}

TEST_CASE("nonce-direction pack from tokens") {
  const auto p = make_nonce_direction_pack({"eliam", "meanion", "unclust", "writent"});
  CHECK(pack_to_json_text(p) == pack_to_json_text(pack("nonce-direction")));
  const auto other = make_nonce_direction_pack({"abcdefg", "hijklmn", "opqrstu", "vwxyzab"});
  CHECK_NOTHROW(validate_pack(other));
  for (const Template* t : other.all_templates()) {
    CHECK(t->pattern.text().find("above") == std::string::npos);
    CHECK(t->pattern.text().find("left") == std::string::npos);
  }
}

#include <doctest.h>

#include <map>

#include "gridhop/errors.hpp"
#include "gridhop/eval.hpp"
#include "gridhop/naming.hpp"
#include "gridhop/oracle.hpp"
#include "gridhop/paths.hpp"

using namespace gridhop;

namespace {

const TemplatePack& english() {
  static const TemplatePack p = load_shipped_pack(default_data_dir(), "english");
  return p;
}

const std::vector<std::string> kA1Story3 = {
    "1 XEX is to the bottom right of XEM.",
    "2 XFR is positioned up and to the right of XEM.",
    "3 XEX is to the left of XJM with a small gap between them.",
};

const std::vector<std::string> kA6Story = {
    "XAH is positioned in the front right corner of XAM.",
    "XAF is on the left side of and below XAQ.",
    "XAY and XAI are parallel, and XAY is on top of XAI.",
    "XAV is over there with XAT above.",
    "XAV is slightly off center to the top left and XAG is slightly off center to the bottom right.",
    "The objects XAS and XAA are over there. The object XAS is lower and slightly to the left of the object XAA.",
    "XAD is diagonally below XAZ to the right at a 45 degree angle.",
    "XAV is at XAA\xE2\x80\x99s 9 o\xE2\x80\x99" "clock",
    "XAJ is at XAO\xE2\x80\x99s 6 o\xE2\x80\x99" "clock.",
    "XAH is below XAJ at 4 o\xE2\x80\x99" "clock.",
    "XAO is there and XAC is at the 5 position of a clock face.",
    "If XAH is the center of a clock face, XAB is located between 10 and 11.",
};

}  // namespace

TEST_CASE("strip_line_number") {
  CHECK(strip_line_number("12 XAV is above XU.") == "XAV is above XU.");
  CHECK(strip_line_number("XAV is above XU.") == "XAV is above XU.");
  CHECK(strip_line_number("12XAV") == "12XAV");
}

TEST_CASE("parse_sentence examples") {
  CHECK(parse_sentence("XAH is positioned in the front right corner of XAM.", english()) ==
        NamedFact{Direction::top_right, "XAH", "XAM"});
  CHECK(parse_sentence("XAF is on the left side of and below XAQ.", english()) ==
        NamedFact{Direction::down_left, "XAF", "XAQ"});
  CHECK(parse_sentence("XU is to the right and below XJX at an angle of about 45 degrees.", english()) ==
        NamedFact{Direction::down_right, "XU", "XJX"});
  CHECK(parse_sentence("XAV is over there with XAT above.", english()) ==
        NamedFact{Direction::top, "XAT", "XAV"});
  CHECK(parse_sentence("XAV is at XAA\xE2\x80\x99s 9 o\xE2\x80\x99" "clock", english()) ==
        NamedFact{Direction::left, "XAV", "XAA"});
}

TEST_CASE("parse_sentence errors") {
  CHECK_THROWS_AS(parse_sentence("XAH is somewhere near XAM.", english()), NoMatch);
  CHECK_THROWS_AS(parse_sentence("", english()), NoMatch);
}

TEST_CASE("parse_story three-edge example") {
  const auto p = parse_story(kA1Story3, "What is the relation of the agent XJM to the agent XFR?", english());
  REQUIRE(p.facts.size() == 3);
  CHECK(p.facts[0] == NamedFact{Direction::down_right, "XEX", "XEM"});
  CHECK(p.facts[1] == NamedFact{Direction::top_right, "XFR", "XEM"});
  CHECK(p.facts[2] == NamedFact{Direction::left, "XEX", "XJM"});
  CHECK(p.query == NamedQuery{"XJM", "XFR"});
}

TEST_CASE("parse_story single line") {
  const std::vector<std::string> lines = {"1 XU is to the right and below XJX at an angle of about 45 degrees."};
  const auto p = parse_story(lines, "What is the relation of the agent XU to the agent XJX?", english());
  CHECK(p.facts.size() == 1);
  CHECK(p.query == NamedQuery{"XU", "XJX"});
}

TEST_CASE("parse_story twelve-line example") {
  const auto p = parse_story(kA6Story, "What is the relation of the agent XAX to the agent XAY?", english());
  CHECK(p.facts.size() == 12);
  CHECK(p.query == NamedQuery{"XAX", "XAY"});
}

TEST_CASE("parse_story reports the failing line") {
  auto lines = kA1Story3;
  lines[1] = "2 XFR is somewhere near XEM.";
  try {
    parse_story(lines, "What is the relation of the agent XJM to the agent XFR?", english());
    FAIL("expected NoMatch");
  } catch (const NoMatch& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_story(kA1Story3, "Where is XJM?", english()), NoMatch);
}

TEST_CASE("emit_asp") {
  ParsedProgram one{{NamedFact{Direction::top_right, "XAH", "XAM"}}, {"XAX", "XAY"}};
  CHECK(emit_asp(one, false) == "top_right(\"XAH\", \"XAM\").\nquery(\"XAX\", \"XAY\").\n");
  ParsedProgram none{{}, {"XAX", "XAY"}};
  CHECK(emit_asp(none, false) == "query(\"XAX\", \"XAY\").\n");

  const auto with_km = emit_asp(one, true);
  CHECK(with_km.starts_with(emit_asp(one, false)));
  CHECK(with_km.find(knowledge_module(default_data_dir())) != std::string::npos);
}

TEST_CASE("emit_asp reproduces the worked translation") {
  const auto asset = load_prompt_asset(default_data_dir(), PromptMode::asp_translation, "english");
  REQUIRE(asset.examples.size() == 1);
  const auto& ex = asset.examples[0];
  const auto p = parse_story(ex.story, ex.question, english());
  CHECK(emit_asp(p, false) == ex.completion);
}

TEST_CASE("knowledge module asset") {
  const auto& km = knowledge_module(default_data_dir());
  CHECK(km.find("nums(-100..100)") != std::string::npos);
  CHECK(km.find("offset(") != std::string::npos);
  CHECK(answer_rules(default_data_dir()).find("answer(") != std::string::npos);
}

TEST_CASE("property: round trip through every shipped pack") {
  const NamePool pool = symbolic_pool(2);
  Rng rng(10);
  for (const auto& lang : shipped_pack_languages()) {
    const auto pack = load_shipped_pack(default_data_dir(), lang);
    for (int t = 0; t < 200; ++t) {
      const auto names = assign_names(4, pool, rng);
      std::vector<std::string> lines;
      std::vector<NamedFact> expected;
      for (std::uint32_t i = 0; i < 3; ++i) {
        const Direction d = kAnswerDirections[rng.below(8)];
        const Fact f{d, i + 1, i, true, i};
        lines.push_back(number_line(i + 1, render_fact(f, names, pack, rng)));
        expected.push_back({d, names[i + 1], names[i]});
      }
      const auto q = render_question(Query{3, 0}, names, pack, rng);
      const auto p = parse_story(lines, q, pack);
      REQUIRE(p.facts == expected);
      REQUIRE(p.query == NamedQuery{names[3], names[0]});
    }
  }
}

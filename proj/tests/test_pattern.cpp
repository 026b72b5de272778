#include <doctest.h>

#include "gridhop/errors.hpp"
#include "gridhop/pattern.hpp"

using namespace gridhop;

TEST_CASE("compile rejects malformed patterns") {
  CHECK_THROWS_AS(Pattern::compile("{A} is left of {C}."), SchemaError);
  CHECK_THROWS_AS(Pattern::compile("{A} is left of B}."), SchemaError);
  CHECK_THROWS_AS(Pattern::compile("{A} is alone."), SchemaError);
  CHECK_THROWS_AS(Pattern::compile("{A}{B}"), SchemaError);
  CHECK_NOTHROW(Pattern::compile("{A} and {B} and {A} again."));
}

TEST_CASE("fill and match") {
  const auto p = Pattern::compile("{A} is to the right and below {B} at an angle of about 45 degrees.");
  const auto s = p.fill("XU", "XJX");
  CHECK(s == "XU is to the right and below XJX at an angle of about 45 degrees.");
  const auto m = p.match(s);
  REQUIRE(m.size() == 1);
  CHECK(m[0] == Captures{"XU", "XJX"});
  CHECK(p.match("XU is to the left and below XJX at an angle of about 45 degrees.").empty());
}

TEST_CASE("multi-word names") {
  const auto p = Pattern::compile("{B} is there and {A} is at the 6 position of a clock face.");
  const auto m = p.match("Milton Keynes is there and High Wycombe is at the 6 position of a clock face.");
  REQUIRE(m.size() == 1);
  CHECK(m[0].a == "High Wycombe");
  CHECK(m[0].b == "Milton Keynes");
}

TEST_CASE("repeated placeholder must capture the same name") {
  const auto p = Pattern::compile("{A} is near {B}; {A} is left.");
  CHECK(p.match("XA is near XB; XA is left.").size() == 1);
  CHECK(p.match("XA is near XB; XC is left.").empty());
}

TEST_CASE("captures must be entity names") {
  const auto p = Pattern::compile("{A} is above {B}.");
  CHECK(p.match("the box is above XB.").empty());
  CHECK(p.match("XA is above XB.").size() == 1);
}

TEST_CASE("literal numbers") {
  CHECK(Pattern::compile("{A} is sitting at the 10:00 position to {B}.").literal_numbers() ==
        std::vector<int>{10, 0});
  CHECK(Pattern::compile("{A} is above {B}.").literal_numbers().empty());
}

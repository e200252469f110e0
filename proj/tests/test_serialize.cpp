#include "doctest.h"
#include "opideal/serialize.hpp"
#include "test_util.hpp"

using namespace opideal;

TEST_CASE("sequence JSON round trip preserves runs exactly") {
  testutil::Rng rng(808);
  for (int trial = 0; trial < 20; ++trial) {
    BlockSequence s = testutil::random_pow2_sequence(rng, 6, 5000);
    BlockSequence back =
        serialize::block_sequence_from_json(serialize::to_json(s));
    REQUIRE(back.run_count() == s.run_count());
    for (size_t r = 0; r < s.run_count(); ++r) {
      CHECK(back.run(r).value == s.run(r).value);
      CHECK(back.run(r).length == s.run(r).length);
    }
  }
  // big integers survive as decimal strings
  BlockSequence huge = BlockSequence::constant(
      Dyadic(BigInt(3), BigInt("-123456789012345678901234567890")),
      BigInt(1) << 200);
  BlockSequence back = serialize::block_sequence_from_json(serialize::to_json(huge));
  CHECK(back.run(0).value == huge.run(0).value);
  CHECK(back.coverage() == huge.coverage());
}

TEST_CASE("matrix JSON round trip") {
  SplitMix64 rng(4);
  hornmat::Matrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m(i, j) = hornmat::Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  hornmat::Matrix back = serialize::matrix_from_json(serialize::to_json(m));
  CHECK((m - back).norm() == 0.0);
}

TEST_CASE("dyadic strings") {
  Dyadic d(BigInt(-7), BigInt(123));
  CHECK(serialize::dyadic_from_string(serialize::dyadic_string(d)) == d);
  CHECK(serialize::dyadic_from_string("0").is_zero());
  CHECK(serialize::dyadic_from_string("5") == Dyadic(5));
}

#include "opideal/report.hpp"

TEST_CASE("report rendering is stable and total") {
  report::Report empty;
  empty.tool = "demo";
  std::string t = empty.render_table();
  CHECK(t.find("tool: demo") == 0);                    // header-only table
  CHECK(t.find("summary: 0 passed, 0 failed") != std::string::npos);

  report::Report one;
  one.tool = "demo";
  one.add("the-check", true, "verbatim detail text");
  std::string r1 = one.render_table();
  CHECK(r1.find("the-check") != std::string::npos);
  CHECK(r1.find("verbatim detail text") != std::string::npos);
  CHECK(r1 == one.render_table());  // deterministic

  one.add("bad", false, "");
  CHECK(!one.all_passed());
  CHECK(one.to_json()["summary"]["failed"] == 1);
}

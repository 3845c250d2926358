#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bigint.hpp"
#include "ratfield.hpp"

using namespace topoforge;

TEST_CASE("bigint arithmetic basics") {
  BigInt a = BigInt::from_string("123456789012345678901234567890");
  BigInt b = BigInt::from_string("-98765432109876543210");
  CHECK((a + b - a) == b);
  CHECK((a * b).to_string() == "-12193263113702179522496570642237463801111263526900");
  CHECK((a / BigInt(1000)).to_string() == "123456789012345678901234567");
  CHECK((a % BigInt(97)) == a - (a / BigInt(97)) * BigInt(97));
  CHECK(BigInt::gcd(BigInt(48), BigInt(-36)) == BigInt(12));
  CHECK(BigInt::isqrt(BigInt::from_string("152415787532388367501905199875019052100")).to_string() ==
        "12345678901234567890");
  CHECK(BigInt::from_string("152415787532388367501905199875019052100").is_perfect_square());
  CHECK_FALSE(BigInt::from_string("152415787532388367501905199875019052101").is_perfect_square());
}

TEST_CASE("rational normalization and comparison") {
  Rat a(BigInt(6), BigInt(-4));
  CHECK(a.to_string() == "-3/2");
  CHECK(Rat(BigInt(0), BigInt(7)).to_string() == "0");
  CHECK(Rat::from_string("-3/2") == a);
  CHECK(a < Rat(0));
  CHECK((a * a).to_string() == "9/4");
  CHECK((Rat(1) / a).to_string() == "-2/3");
}

TEST_CASE("rational enumeration starts 0, 1, -1 and is injective") {
  RationalField q;
  CHECK(q.enumerate(0) == Rat(0));
  CHECK(q.enumerate(1) == Rat(1));
  CHECK(q.enumerate(2) == Rat(-1));
  std::vector<Rat> seen;
  for (uint64_t i = 0; i < 60; ++i) {
    Rat v = q.enumerate(i);
    for (const Rat& s : seen) CHECK_FALSE(s == v);
    seen.push_back(v);
  }
}

TEST_CASE("rational roots of quadratics via exact discriminants") {
  RationalField q;
  // X^2 + X - 2 = (X+2)(X-1)
  bool complete = false;
  auto rs = q.roots({Rat(-2), Rat(1), Rat(1)}, &complete);
  REQUIRE(rs.size() == 2);
  CHECK(complete);
  CHECK(rs[0].root == Rat(-2));
  CHECK(rs[1].root == Rat(1));

  // X^2 + X + 1 has no rational root
  auto rs2 = q.roots({Rat(1), Rat(1), Rat(1)}, &complete);
  CHECK(rs2.empty());
  CHECK_FALSE(complete);

  // (2X - 1)^2 = 4X^2 - 4X + 1: double root 1/2
  auto rs3 = q.roots({Rat(1), Rat(-4), Rat(4)}, &complete);
  REQUIRE(rs3.size() == 1);
  CHECK(rs3[0].root == Rat(BigInt(1), BigInt(2)));
  CHECK(rs3[0].mult == 2);
  CHECK(complete);
}

TEST_CASE("rational root theorem path for cubics") {
  RationalField q;
  // (X-1)(X+2)(X-1/3) scaled: 3X^3 + 2X^2 - 7X + 2
  bool complete = false;
  auto rs = q.roots({Rat(2), Rat(-7), Rat(2), Rat(3)}, &complete);
  REQUIRE(rs.size() == 3);
  CHECK(complete);
  CHECK(rs[0].root == Rat(-2));
  CHECK(rs[1].root == Rat(BigInt(1), BigInt(3)));
  CHECK(rs[2].root == Rat(1));
  // X^3 - 2 has no rational root
  auto rs2 = q.roots({Rat(-2), Rat(0), Rat(0), Rat(1)}, &complete);
  CHECK(rs2.empty());
  CHECK_FALSE(complete);
}

TEST_CASE("rational element encoding round-trip") {
  RationalField q;
  Rat v(BigInt(-22), BigInt(7));
  CHECK(q.encode(v) == "p:0;d:1;c:[-22/7]");
  CHECK(q.decode(q.encode(v)) == v);
}

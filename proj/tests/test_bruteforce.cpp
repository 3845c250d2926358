#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>

#include "bruteforce.hpp"
#include "conditions.hpp"

using namespace topoforge;

TEST_CASE("FpRing roots are exhaustive with multiplicities") {
  FpRing r(3);
  bool complete = false;
  // X^2 + X + 1 = (X-1)^2 over F_3
  auto rs = r.roots({1, 1, 1}, &complete);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].root == 1);
  CHECK(rs[0].mult == 2);
  CHECK(complete);
  // X^2 + 1 has no root over F_3
  auto rs2 = r.roots({1, 0, 1}, &complete);
  CHECK(rs2.empty());
  CHECK_FALSE(complete);
}

TEST_CASE("p = 2: stage 1 is forced to {0}") {
  SearchSpaceSpec spec;
  spec.p = 2;
  spec.max_len = 3;
  auto res = brute_force_suitable_search(spec);
  CHECK(res.max_nondegenerate_depth == 0);
  REQUIRE(res.stage_can_be_nonzero.size() >= 2);
  CHECK(res.stage_can_be_nonzero[0]);
  CHECK_FALSE(res.stage_can_be_nonzero[1]);
}

TEST_CASE("p = 3: stage 2 is forced to {0}, agreeing with the hand argument") {
  SearchSpaceSpec spec;
  spec.p = 3;
  spec.max_len = 3;
  auto res = brute_force_suitable_search(spec);
  REQUIRE(res.stage_can_be_nonzero.size() >= 3);
  // the hand argument: 1 in A_2 forces -1 = 0-1 into A_1, breaking clause 6
  CHECK_FALSE(res.stage_can_be_nonzero[2]);
  CHECK(res.stage_can_be_nonzero[0]);
}

TEST_CASE("p = 5, L = 4: the search terminates with a finite depth bound") {
  SearchSpaceSpec spec;
  spec.p = 5;
  spec.max_len = 4;
  auto t0 = std::chrono::steady_clock::now();
  auto res = brute_force_suitable_search(spec);
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 60.0);
  CHECK(res.max_nondegenerate_depth >= 0);
  CHECK(res.max_nondegenerate_depth <= 4);
  // the witness it reports must itself be suitable under the same checker
  REQUIRE_FALSE(res.witness.empty());
  FpRing ring(5);
  StageSeq<FpRing> seq;
  for (const auto& st : res.witness) {
    StageSet<FpRing> s;
    for (const auto& e : st) s.insert(ring, ring.decode(e));
    seq.stages.push_back(std::move(s));
  }
  CHECK(check_suitable(ring, seq, seq.stages.size()).ok());
}

TEST_CASE("search rejects out-of-cap parameters") {
  SearchSpaceSpec spec;
  spec.p = 7;
  CHECK_THROWS(brute_force_suitable_search(spec));
  spec.p = 5;
  spec.max_len = 9;
  CHECK_THROWS(brute_force_suitable_search(spec));
}

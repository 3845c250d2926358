#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include "artifact.hpp"
#include "builder.hpp"
#include "matrix.hpp"

using namespace topoforge;

using K = PrimeClosure;
using SR = SeriesRing<K>;

namespace {

SR::Value series_from_powers(SR& R, std::initializer_list<uint32_t> powers) {
  auto s = R.zero();
  for (uint32_t t : powers) s.c[t] = R.field().one();
  return s;
}

}  // namespace

TEST_CASE("close_core golden example: p=2, N=8, A={0}, B'={0,t}, (a,n)=(1,2)") {
  K k(2);
  SR R(k, 8);
  WitnessProgram prog;
  StageSet<K> A = StageSet<K>::zero_stage(k);
  std::vector<uint32_t> a_nodes = {prog.push_const(k.encode(k.zero()))};
  StageSet<SR> Bp;
  std::vector<uint32_t> bp_nodes;
  {
    uint32_t z = prog.push_const(k.encode(k.zero()));
    Bp.insert(R, R.zero());
    bp_nodes.push_back(z);
    WitnessNode seed;
    seed.kind = WitnessNode::Kind::Seed;
    uint32_t sn = prog.push(std::move(seed));
    Bp.insert(R, R.seed());
    bp_nodes.push_back(sn);
  }
  ForgeBudget budget;
  auto res = close_core(k, R, A, a_nodes, Bp, bp_nodes, /*index=*/0, k.one(), 2, prog, budget);

  // expected set: {0, t, t^2, t+t^2+...+t^7, t+t^2+t^4}
  StageSet<SR> expect;
  expect.insert(R, R.zero());
  expect.insert(R, series_from_powers(R, {1}));
  expect.insert(R, series_from_powers(R, {2}));
  expect.insert(R, series_from_powers(R, {1, 2, 3, 4, 5, 6, 7}));
  expect.insert(R, series_from_powers(R, {1, 2, 4}));
  CHECK(res.stage.set_equal(R, expect));

  // residues stay inside A and the closed pair passes over R
  for (const auto& s : res.stage.items()) CHECK(k.is_zero(R.residue(s)));
  CHECK(check_condition_values(R, 0, R.one(), 2, res.stage, Bp).ok());
}

TEST_CASE("close_core trivial: A={0}, B'={0} collapses to {0} at any index") {
  K k(3);
  SR R(k, 16);
  WitnessProgram prog;
  StageSet<K> A = StageSet<K>::zero_stage(k);
  std::vector<uint32_t> a_nodes = {prog.push_const(k.encode(k.zero()))};
  StageSet<SR> Bp;
  Bp.insert(R, R.zero());
  std::vector<uint32_t> bp_nodes = {prog.push_const(k.encode(k.zero()))};
  ForgeBudget budget;
  for (uint64_t i : {0ull, 3ull, 7ull}) {
    const SchedulePoint sp = schedule_at(i);
    auto res = close_core(k, R, A, a_nodes, Bp, bp_nodes, i, k.enumerate(sp.element_index), sp.n, prog, budget);
    CHECK(res.stage.size() == 1);
    CHECK(res.stage.is_zero_only(R));
  }
}

TEST_CASE("close_core aborts when its hypothesis fails") {
  K k(2);
  SR R(k, 8);
  WitnessProgram prog;
  // A = {0} but B' contains a residue outside any passing condition: -1
  StageSet<K> A = StageSet<K>::zero_stage(k);
  std::vector<uint32_t> a_nodes = {prog.push_const(k.encode(k.zero()))};
  StageSet<SR> Bp;
  Bp.insert(R, R.minus_one());
  std::vector<uint32_t> bp_nodes = {prog.push_const(k.encode(k.minus_one()))};
  ForgeBudget budget;
  CHECK_THROWS_AS(close_core(k, R, A, a_nodes, Bp, bp_nodes, 0, k.zero(), 2, prog, budget),
                  PreconditionViolation);
}

TEST_CASE("extend_in_R: target 1 over the zero sequence reproduces the golden closure") {
  K k(2);
  SR R(k, 8);
  StageSeq<K> base = StageSeq<K>::all_zero(k, 3);
  ForgeBudget budget;
  auto ext = extend_in_R(k, R, base, 1, budget);
  CHECK(ext.r_report.ok());
  // stage 1 = {0, t}
  StageSet<SR> s1_expect;
  s1_expect.insert(R, R.zero());
  s1_expect.insert(R, R.seed());
  CHECK(ext.seq.stages[1].set_equal(R, s1_expect));
  // stage 0 = golden closure with (a_0, n_0) = (0, 2); a_0 = 0 collapses Z5
  StageSet<SR> s0_expect;
  s0_expect.insert(R, R.zero());
  s0_expect.insert(R, series_from_powers(R, {1}));
  s0_expect.insert(R, series_from_powers(R, {2}));
  s0_expect.insert(R, series_from_powers(R, {1, 2, 3, 4, 5, 6, 7}));
  s0_expect.insert(R, series_from_powers(R, {1, 2, 4}));
  CHECK(ext.seq.stages[0].set_equal(R, s0_expect));
  // stages above the target are untouched
  CHECK(ext.seq.stages[2].is_zero_only(R));
}

TEST_CASE("extend_in_R: seed joins a nonzero target stage as a fresh element") {
  K k(2);
  SR R(k, 8);
  StageSeq<K> base = StageSeq<K>::all_zero(k, 4);
  auto g = k.enumerate(2);
  base.stages[2].insert(k, g);
  const SchedulePoint sp1 = schedule_at(1);
  // make the base suitable: stage 1 and 0 are closures
  StageSeq<K> filled = base;
  {
    VerificationReport rep;
    RunConfig cfg;
    auto r = direct_extend_in_K(k, filled, 2, {g}, cfg, 0, &rep);
    REQUIRE(r.has_value());
    filled = *r;
  }
  REQUIRE(check_suitable(k, filled, 3).ok());
  ForgeBudget budget;
  auto ext = extend_in_R(k, R, filled, 2, budget);
  // |stage_2 over R| = |base stage_2| + 1: t is fresh
  CHECK(ext.seq.stages[2].size() == filled.stages[2].size() + 1);
  (void)sp1;
}

TEST_CASE("witness program replay over R is deterministic") {
  K k(2);
  SR R(k, 8);
  StageSeq<K> base = StageSeq<K>::all_zero(k, 3);
  ForgeBudget budget;
  auto ext = extend_in_R(k, R, base, 1, budget);
  // replay with the recorded branches
  auto resolve = [&](uint32_t, const WitnessNode& n,
                     const std::vector<SR::Value>& cs) -> std::optional<SR::Value> {
    std::vector<K::Elem> residues;
    for (const auto& c : cs) residues.push_back(R.residue(c));
    auto simple = simple_roots_sorted(k, n.degree, residues);
    if (n.branch >= simple.size()) return std::nullopt;
    auto f = monic_tail_poly(R, n.degree, cs);
    return R.hensel_lift_simple_root(f, simple[n.branch]);
  };
  auto ev = eval_program<SR>(R, ext.prog, R.seed(), resolve);
  REQUIRE(ev.ok);
  for (size_t i = 0; i < ext.prog.stage_nodes.size(); ++i) {
    StageSet<SR> replayed;
    for (uint32_t nid : ext.prog.stage_nodes[i]) replayed.insert(R, ev.values[nid]);
    CHECK(replayed.set_equal(R, ext.seq.stages[i]));
  }
}

TEST_CASE("specialize_to_K: tau = 0 rejected; certified extension for a generator") {
  K k(2);
  SR R(k, 16);
  StageSeq<K> base = StageSeq<K>::all_zero(k, 3);
  ForgeBudget budget;
  auto ext = extend_in_R(k, R, base, 1, budget);

  auto none = specialize_to_K(k, ext.prog, base, 1, k.zero(), budget);
  CHECK_FALSE(none.seq.has_value());

  auto g = k.enumerate(2);
  auto got = specialize_to_K(k, ext.prog, base, 1, g, budget);
  REQUIRE(got.seq.has_value());
  const StageSeq<K>& seq = *got.seq;
  CHECK(seq.stages[1].contains(k, g));
  CHECK(check_suitable(k, seq, 3).ok());
  // A'_0 contains tau, tau^2 and (1+tau)^(-1) - 1
  CHECK(seq.stages[0].contains(k, g));
  CHECK(seq.stages[0].contains(k, k.mul(g, g)));
  CHECK(seq.stages[0].contains(k, *opt_inv_one_plus(k, g)));
}

TEST_CASE("specialize_to_K: tau = -1 over F_3 dies at the unit guard") {
  K k(3);
  SR R(k, 16);
  StageSeq<K> base = StageSeq<K>::all_zero(k, 3);
  ForgeBudget budget;
  auto ext = extend_in_R(k, R, base, 1, budget);
  auto res = specialize_to_K(k, ext.prog, base, 1, k.minus_one(), budget);
  CHECK_FALSE(res.seq.has_value());
}

TEST_CASE("extend_in_K certifies targets 1, 2, 3 with strict diagonal growth") {
  K k(2);
  RunConfig cfg;
  cfg.tau_budget = 24;
  StageSeq<K> cur = StageSeq<K>::all_zero(k, 5);
  for (size_t target = 1; target <= 3; ++target) {
    auto out = extend_in_K(k, cur, target, cfg, splitmix64(target));
    // strict growth at the target stage, containment everywhere
    for (size_t i = 0; i < cur.stages.size(); ++i) {
      CHECK(cur.get(k, i).subset_of(k, out.seq.get(k, i)));
    }
    CHECK(out.seq.get(k, target).size() > cur.get(k, target).size());
    CHECK_FALSE(out.seq.get(k, target).is_zero_only(k));
    cur = out.seq;
  }
  CHECK(check_suitable(k, cur, 4).ok());
}

TEST_CASE("build_topology J=1 over p=2: certified, nontrivial diagonal") {
  K k(2);
  RunConfig cfg;
  cfg.rows = 1;
  cfg.tau_budget = 24;
  auto art = build_topology(k, cfg);
  CHECK_FALSE(art.budget_exhausted);
  REQUIRE(art.rows.size() == 2);
  CHECK(art.certificates.ok());
  CHECK_FALSE(art.union_prefix.stages[1].is_zero_only(k));
}

TEST_CASE("build_topology J=0 degenerate edge") {
  K k(2);
  RunConfig cfg;
  cfg.rows = 0;
  auto art = build_topology(k, cfg);
  REQUIRE(art.rows.size() == 1);
  CHECK(art.certificates.ok());
  for (const auto& st : art.union_prefix.stages) CHECK(st.is_zero_only(k));
}

TEST_CASE("build_topology J=2 columns increase and certificates self-verify from JSON") {
  for (uint32_t p : {2u, 3u}) {
    K k(p);
    RunConfig cfg;
    cfg.p = p;
    cfg.rows = 2;
    cfg.tau_budget = 24;
    auto art = build_topology(k, cfg);
    CHECK_FALSE(art.budget_exhausted);
    CHECK(art.certificates.ok());
    std::string json = artifact_to_json(k, art);
    VerifyResult vr = verify_artifact_json(json);
    CHECK(vr.status == 0);
    CHECK(vr.report.ok());
  }
}

TEST_CASE("direct-greedy strategy builds certified rows too") {
  K k(2);
  RunConfig cfg;
  cfg.rows = 2;
  cfg.strategy = "direct-greedy";
  cfg.tau_budget = 24;
  auto art = build_topology(k, cfg);
  CHECK_FALSE(art.budget_exhausted);
  CHECK(art.certificates.ok());
  std::string json = artifact_to_json(k, art);
  CHECK(verify_artifact_json(json).status == 0);
}

TEST_CASE("rational control: the seeded row eventually starves the budget") {
  RationalField q;
  RunConfig cfg;
  cfg.p = 0;
  cfg.rows = 2;
  cfg.tau_budget = 24;
  cfg.precision = 8;
  auto art = build_topology(q, cfg);
  CHECK(art.budget_exhausted);
  // partial rows are preserved and whatever was certified stays certified
  CHECK(art.rows.size() >= 1);
  std::string json = artifact_to_json(q, art);
  VerifyResult vr = verify_artifact_json(json);
  // a partial artifact still re-verifies as far as it got, unless no row
  // was built at all
  if (art.rows.size() > 1) CHECK(vr.report.ok());
}

TEST_CASE("frontier build: dimension 1 with eight nonzero samples over p=2") {
  K k(2);
  RunConfig cfg;
  cfg.rows = 3;
  cfg.sample_dim = 1;
  // eight nonzero degree-4 elements; small-subfield elements cannot sit in
  // deep stages (x^2 and (1+x)^(-1)-1 collide onto -1 within two descents)
  std::vector<std::vector<K::Elem>> samples;
  for (uint64_t i = 10; samples.size() < 8; ++i) samples.push_back({k.enumerate(i)});
  std::vector<K::Elem> limit = {k.zero()};
  auto art = build_frontier_topology(k, cfg, samples, limit);
  CHECK_FALSE(art.budget_exhausted);
  CHECK(art.certificates.ok());
  REQUIRE(art.rows.size() == 4);
  // each diagonal stage contains its chosen sample
  for (size_t j = 1; j < art.rows.size(); ++j) {
    const int64_t s = art.row_sample[j - 1];
    REQUIRE(s >= 0);
    CHECK(art.rows[j].get(k, j).contains(k, samples[size_t(s)][0]));
  }
  std::string json = artifact_to_json(k, art);
  CHECK(verify_artifact_json(json).status == 0);
}

TEST_CASE("frontier: a small-subfield sample pool exhausts its budget honestly") {
  // every nonzero element of degree <= 3 over F_2 forces -1 into stage 1
  // once it enters stage 3, so a J=3 frontier build over the first eight
  // nonzero elements must report exhaustion rather than certify anything
  K k(2);
  RunConfig cfg;
  cfg.rows = 3;
  cfg.sample_dim = 1;
  cfg.direct_attempts = 1;
  std::vector<std::vector<K::Elem>> samples;
  for (uint64_t i = 1; samples.size() < 8; ++i) samples.push_back({k.enumerate(i)});
  std::vector<K::Elem> limit = {k.zero()};
  auto art = build_frontier_topology(k, cfg, samples, limit);
  CHECK(art.budget_exhausted);
  CHECK(art.built_rows() < 3);
}

TEST_CASE("frontier rejects a sample list that only contains the limit point") {
  K k(2);
  RunConfig cfg;
  cfg.rows = 1;
  std::vector<std::vector<K::Elem>> samples = {{k.one()}};
  std::vector<K::Elem> limit = {k.one()};
  CHECK_THROWS_AS(build_frontier_topology(k, cfg, samples, limit), PreconditionViolation);
}

TEST_CASE("frontier with a -1 coordinate retries onto a usable sample") {
  K k(5);
  RunConfig cfg;
  cfg.p = 5;
  cfg.rows = 1;
  cfg.sample_dim = 2;
  // first sample contains -1 = 4: poisons stage 1; second sample works
  std::vector<std::vector<K::Elem>> samples = {
      {k.minus_one(), k.one()},
      {k.from_small(2), k.one()},
  };
  std::vector<K::Elem> limit = {k.zero(), k.zero()};
  auto art = build_frontier_topology(k, cfg, samples, limit);
  CHECK_FALSE(art.budget_exhausted);
  REQUIRE(art.rows.size() == 2);
  CHECK(art.row_sample[0] == 1);
  CHECK(art.certificates.ok());
}

TEST_CASE("artifact reproducibility: same config, same bytes") {
  RunConfig cfg;
  cfg.rows = 2;
  cfg.seed = 42;
  cfg.tau_budget = 24;
  K k1(2), k2(2);
  auto a1 = build_topology(k1, cfg);
  auto a2 = build_topology(k2, cfg);
  CHECK(artifact_to_json(k1, a1) == artifact_to_json(k2, a2));
}

TEST_CASE("verify_artifact kills mutations") {
  K k(2);
  RunConfig cfg;
  cfg.rows = 2;
  cfg.tau_budget = 24;
  auto art = build_topology(k, cfg);
  REQUIRE(art.certificates.ok());
  std::string json = artifact_to_json(k, art);
  REQUIRE(verify_artifact_json(json).status == 0);

  // deleting one element from a row stage must be caught
  {
    auto j = nlohmann::ordered_json::parse(json);
    auto& stage = j["rows"][2][0];  // row 2, stage 0
    REQUIRE(stage.size() > 1);
    stage.erase(stage.size() - 1);
    VerifyResult vr = verify_artifact_json(j.dump());
    CHECK(vr.status == 1);
    CHECK(vr.report.first_failure() != nullptr);
  }
  // injecting -1 into A_1 fails clause 6 at i = 0
  {
    auto j = nlohmann::ordered_json::parse(json);
    j["rows"][2][1].push_back("p:2;d:1;c:[1]");
    VerifyResult vr = verify_artifact_json(j.dump());
    CHECK(vr.status == 1);
    bool clause6 = false;
    for (const auto& r : vr.report.records) {
      if (r.clause == 6 && !r.pass && r.index == 0) clause6 = true;
    }
    CHECK(clause6);
  }
}

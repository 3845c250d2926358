// Acceptance suite: runs each top-level acceptance criterion and prints one
// [PASS]/[FAIL] line.  Invoke with the criterion number (1..9) or with no
// argument to run them all.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "artifact.hpp"
#include "bruteforce.hpp"
#include "builder.hpp"
#include "matrix.hpp"

using namespace topoforge;
using Clock = std::chrono::steady_clock;

namespace {

#ifndef TOPOFORGE_CLI_PATH
#define TOPOFORGE_CLI_PATH "./topoforge"
#endif

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TOPOFORGE_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int rc = pclose(p);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool report_line(int n, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  return pass;
}

// ---------------------------------------------------------------------------

// 1. End-to-end: for p in {2,3,5}, `build -J 5` within 120 s, artifact fully
//    re-verified (every C_i for i < 5 on every row and the union prefix,
//    strict diagonal growth and nontrivial union stages for j = 1..5).
bool criterion1() {
  bool all = true;
  std::string detail;
  for (uint32_t p : {2u, 3u, 5u}) {
    const std::string path = "/tmp/tf_acc_c1_p" + std::to_string(p) + ".json";
    auto t0 = Clock::now();
    RunResult r = run_cli("build -p " + std::to_string(p) + " -J 5 -o " + path);
    const double secs = seconds_since(t0);
    bool ok = r.status == 0 && secs <= 120.0;
    std::string note;
    if (ok) {
      VerifyResult vr = verify_artifact_json(slurp(path));
      ok = vr.status == 0 && vr.rows == 5;
      note = ok ? "certified" : ("verification: " + vr.report.summary());
    } else {
      auto j = nlohmann::json::parse(slurp(path), nullptr, false);
      std::string built = j.is_discarded() ? "?" : std::to_string(j["rows"].size() - 1);
      note = "exit " + std::to_string(r.status) + " after " + std::to_string(secs).substr(0, 6) +
             " s, rows built: " + built;
      if (!j.is_discarded() && j.contains("status")) {
        note += "; " + j["status"]["failure"].get<std::string>();
      }
    }
    detail += "p=" + std::to_string(p) + " [" + note + "] ";
    all = all && ok;
  }
  return report_line(1, all, "end-to-end build -J 5 within 120 s: " + detail);
}

// 2. Golden closure step: p=2, N=8, A={0}, B'={0,t}, (a,n)=(1,2) yields
//    exactly {0, t, t^2, t+...+t^7, t+t^2+t^4}.
bool criterion2() {
  PrimeClosure k(2);
  SeriesRing<PrimeClosure> R(k, 8);
  WitnessProgram prog;
  StageSet<PrimeClosure> A = StageSet<PrimeClosure>::zero_stage(k);
  std::vector<uint32_t> a_nodes = {prog.push_const(k.encode(k.zero()))};
  StageSet<SeriesRing<PrimeClosure>> Bp;
  std::vector<uint32_t> bp_nodes;
  bp_nodes.push_back(prog.push_const(k.encode(k.zero())));
  Bp.insert(R, R.zero());
  {
    WitnessNode seed;
    seed.kind = WitnessNode::Kind::Seed;
    bp_nodes.push_back(prog.push(std::move(seed)));
    Bp.insert(R, R.seed());
  }
  ForgeBudget budget;
  auto res = close_core(k, R, A, a_nodes, Bp, bp_nodes, 0, k.one(), 2, prog, budget);
  auto series_of = [&](std::initializer_list<uint32_t> powers) {
    auto s = R.zero();
    for (uint32_t t : powers) s.c[t] = k.one();
    return s;
  };
  StageSet<SeriesRing<PrimeClosure>> expect;
  expect.insert(R, R.zero());
  expect.insert(R, series_of({1}));
  expect.insert(R, series_of({2}));
  expect.insert(R, series_of({1, 2, 3, 4, 5, 6, 7}));
  expect.insert(R, series_of({1, 2, 4}));
  const bool pass = res.stage.set_equal(R, expect) && res.stage.size() == 5;
  return report_line(2, pass,
                     "golden close_core set equality (" + std::to_string(res.stage.size()) + " elements)");
}

// 3. Hensel lifting: 200 randomized monic polynomials per p in {2,3,5} with
//    a verified simple residue root lift exactly at N = 16.
bool criterion3() {
  uint64_t lifts = 0;
  for (uint32_t p : {2u, 3u, 5u}) {
    PrimeClosure k(p);
    SeriesRing<PrimeClosure> R(k, 16);
    int done = 0;
    for (int trial = 0; done < 200 && trial < 2000; ++trial) {
      uint64_t h = splitmix64(trial * 1337 + p);
      const uint32_t deg = 2 + (h % 4);
      auto rho = k.enumerate(splitmix64(h ^ 0x5eed) % 12);
      std::vector<PrimeClosure::Elem> fbar(deg + 1, k.zero());
      {
        std::vector<PrimeClosure::Elem> q(deg, k.zero());
        q[deg - 1] = k.one();
        for (uint32_t i = 0; i + 1 < deg; ++i) q[i] = k.enumerate(splitmix64(h + 17 * i) % 9);
        for (uint32_t i = 0; i < deg; ++i) {
          fbar[i + 1] = k.add(fbar[i + 1], q[i]);
          fbar[i] = k.sub(fbar[i], k.mul(rho, q[i]));
        }
        fbar[deg] = k.one();
      }
      PrimeClosure::Elem dv = k.zero();
      for (size_t i = fbar.size(); i-- > 1;) {
        dv = k.add(k.mul(dv, rho), k.mul(fbar[i], k.from_small(static_cast<int64_t>(i))));
      }
      if (k.is_zero(dv)) continue;  // need a verified simple residue root
      std::vector<SeriesRing<PrimeClosure>::Value> f;
      for (uint32_t i = 0; i <= deg; ++i) {
        auto c = R.from_const(fbar[i]);
        if (i < deg) {
          for (uint32_t t = 1; t < 16; t += 1 + (splitmix64(h + 31 * i + t) % 5)) {
            c.c[t] = k.enumerate(splitmix64(h + 101 * i + t) % 7);
          }
        }
        f.push_back(std::move(c));
      }
      f[deg] = R.one();
      auto r = R.hensel_lift_simple_root(f, rho);
      if (!R.is_zero(poly_eval(R, f, r))) return report_line(3, false, "f(lift) != 0 mod t^16");
      if (!k.eq(R.residue(r), rho)) return report_line(3, false, "res(lift) != rho");
      auto fd = poly_derivative(R, f);
      if (k.is_zero(R.residue(poly_eval(R, fd, r))))
        return report_line(3, false, "f'(lift) is not a unit");
      ++done;
      ++lifts;
    }
    if (done != 200) return report_line(3, false, "could not generate 200 instances for p=" + std::to_string(p));
  }
  return report_line(3, true, std::to_string(lifts) + " randomized lifts exact at N=16 (200 per prime)");
}

// 4. All-zero coefficient clause: for n = 2..6 the checker certifies the
//    simple root -1 with derivative value +-1.
bool criterion4() {
  for (uint32_t p : {2u, 3u, 5u}) {
    PrimeClosure k(p);
    for (uint32_t n = 2; n <= 6; ++n) {
      std::vector<PrimeClosure::Elem> zeros(n - 1, k.zero());
      auto f = monic_tail_poly(k, n, zeros);
      if (!k.is_zero(poly_eval(k, f, k.minus_one())))
        return report_line(4, false, "-1 is not a root at n=" + std::to_string(n));
      auto d = poly_eval(k, poly_derivative(k, f), k.minus_one());
      if (!(k.is_one(d) || k.is_minus_one(d)))
        return report_line(4, false, "derivative at -1 is not +-1 at n=" + std::to_string(n));
      StageSet<PrimeClosure> A = StageSet<PrimeClosure>::zero_stage(k);
      std::string note;
      if (!clause7_search(k, A, zeros, n, &note))
        return report_line(4, false, "checker refused the base clause at n=" + std::to_string(n));
    }
  }
  return report_line(4, true, "n = 2..6 base clause certified with derivative +-1 over p in {2,3,5}");
}

// 5. 500 randomized monotonicity instances and 500 chain-union instances
//    over F_16, all exact.
bool criterion5() {
  PrimeClosure k(2);
  auto f16_elem = [&](uint64_t h) {
    uint64_t idx = h % 16;
    if (idx >= 4) idx += 6;  // skip the degree-3 block: degrees 1,2,4 only
    return k.enumerate(idx);
  };
  auto closure_of = [&](const StageSet<PrimeClosure>& B, const PrimeClosure::Elem& a_val, uint32_t n,
                        bool* ok) {
    StageSet<PrimeClosure> A;
    A.insert(k, k.zero());
    for (const auto& b : B.items()) A.insert(k, b);
    for (const auto& x : B.items())
      for (const auto& y : B.items()) A.insert(k, k.sub(x, y));
    for (const auto& x : B.items())
      for (const auto& y : B.items()) A.insert(k, k.mul(x, y));
    for (const auto& b : B.items()) A.insert(k, k.mul(a_val, b));
    for (const auto& b : B.items()) {
      auto w = opt_inv_one_plus(k, b);
      if (!w) {
        *ok = false;
        return A;
      }
      A.insert(k, *w);
    }
    *ok = true;
    detail::for_each_tuple<PrimeClosure>(B, n - 1, [&](const std::vector<PrimeClosure::Elem>& tuple) {
      auto roots = simple_roots_sorted(k, n, tuple);
      if (roots.empty()) {
        *ok = false;
        return false;
      }
      A.insert(k, k.add(roots.front(), k.one()));
      return true;
    });
    return A;
  };

  int mono = 0;
  for (int trial = 0; mono < 500; ++trial) {
    uint64_t h = splitmix64(trial);
    const SchedulePoint sp = schedule_at(h % 6);
    auto a_val = k.enumerate(sp.element_index);
    StageSet<PrimeClosure> B;
    B.insert(k, k.zero());
    for (int e = 0; e < 2; ++e) {
      auto x = f16_elem(splitmix64(h + e));
      if (!k.is_minus_one(x)) B.insert(k, x);
    }
    bool built = false;
    StageSet<PrimeClosure> A = closure_of(B, a_val, sp.n, &built);
    if (!built) continue;
    if (!check_condition_values(k, h % 6, a_val, sp.n, A, B).ok())
      return report_line(5, false, "closure pair unexpectedly fails");
    StageSet<PrimeClosure> A2 = A;
    A2.insert(k, f16_elem(splitmix64(h ^ 0xabcdef)));
    if (!check_condition_values(k, h % 6, a_val, sp.n, A2, B).ok())
      return report_line(5, false, "monotonicity violated at trial " + std::to_string(trial));
    ++mono;
  }

  int uni = 0;
  for (int trial = 0; uni < 500; ++trial) {
    uint64_t h = splitmix64(trial ^ 0x7777);
    const SchedulePoint sp = schedule_at(h % 6);
    auto a_val = k.enumerate(sp.element_index);
    StageSet<PrimeClosure> B0, B1, B2;
    B0.insert(k, k.zero());
    B1.insert(k, k.zero());
    B2.insert(k, k.zero());
    auto x1 = f16_elem(splitmix64(h + 1));
    auto x2 = f16_elem(splitmix64(h + 2));
    if (!k.is_minus_one(x1)) {
      B1.insert(k, x1);
      B2.insert(k, x1);
    }
    if (!k.is_minus_one(x2)) B2.insert(k, x2);
    bool ok0 = false, ok1 = false, ok2 = false;
    StageSet<PrimeClosure> A0 = closure_of(B0, a_val, sp.n, &ok0);
    StageSet<PrimeClosure> A1 = closure_of(B1, a_val, sp.n, &ok1);
    StageSet<PrimeClosure> A2 = closure_of(B2, a_val, sp.n, &ok2);
    if (!(ok0 && ok1 && ok2)) continue;
    if (!A0.subset_of(k, A1) || !A1.subset_of(k, A2))
      return report_line(5, false, "closure chain not increasing");
    StageSet<PrimeClosure> Au = A2, Bu = B2;
    for (const auto& v : A0.items()) Au.insert(k, v);
    for (const auto& v : A1.items()) Au.insert(k, v);
    if (!check_condition_values(k, h % 6, a_val, sp.n, Au, Bu).ok())
      return report_line(5, false, "chain union fails at trial " + std::to_string(trial));
    ++uni;
  }
  return report_line(5, true, "500 monotonicity + 500 chain-union instances exact over F_16");
}

// 6. Finite-field impossibility: exhaustive search forces A_1 = {0} at
//    p = 2 and A_2 = {0} at p = 3 within 60 s.
bool criterion6() {
  auto t0 = Clock::now();
  SearchSpaceSpec s2{2, 3};
  BruteForceResult r2 = brute_force_suitable_search(s2);
  SearchSpaceSpec s3{3, 3};
  BruteForceResult r3 = brute_force_suitable_search(s3);
  const double secs = seconds_since(t0);
  const bool p2_forced = r2.stage_can_be_nonzero.size() > 1 && !r2.stage_can_be_nonzero[1];
  const bool p3_forced = r3.stage_can_be_nonzero.size() > 2 && !r3.stage_can_be_nonzero[2];
  const bool pass = p2_forced && p3_forced && secs < 60.0;
  return report_line(6, pass,
                     "exhaustive search: p=2 forces A_1={0} (" + std::string(p2_forced ? "yes" : "no") +
                         "), p=3 forces A_2={0} (" + std::string(p3_forced ? "yes" : "no") + ") in " +
                         std::to_string(secs).substr(0, 5) + " s");
}

// 7. Non-large control: the rational build exhausts its budget at a
//    clause-7 obligation demanding an irrational root and never certifies
//    a full artifact.
bool criterion7() {
  const std::string path = "/tmp/tf_acc_c7.json";
  RunResult r = run_cli("build --field-rational-control -J 2 -o " + path);
  if (r.status != 3) return report_line(7, false, "expected exit 3, got " + std::to_string(r.status));
  auto j = nlohmann::json::parse(slurp(path), nullptr, false);
  if (j.is_discarded()) return report_line(7, false, "partial artifact unreadable");
  if (j["status"]["budget_exhausted"] != true)
    return report_line(7, false, "artifact does not record budget exhaustion");
  const size_t rows_built = j["rows"].size() - 1;
  if (rows_built >= 2) return report_line(7, false, "control field certified a full J=2 build");
  // independent verify: whatever partial rows exist must re-verify; the
  // artifact as a whole is not a certified J=2 result
  VerifyResult vr = verify_artifact_json(slurp(path));
  const bool partial_honest = vr.status != 0 || vr.rows < 2 || vr.report.ok();
  return report_line(7, partial_honest && rows_built < 2,
                     "budget exhausted after " + std::to_string(rows_built) +
                         " certified row(s); no false certification");
}

// 8. Frontier build: n = 1, eight nonzero samples over p = 2, J = 3; each
//    diagonal stage contains a sample coordinate and 0 is not a sample.
bool criterion8() {
  PrimeClosure k(2);
  nlohmann::json sj;
  sj["dim"] = 1;
  sj["limit_point"] = {k.encode(k.zero())};
  nlohmann::json arr = nlohmann::json::array();
  std::vector<std::string> encs;
  for (uint64_t i = 10; encs.size() < 8; ++i) encs.push_back(k.encode(k.enumerate(i)));
  for (const auto& e : encs) arr.push_back(std::vector<std::string>{e});
  sj["samples"] = arr;
  std::ofstream("/tmp/tf_acc_c8_samples.json") << sj.dump();
  const std::string path = "/tmp/tf_acc_c8.json";
  RunResult r =
      run_cli("frontier -p 2 -J 3 -n 1 --samples /tmp/tf_acc_c8_samples.json -o " + path);
  if (r.status != 0) return report_line(8, false, "frontier build exited " + std::to_string(r.status));
  VerifyResult vr = verify_artifact_json(slurp(path));
  if (vr.status != 0) return report_line(8, false, "artifact failed verification: " + vr.report.summary());
  auto j = nlohmann::json::parse(slurp(path));
  if (j["rows"].size() != 4) return report_line(8, false, "expected 3 built rows");
  // 0 is not among the samples, and each diagonal stage holds its sample
  PrimeClosure k2(2);
  for (const auto& t : j["frontier"]["samples"]) {
    if (k2.is_zero(k2.decode(t[0].get<std::string>())))
      return report_line(8, false, "zero found among the samples");
  }
  for (size_t row = 1; row < 4; ++row) {
    const int64_t s = j["frontier"]["row_sample"][row - 1].get<int64_t>();
    const std::string sample_enc = j["frontier"]["samples"][s][0].get<std::string>();
    bool found = false;
    for (const auto& e : j["rows"][row][row]) {
      if (e.get<std::string>() == sample_enc) found = true;
    }
    if (!found)
      return report_line(8, false, "row " + std::to_string(row) + " diagonal misses its sample");
  }
  return report_line(8, true, "J=3 frontier rows certified; every diagonal stage holds a sample");
}

// 9. Reproducibility: identical RunConfig and seed give byte-identical
//    artifacts.
bool criterion9() {
  RunResult a = run_cli("build -p 2 -J 2 --seed 99 --tau-budget 24 -o /tmp/tf_acc_c9a.json");
  RunResult b = run_cli("build -p 2 -J 2 --seed 99 --tau-budget 24 -o /tmp/tf_acc_c9b.json");
  if (a.status != 0 || b.status != 0)
    return report_line(9, false, "builds did not complete");
  const std::string da = slurp("/tmp/tf_acc_c9a.json"), db = slurp("/tmp/tf_acc_c9b.json");
  const bool same = !da.empty() && da == db;
  // and with a different seed the artifact may differ, but must still verify
  RunResult c = run_cli("build -p 2 -J 2 --seed 100 --tau-budget 24 -o /tmp/tf_acc_c9c.json");
  bool c_ok = c.status == 0 && verify_artifact_json(slurp("/tmp/tf_acc_c9c.json")).status == 0;
  return report_line(9, same && c_ok,
                     same ? "byte-identical artifacts across reruns" : "artifacts differ across reruns");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 1) {
    which.push_back(std::atoi(argv[1]));
  } else {
    for (int c = 1; c <= 9; ++c) which.push_back(c);
  }
  int failures = 0;
  for (int c : which) {
    bool ok = false;
    try {
      switch (c) {
        case 1: ok = criterion1(); break;
        case 2: ok = criterion2(); break;
        case 3: ok = criterion3(); break;
        case 4: ok = criterion4(); break;
        case 5: ok = criterion5(); break;
        case 6: ok = criterion6(); break;
        case 7: ok = criterion7(); break;
        case 8: ok = criterion8(); break;
        case 9: ok = criterion9(); break;
        default:
          std::fprintf(stderr, "unknown criterion %d\n", c);
          return 2;
      }
    } catch (const std::exception& e) {
      report_line(c, false, std::string("exception: ") + e.what());
      ok = false;
    }
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

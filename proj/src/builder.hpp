#pragma once

#include <future>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "field.hpp"
#include "forge.hpp"
#include "ratfield.hpp"

namespace topoforge {

// ---------------------------------------------------------------------------
// seed candidates

// Encoded tau candidates.  Over the closure the order prefers elements of
// high home degree (fresh extensions), shuffled within a degree by the run
// seed; over the rationals the enumeration order is kept.
std::vector<std::string> tau_candidates(PrimeClosure& field, uint64_t count, uint64_t seed);
std::vector<std::string> tau_candidates(RationalField& field, uint64_t count, uint64_t seed);

// ---------------------------------------------------------------------------
// extend_in_K (series-guided): drive extend_in_R, then specialize and verify

template <class F>
struct ExtendOutcome {
  StageSeq<F> seq;
  uint64_t taus_tried = 0;
  std::string chosen_tau;
  std::string diagnostics;
};

template <class F>
ExtendOutcome<F> extend_in_K(F& field, const StageSeq<F>& base, size_t target, const RunConfig& cfg,
                             uint64_t row_seed, uint64_t skip_options = 0) {
  const ForgeBudget budget = cfg.budget();
  uint32_t n_eff = cfg.precision_for_target(target);
  std::string diag;
  for (int escalation = 0; escalation < 3; ++escalation) {
    SeriesRing<F> sring(field, n_eff);
    ExtendRResult<F> ext = extend_in_R(field, sring, base, target, budget);
    if (!ext.r_report.ok()) {
      diag += "R-side suitability failed at N=" + std::to_string(n_eff) + ": " +
              ext.r_report.summary() + "; ";
      if (n_eff < 128) {
        n_eff *= 2;
        continue;
      }
      throw PreconditionViolation("extend_in_K: closure not suitable over R: " + ext.r_report.summary());
    }
    std::vector<std::string> taus = tau_candidates(field, budget.tau_candidates, row_seed);
    ExtendOutcome<F> out;
    uint64_t skipped = 0;  // backtracking skips the first certified seeds

    const uint32_t jobs = cfg.jobs > 1 ? cfg.jobs : 1;
    for (size_t block = 0; block < taus.size(); block += jobs) {
      const size_t block_end = std::min(taus.size(), block + jobs);
      std::vector<int> verdict(block_end - block, 0);  // 1 = certified
      if (jobs == 1) {
        typename F::Value tau = field.decode(taus[block]);
        ++out.taus_tried;
        if (!field.is_zero(tau)) {
          SpecializeOutcome<F> sp = specialize_to_K(field, ext.prog, base, target, tau, budget);
          if (sp.seq) {
            if (skipped < skip_options) {
              ++skipped;
              continue;
            }
            out.seq = std::move(*sp.seq);
            out.chosen_tau = taus[block];
            out.diagnostics = diag;
            return out;
          }
        }
        continue;
      }
      // parallel attempts on cloned state; the lowest certified index wins
      std::vector<std::future<bool>> futs;
      for (size_t k = block; k < block_end; ++k) {
        futs.push_back(std::async(std::launch::async, [&, k]() {
          F fclone = field;
          StageSeq<F> bclone = base;
          typename F::Value tau = fclone.decode(taus[k]);
          if (fclone.is_zero(tau)) return false;
          SpecializeOutcome<F> sp = specialize_to_K(fclone, ext.prog, bclone, target, tau, budget);
          return sp.seq.has_value();
        }));
      }
      for (size_t k = block; k < block_end; ++k) verdict[k - block] = futs[k - block].get() ? 1 : 0;
      out.taus_tried += block_end - block;
      for (size_t k = block; k < block_end; ++k) {
        if (verdict[k - block] == 1) {
          if (skipped < skip_options) {
            ++skipped;
            continue;
          }
          // replay the winner on the primary state
          typename F::Value tau = field.decode(taus[k]);
          SpecializeOutcome<F> sp = specialize_to_K(field, ext.prog, base, target, tau, budget);
          if (sp.seq) {
            out.seq = std::move(*sp.seq);
            out.chosen_tau = taus[k];
            out.diagnostics = diag;
            return out;
          }
        }
      }
    }
    if (ext.suspicious_merges > 0 && n_eff < 128) {
      diag += "precision escalation after " + std::to_string(ext.suspicious_merges) +
              " truncation merges at N=" + std::to_string(n_eff) + "; ";
      n_eff *= 2;
      continue;
    }
    throw BudgetExhausted("extend_in_K: no certified specialization for target " +
                          std::to_string(target) + " after " + std::to_string(taus.size()) +
                          " seed candidates (" + diag + ")");
  }
  throw BudgetExhausted("extend_in_K: precision escalation exhausted (" + diag + ")");
}

// ---------------------------------------------------------------------------
// direct in-field closure (fallback strategy and frontier rows)

template <class F>
StageSet<F> close_in_K(F& field, const StageSet<F>& A_base, const StageSet<F>& B, uint64_t sched_index,
                       const typename F::Value& a_val, uint32_t n_val, bool forbid_minus_one,
                       uint64_t rotation, const ForgeBudget& budget) {
  StageSet<F> out;
  const char* phase = "base";
  auto guarded_insert = [&](const typename F::Value& v) {
    if (forbid_minus_one && field.is_minus_one(v))
      throw ClosureObstruction("forced -1 into a stage that must omit it (i=" +
                               std::to_string(sched_index) + ", " + phase + ")");
    out.insert(field, v);
    if (out.size() > budget.max_stage_field)
      throw StageSizeExceeded("field stage exceeded " + std::to_string(budget.max_stage_field) +
                            " elements");
  };
  for (const auto& a : A_base.items()) guarded_insert(a);
  guarded_insert(field.zero());
  phase = "Z2";
  for (const auto& b : B.items()) guarded_insert(b);
  phase = "Z3";
  for (const auto& x : B.items()) {
    for (const auto& y : B.items()) guarded_insert(field.sub(x, y));
  }
  phase = "Z4";
  for (size_t i = 0; i < B.size(); ++i) {
    for (size_t j = i; j < B.size(); ++j) guarded_insert(field.mul(B.at(i), B.at(j)));
  }
  phase = "Z5";
  for (const auto& b : B.items()) guarded_insert(field.mul(a_val, b));
  phase = "Z6";
  for (const auto& b : B.items()) {
    auto inv = opt_inv_one_plus(field, b);
    if (!inv) throw ClosureObstruction("-1 entered the B side during direct closure");
    guarded_insert(*inv);
  }
  phase = "Z7";
  // simple-root obligations: reuse a root already served when possible,
  // otherwise pick a rotated simple root
  bool all_served = true;
  detail::for_each_tuple<F>(B, n_val - 1, [&](const std::vector<typename F::Value>& tuple) {
    std::vector<typename F::Value> simple = simple_roots_sorted(field, n_val, tuple);
    if (simple.empty()) {
      all_served = false;
      return false;
    }
    for (const auto& r : simple) {
      if (out.contains(field, field.add(r, field.one()))) return true;
    }
    // admissible = does not force -1 into this stage
    std::vector<typename F::Value> adm;
    for (const auto& r : simple) {
      typename F::Value shifted = field.add(r, field.one());
      if (forbid_minus_one && field.is_minus_one(shifted)) continue;
      adm.push_back(shifted);
    }
    if (adm.empty()) {
      all_served = false;
      return false;
    }
    guarded_insert(adm[rotation % adm.size()]);
    return true;
  });
  if (!all_served)
    throw ClosureObstruction("simple-root obligation unservable during direct closure (i=" +
                             std::to_string(sched_index) + ")");
  return out;
}

template <class F>
std::optional<StageSeq<F>> direct_extend_in_K(F& field, const StageSeq<F>& base, size_t target,
                                              const std::vector<typename F::Value>& seeds,
                                              const RunConfig& cfg, uint64_t rotation,
                                              VerificationReport* last_report) {
  const ForgeBudget budget = cfg.budget();
  const size_t len = std::max(base.stages.size(), target + 2);
  StageSeq<F> cand;
  cand.stages.resize(len);
  for (size_t i = target + 1; i < len; ++i) cand.stages[i] = base.get(field, i);
  {
    StageSet<F> t = base.get(field, target);
    for (const auto& s : seeds) {
      if (field.is_minus_one(s) && target >= 1)
        throw ClosureObstruction("seed element is -1");
      t.insert(field, s);
    }
    cand.stages[target] = std::move(t);
  }
  for (size_t ii = target; ii-- > 0;) {
    const SchedulePoint sp = schedule_at(ii);
    typename F::Value a_val = field.enumerate(sp.element_index);
    StageSet<F> Ai = base.get(field, ii);
    cand.stages[ii] =
        close_in_K(field, Ai, cand.stages[ii + 1], ii, a_val, sp.n, ii >= 1, rotation, budget);
  }
  bool certified = false;
  VerificationReport rep = certify_extension(field, base, cand, target, seeds, &certified);
  if (last_report) *last_report = rep;
  if (!certified) return std::nullopt;
  return cand;
}

}  // namespace topoforge

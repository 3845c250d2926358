#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "builder.hpp"

namespace topoforge {

// The Kiltinen/Podewski-style array: rows are suitable sequences, columns
// increase, row j grows the diagonal stage j.  The union prefix is what a
// neighborhood basis prefix looks like after J rounds.
template <class F>
struct BuildArtifact {
  RunConfig cfg;
  std::string kind = "build";  // "build" or "frontier"
  std::vector<StageSeq<F>> rows;
  StageSeq<F> union_prefix;
  std::vector<std::vector<std::string>> diagonal_added;  // per built row
  std::vector<std::string> row_seed_used;                // encoded tau / sample id per row

  // frontier payload (shifted samples; limit point kept for the record)
  std::vector<std::vector<std::string>> samples;
  std::vector<std::string> limit_point;
  std::vector<int64_t> row_sample;

  VerificationReport certificates;
  bool budget_exhausted = false;
  std::string failure;

  size_t built_rows() const { return rows.empty() ? 0 : rows.size() - 1; }
};

template <class F>
StageSeq<F> union_rows(F& field, const std::vector<StageSeq<F>>& rows, size_t len) {
  StageSeq<F> u;
  u.stages.resize(len);
  for (size_t i = 0; i < len; ++i) {
    for (const auto& row : rows) {
      StageSet<F> s = row.get(field, i);
      for (const auto& v : s.items()) u.stages[i].insert(field, v);
    }
  }
  return u;
}

template <class F>
void finalize_certificates(F& field, BuildArtifact<F>& art) {
  const size_t built = art.built_rows();
  const size_t len = built + 2;
  art.union_prefix = union_rows(field, art.rows, len);

  VerificationReport& rep = art.certificates;
  for (size_t j = 1; j < art.rows.size(); ++j) {
    VerificationReport row_rep = check_suitable(field, art.rows[j], len - 1);
    for (auto& r : row_rep.records) r.witness = "row " + std::to_string(j) + (r.witness.empty() ? "" : "; " + r.witness);
    rep.merge(row_rep);
  }
  {
    VerificationReport u = check_suitable(field, art.union_prefix, len - 1);
    for (auto& r : u.records) r.witness = "union" + std::string(r.witness.empty() ? "" : "; " + r.witness);
    rep.merge(u);
  }
  // columns increase, diagonal grows strictly, no union stage collapses
  for (size_t j = 1; j < art.rows.size(); ++j) {
    for (size_t i = 0; i < len; ++i) {
      StageSet<F> prev = art.rows[j - 1].get(field, i);
      StageSet<F> cur = art.rows[j].get(field, i);
      if (!prev.subset_of(field, cur)) rep.add(i, 203, false, "column decreased at row " + std::to_string(j));
    }
    StageSet<F> prev = art.rows[j - 1].get(field, j);
    StageSet<F> cur = art.rows[j].get(field, j);
    const bool strict = prev.subset_of(field, cur) && cur.size() > prev.size();
    rep.add(j, 204, strict, strict ? "" : "diagonal stage did not grow strictly at row " + std::to_string(j));
  }
  for (size_t j = 1; j <= built; ++j) {
    StageSet<F> u = art.union_prefix.get(field, j);
    rep.add(j, 205, !u.is_zero_only(field), "union stage must exceed {0}");
  }
}

// ---------------------------------------------------------------------------

template <class F>
StageSeq<F> direct_topology_row(F& field, const StageSeq<F>& base, size_t target, const RunConfig& cfg,
                                uint64_t row_seed, uint64_t skip_options, std::string* seed_used) {
  std::vector<std::string> taus = tau_candidates(field, cfg.tau_budget, row_seed);
  uint64_t tried = 0;
  uint64_t skipped = 0;
  for (const std::string& enc : taus) {
    typename F::Value tau = field.decode(enc);
    if (field.is_zero(tau)) continue;
    ++tried;
    for (uint64_t rot = 0; rot < cfg.direct_attempts; ++rot) {
      try {
        VerificationReport rep;
        auto r = direct_extend_in_K(field, base, target, {tau}, cfg, rot, &rep);
        if (r) {
          // backtracking skips the first `skip_options` certified candidates
          if (skipped < skip_options) {
            ++skipped;
            break;  // a different rotation of the same seed rarely differs; move on
          }
          if (seed_used) *seed_used = enc;
          return std::move(*r);
        }
      } catch (const ClosureObstruction&) {
        // try the next rotation / seed
      }
    }
  }
  throw BudgetExhausted("direct row construction failed for target " + std::to_string(target) +
                        " after " + std::to_string(tried) + " seeds");
}

// Rows are built depth-first: when row j runs out of seed options under the
// rows already fixed below it, the builder backs up and re-chooses row j-1.
template <class F>
BuildArtifact<F> build_topology(F& field, const RunConfig& cfg) {
  BuildArtifact<F> art;
  art.cfg = cfg;
  art.kind = "build";
  const size_t J = cfg.rows;
  art.rows.push_back(StageSeq<F>::all_zero(field, J + 2));
  art.rows.reserve(J + 1);
  std::vector<uint64_t> cursor(J + 1, 0);
  uint64_t backtracks = 0;
  const uint64_t max_backtracks = 64;
  size_t j = 1;
  std::string last_failure;
  while (j <= J) {
    const uint64_t row_seed = splitmix64(cfg.seed ^ (0x9e3779b9ULL + j));
    bool ok = false;
    try {
      StageSeq<F> row;
      std::string seed_used;
      if (cfg.strategy == "direct-greedy") {
        row = direct_topology_row(field, art.rows.back(), j, cfg, row_seed, cursor[j], &seed_used);
      } else {
        ExtendOutcome<F> out = extend_in_K(field, art.rows.back(), j, cfg, row_seed, cursor[j]);
        row = std::move(out.seq);
        seed_used = out.chosen_tau;
      }
      StageSet<F> prev = art.rows.back().get(field, j);
      StageSet<F> cur = row.get(field, j);
      std::vector<std::string> added;
      for (const auto& v : cur.sorted_items(field)) {
        if (!prev.contains(field, v)) added.push_back(field.encode(v));
      }
      art.diagonal_added.push_back(std::move(added));
      art.row_seed_used.push_back(seed_used);
      art.rows.push_back(std::move(row));
      ok = true;
    } catch (const StageSizeExceeded& e) {
      // the closure cascade itself outgrew the budget; reseeding cannot help
      art.budget_exhausted = true;
      art.failure = std::string("row ") + std::to_string(j) + ": " + e.what();
      break;
    } catch (const BudgetExhausted& e) {
      last_failure = e.what();
    }
    if (ok) {
      ++j;
      continue;
    }
    if (j == 1 || ++backtracks > max_backtracks) {
      art.budget_exhausted = true;
      art.failure = last_failure;
      break;
    }
    cursor[j] = 0;
    --j;
    ++cursor[j];
    art.rows.pop_back();
    art.diagonal_added.pop_back();
    art.row_seed_used.pop_back();
  }
  finalize_certificates(field, art);
  return art;
}

template <class F>
BuildArtifact<F> build_frontier_topology(F& field, const RunConfig& cfg,
                                         const std::vector<std::vector<typename F::Value>>& sample_tuples,
                                         const std::vector<typename F::Value>& limit_point) {
  BuildArtifact<F> art;
  art.cfg = cfg;
  art.kind = "frontier";
  if (sample_tuples.empty()) throw PreconditionViolation("frontier: sample list is empty");
  const size_t n = limit_point.size();
  for (const auto& t : sample_tuples) {
    if (t.size() != n) throw PreconditionViolation("frontier: sample arity mismatch");
  }
  // shift so the designated limit point is the origin
  std::vector<std::vector<typename F::Value>> shifted;
  for (const auto& t : sample_tuples) {
    std::vector<typename F::Value> s;
    bool all_zero = true;
    for (size_t k = 0; k < n; ++k) {
      s.push_back(field.sub(t[k], limit_point[k]));
      if (!field.is_zero(s.back())) all_zero = false;
    }
    if (all_zero)
      throw PreconditionViolation("frontier: the designated limit point may not be a sample");
    shifted.push_back(std::move(s));
  }
  for (const auto& v : limit_point) art.limit_point.push_back(field.encode(v));
  for (const auto& t : shifted) {
    std::vector<std::string> enc;
    for (const auto& v : t) enc.push_back(field.encode(v));
    art.samples.push_back(std::move(enc));
  }

  const size_t J = cfg.rows;
  art.rows.push_back(StageSeq<F>::all_zero(field, J + 2));
  std::vector<uint64_t> cursor(J + 1, 0);
  uint64_t backtracks = 0;
  const uint64_t max_backtracks = 256;
  size_t j = 1;
  std::string fail_note;
  while (j <= J) {
    const uint64_t row_seed = splitmix64(cfg.seed ^ (0x51ed2701ULL + j));
    std::vector<size_t> order(shifted.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    seeded_shuffle(order, row_seed);
    bool done = false;
    bool structural_abort = false;
    uint64_t skipped = 0;
    for (size_t oi = 0; oi < order.size() && !done && !structural_abort; ++oi) {
      const size_t s = order[oi];
      for (uint64_t rot = 0; rot < cfg.direct_attempts && !done; ++rot) {
        try {
          VerificationReport rep;
          auto r = direct_extend_in_K(field, art.rows.back(), j, shifted[s], cfg, rot, &rep);
          if (r) {
            if (skipped < cursor[j]) {
              ++skipped;
              break;  // enumerate genuinely different certified rows
            }
            art.rows.push_back(std::move(*r));
            art.row_sample.push_back(static_cast<int64_t>(s));
            StageSet<F> prev = art.rows[art.rows.size() - 2].get(field, j);
            StageSet<F> cur = art.rows.back().get(field, j);
            std::vector<std::string> added;
            for (const auto& v : cur.sorted_items(field)) {
              if (!prev.contains(field, v)) added.push_back(field.encode(v));
            }
            art.diagonal_added.push_back(std::move(added));
            art.row_seed_used.push_back("sample:" + std::to_string(s));
            done = true;
          }
        } catch (const StageSizeExceeded& e) {
          fail_note = e.what();
          structural_abort = true;
          break;
        } catch (const ClosureObstruction& e) {
          fail_note = e.what();
        }
      }
    }
    if (structural_abort) {
      art.budget_exhausted = true;
      art.failure = "frontier row " + std::to_string(j) + ": " + fail_note;
      break;
    }
    if (done) {
      ++j;
      continue;
    }
    if (j == 1 || ++backtracks > max_backtracks) {
      art.budget_exhausted = true;
      art.failure = "frontier row " + std::to_string(j) + ": no sample certified" +
                    (fail_note.empty() ? "" : " (" + fail_note + ")");
      break;
    }
    cursor[j] = 0;
    --j;
    ++cursor[j];
    art.rows.pop_back();
    art.row_sample.pop_back();
    art.diagonal_added.pop_back();
    art.row_seed_used.pop_back();
  }
  finalize_certificates(field, art);
  // sample membership in the diagonal stages
  for (size_t j = 1; j < art.rows.size(); ++j) {
    const int64_t s = art.row_sample[j - 1];
    StageSet<F> diag = art.rows[j].get(field, j);
    bool all_in = true;
    for (const auto& v : shifted[static_cast<size_t>(s)]) {
      if (!diag.contains(field, v)) all_in = false;
    }
    art.certificates.add(j, 206, all_in, all_in ? "" : "sample tuple not inside the diagonal stage");
  }
  return art;
}

}  // namespace topoforge

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conditions.hpp"
#include "stage.hpp"
#include "witness.hpp"

namespace topoforge {

struct BudgetExhausted : std::runtime_error {
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

// A stage set ran past its size cap.  Unlike seed-option exhaustion this is
// structural: the closure cascade itself is too big, so retrying with other
// seeds cannot help and builders abort instead of backtracking.
struct StageSizeExceeded : BudgetExhausted {
  explicit StageSizeExceeded(const std::string& what) : BudgetExhausted(what) {}
};

struct PreconditionViolation : std::logic_error {
  explicit PreconditionViolation(const std::string& what) : std::logic_error(what) {}
};

// Raised by the direct in-field closure when a forced element poisons a
// stage (e.g. -1 entering a stage that must omit it); callers retry with a
// different seed or branch rotation.
struct ClosureObstruction : std::runtime_error {
  explicit ClosureObstruction(const std::string& what) : std::runtime_error(what) {}
};

struct ForgeBudget {
  uint64_t tau_candidates = 64;
  uint64_t branch_per_node = 8;
  uint64_t max_stage_series = 100000;
  uint64_t max_stage_field = 2000000;
  uint64_t direct_attempts = 8;  // root-rotation retries per seed in direct mode
};

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d649bb133111ebULL;
  return x ^ (x >> 31);
}

template <class T>
void seeded_shuffle(std::vector<T>& v, uint64_t seed) {
  for (size_t i = v.size(); i > 1; --i) {
    uint64_t j = splitmix64(seed + i) % i;
    std::swap(v[i - 1], v[j]);
  }
}

// ---------------------------------------------------------------------------
// close_core: one descent step of the closure in R (Z_1 .. Z_7)

template <class F>
struct CloseCoreResult {
  StageSet<SeriesRing<F>> stage;
  std::vector<uint32_t> nodes;  // parallel to stage insertion order
  uint64_t suspicious_merges = 0;
};

namespace detail {

template <class F>
void stage_insert_node(SeriesRing<F>& ring, CloseCoreResult<F>& out, const typename SeriesRing<F>::Value& v,
                       uint32_t node, uint64_t cap, bool node_is_const) {
  if (out.stage.insert(ring, v)) {
    out.nodes.push_back(node);
    if (out.stage.size() > cap)
      throw StageSizeExceeded("series stage exceeded " + std::to_string(cap) + " elements");
  } else if (!node_is_const) {
    ++out.suspicious_merges;
  }
}

}  // namespace detail

// A is the K-stage at index i (with Const nodes), Bp the already-built
// R-stage at index i+1 (with its nodes).  Produces A' = A u Z_1 u ... u Z_7
// and records every new element's construction.
template <class F>
CloseCoreResult<F> close_core(F& field, SeriesRing<F>& sring, const StageSet<F>& A,
                              const std::vector<uint32_t>& a_nodes, const StageSet<SeriesRing<F>>& Bp,
                              const std::vector<uint32_t>& bp_nodes, uint64_t sched_index,
                              const typename F::Value& a_val, uint32_t n_val, WitnessProgram& prog,
                              const ForgeBudget& budget) {
  using SR = SeriesRing<F>;
  // hypothesis of the closure lemma: C_i(A, res Bp) over K
  StageSet<F> resB;
  for (const auto& b : Bp.items()) resB.insert(field, sring.residue(b));
  VerificationReport pre = check_condition_values(field, sched_index, a_val, n_val, A, resB);
  if (!pre.ok())
    throw PreconditionViolation("close_core: C_i(A, res B') fails over K: " + pre.summary());

  CloseCoreResult<F> out;
  const uint64_t cap = budget.max_stage_series;

  // base stage A (constants)
  for (size_t k = 0; k < A.size(); ++k) {
    detail::stage_insert_node(sring, out, sring.from_const(A.at(k)), a_nodes[k], cap, true);
  }
  // Z1 = {0}
  {
    uint32_t z = prog.push_const(field.encode(field.zero()));
    detail::stage_insert_node(sring, out, sring.zero(), z, cap, true);
  }
  // Z2 = B'
  for (size_t k = 0; k < Bp.size(); ++k) {
    detail::stage_insert_node(sring, out, Bp.at(k), bp_nodes[k], cap, true);
  }
  // Z3 = B' - B'
  for (size_t i = 0; i < Bp.size(); ++i) {
    for (size_t j = 0; j < Bp.size(); ++j) {
      if (i == j) continue;
      uint32_t n = prog.push_op(WitnessNode::Kind::Sub, bp_nodes[i], bp_nodes[j]);
      detail::stage_insert_node(sring, out, sring.sub(Bp.at(i), Bp.at(j)), n, cap, false);
    }
  }
  // Z4 = B' * B'
  for (size_t i = 0; i < Bp.size(); ++i) {
    for (size_t j = i; j < Bp.size(); ++j) {
      uint32_t n = prog.push_op(WitnessNode::Kind::Mul, bp_nodes[i], bp_nodes[j]);
      detail::stage_insert_node(sring, out, sring.mul(Bp.at(i), Bp.at(j)), n, cap, false);
    }
  }
  // Z5 = a_i * B'
  {
    uint32_t an = prog.push_const(field.encode(a_val));
    typename SR::Value a_series = sring.from_const(a_val);
    for (size_t i = 0; i < Bp.size(); ++i) {
      uint32_t n = prog.push_op(WitnessNode::Kind::Mul, an, bp_nodes[i]);
      detail::stage_insert_node(sring, out, sring.mul(a_series, Bp.at(i)), n, cap, false);
    }
  }
  // Z6 = (1 + B')^(-1) - 1
  for (size_t i = 0; i < Bp.size(); ++i) {
    auto inv = opt_inv_one_plus(sring, Bp.at(i));
    if (!inv)
      throw PreconditionViolation("close_core: residue -1 in B' despite passing hypothesis");
    uint32_t n = prog.push_op(WitnessNode::Kind::InvOnePlus, bp_nodes[i]);
    detail::stage_insert_node(sring, out, *inv, n, cap, false);
  }
  // Z7: one lifted root per coefficient tuple from B'
  {
    uint32_t one_node = prog.push_const(field.encode(field.one()));
    std::vector<size_t> idx(n_val - 1, 0);
    if (!Bp.empty()) {
      for (;;) {
        std::vector<typename SR::Value> tuple;
        std::vector<uint32_t> tuple_nodes;
        for (uint32_t k = 0; k < n_val - 1; ++k) {
          tuple.push_back(Bp.at(idx[k]));
          tuple_nodes.push_back(bp_nodes[idx[k]]);
        }
        std::vector<typename F::Value> res_tuple;
        for (const auto& c : tuple) res_tuple.push_back(sring.residue(c));
        std::vector<typename F::Value> simple = simple_roots_sorted(field, n_val, res_tuple);
        uint32_t branch = UINT32_MAX;
        for (uint32_t r = 0; r < simple.size(); ++r) {
          if (A.contains(field, field.add(simple[r], field.one()))) {
            branch = r;
            break;
          }
        }
        if (branch == UINT32_MAX)
          throw PreconditionViolation("close_core: no simple residue root in -1+A despite hypothesis");
        auto fpoly = monic_tail_poly(sring, n_val, tuple);
        typename SR::Value lift = sring.hensel_lift_simple_root(fpoly, simple[branch]);
        WitnessNode hn;
        hn.kind = WitnessNode::Kind::HenselRoot;
        hn.degree = n_val;
        hn.coeffs = tuple_nodes;
        hn.branch = branch;
        uint32_t root_node = prog.push(std::move(hn));
        uint32_t shifted = prog.push_op(WitnessNode::Kind::Add, root_node, one_node);
        detail::stage_insert_node(sring, out, sring.add(lift, sring.one()), shifted, cap, false);

        uint32_t pos = 0;
        while (pos < n_val - 1) {
          if (++idx[pos] < Bp.size()) break;
          idx[pos] = 0;
          ++pos;
        }
        if (pos == n_val - 1) break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// extend_in_R: seed stage `target` with t and close downward

template <class F>
struct ExtendRResult {
  StageSeq<SeriesRing<F>> seq;
  std::vector<std::vector<uint32_t>> stage_nodes;
  WitnessProgram prog;
  VerificationReport r_report;          // provisional (precision-bounded)
  uint64_t suspicious_merges = 0;
  size_t target = 0;
};

template <class F>
ExtendRResult<F> extend_in_R(F& field, SeriesRing<F>& sring, const StageSeq<F>& base, size_t target,
                             const ForgeBudget& budget) {
  using SR = SeriesRing<F>;
  ExtendRResult<F> out;
  out.target = target;
  const size_t len = std::max(base.stages.size(), target + 2);
  out.seq.stages.resize(len);
  out.stage_nodes.resize(len);

  // stages above the target: base constants only
  for (size_t i = target; i < len; ++i) {
    StageSet<F> bi = base.get(field, i);
    for (size_t k = 0; k < bi.size(); ++k) {
      uint32_t n = out.prog.push_const(field.encode(bi.at(k)));
      if (out.seq.stages[i].insert(sring, sring.from_const(bi.at(k)))) out.stage_nodes[i].push_back(n);
    }
  }
  // the seed t joins stage `target`
  {
    WitnessNode sn;
    sn.kind = WitnessNode::Kind::Seed;
    uint32_t seed_node = out.prog.push(std::move(sn));
    if (out.seq.stages[target].insert(sring, sring.seed())) out.stage_nodes[target].push_back(seed_node);
  }
  // descend
  for (size_t ii = target; ii-- > 0;) {
    StageSet<F> Ai = base.get(field, ii);
    std::vector<uint32_t> a_nodes;
    for (size_t k = 0; k < Ai.size(); ++k) a_nodes.push_back(out.prog.push_const(field.encode(Ai.at(k))));
    const SchedulePoint sp = schedule_at(ii);
    typename F::Value a_val = field.enumerate(sp.element_index);
    CloseCoreResult<F> step = close_core(field, sring, Ai, a_nodes, out.seq.stages[ii + 1],
                                         out.stage_nodes[ii + 1], ii, a_val, sp.n, out.prog, budget);
    out.suspicious_merges += step.suspicious_merges;
    out.seq.stages[ii] = std::move(step.stage);
    out.stage_nodes[ii] = std::move(step.nodes);

    // residues must stay inside the base stage
    for (const auto& s : out.seq.stages[ii].items()) {
      if (!Ai.contains(field, sring.residue(s)))
        throw PreconditionViolation("extend_in_R: closure left the residue class of the base stage");
    }
  }
  out.prog.stage_nodes = out.stage_nodes;
  // provisional suitability over R at working precision
  out.r_report = check_suitable(sring, out.seq, len - 1);
  return out;
}

// ---------------------------------------------------------------------------
// certification shared by every route that lands a candidate in K

template <class F>
VerificationReport certify_extension(F& field, const StageSeq<F>& base, const StageSeq<F>& cand,
                                     size_t target, const std::vector<typename F::Value>& required,
                                     bool* certified) {
  VerificationReport rep;
  const size_t len = std::max(cand.stages.size(), std::max(base.stages.size(), target + 2));
  rep.merge(check_suitable(field, cand, len));
  bool extra = true;
  for (size_t i = 0; i < len; ++i) {
    StageSet<F> b = base.get(field, i);
    StageSet<F> c = cand.get(field, i);
    if (!b.subset_of(field, c)) {
      rep.add(i, 200, false, "base stage not contained in extension");
      extra = false;
    }
  }
  {
    StageSet<F> t = cand.get(field, target);
    bool grown = !t.is_zero_only(field);
    rep.add(target, 201, grown, grown ? "" : "target stage is still {0}");
    if (!grown) extra = false;
  }
  {
    StageSet<F> t = cand.get(field, target);
    bool all_in = true;
    for (const auto& r : required) {
      if (!t.contains(field, r)) all_in = false;
    }
    rep.add(target, 202, all_in, all_in ? "" : "required seed element missing from target stage");
    if (!all_in) extra = false;
  }
  if (certified) *certified = rep.ok() && extra;
  return rep;
}

// ---------------------------------------------------------------------------
// specialize_to_K: replay the program with Seed -> tau, backtracking over
// HenselRoot branches, and certify unconditionally.

template <class F>
struct SpecializeOutcome {
  std::optional<StageSeq<F>> seq;
  VerificationReport last_report;
  uint64_t assignments_tried = 0;
};

template <class F>
SpecializeOutcome<F> specialize_to_K(F& field, const WitnessProgram& prog, const StageSeq<F>& base,
                                     size_t target, const typename F::Value& tau, const ForgeBudget& budget) {
  SpecializeOutcome<F> out;
  if (field.is_zero(tau)) return out;  // seed must be nonzero

  // DFS over branch choices at HenselRoot nodes, in node order.  Between
  // assignments only the suffix from the first changed node is
  // re-evaluated; the value prefix is reused.
  std::vector<uint32_t> hensel_ids;
  std::vector<uint32_t> hensel_ord_before(prog.nodes.size() + 1, 0);
  for (uint32_t id = 0; id < prog.nodes.size(); ++id) {
    hensel_ord_before[id] = static_cast<uint32_t>(hensel_ids.size());
    if (prog.nodes[id].kind == WitnessNode::Kind::HenselRoot) hensel_ids.push_back(id);
  }
  hensel_ord_before[prog.nodes.size()] = static_cast<uint32_t>(hensel_ids.size());
  std::vector<uint32_t> choice(hensel_ids.size(), 0);
  const uint64_t max_assignments =
      budget.branch_per_node * std::max<uint64_t>(1, hensel_ids.size());

  // hensel ordinals in each node's dependency cone, ascending; failures
  // backjump to the deepest choice the failing node actually depends on
  std::vector<std::vector<uint32_t>> cone(prog.nodes.size());
  {
    auto merge_into = [](std::vector<uint32_t>& dst, const std::vector<uint32_t>& src) {
      std::vector<uint32_t> merged;
      merged.reserve(dst.size() + src.size());
      std::set_union(dst.begin(), dst.end(), src.begin(), src.end(), std::back_inserter(merged));
      dst = std::move(merged);
    };
    for (uint32_t id = 0; id < prog.nodes.size(); ++id) {
      const WitnessNode& n = prog.nodes[id];
      switch (n.kind) {
        case WitnessNode::Kind::Add:
        case WitnessNode::Kind::Sub:
        case WitnessNode::Kind::Mul:
          cone[id] = cone[n.a];
          merge_into(cone[id], cone[n.b]);
          break;
        case WitnessNode::Kind::InvOnePlus:
          cone[id] = cone[n.a];
          break;
        case WitnessNode::Kind::HenselRoot:
          for (uint32_t cid : n.coeffs) merge_into(cone[id], cone[cid]);
          cone[id].push_back(hensel_ord_before[id]);  // own ordinal, largest so far
          break;
        default:
          break;
      }
    }
  }

  auto candidate_order = [&](const WitnessNode& n, const std::vector<typename F::Value>& cs)
      -> std::vector<typename F::Value> {
    std::vector<typename F::Value> simple = simple_roots_sorted(field, n.degree, cs);
    std::vector<typename F::Value> order;
    if (n.branch < simple.size()) order.push_back(simple[n.branch]);
    for (uint32_t r = 0; r < simple.size(); ++r) {
      if (r != n.branch) order.push_back(simple[r]);
    }
    return order;
  };

  std::vector<typename F::Value> values(prog.nodes.size(), field.zero());
  uint32_t restart_node = 0;

  while (out.assignments_tried < max_assignments) {
    ++out.assignments_tried;
    uint32_t hensel_cursor = hensel_ord_before[restart_node];
    bool failed = false;
    bool exhausted_at = false;
    uint32_t fail_cursor = 0;
    uint32_t fail_node = 0;
    for (uint32_t id = restart_node; id < prog.nodes.size() && !failed; ++id) {
      const WitnessNode& n = prog.nodes[id];
      switch (n.kind) {
        case WitnessNode::Kind::Const:
          values[id] = ring_decode_const(field, n.const_repr);
          break;
        case WitnessNode::Kind::Seed:
          values[id] = tau;
          break;
        case WitnessNode::Kind::Add:
          values[id] = field.add(values[n.a], values[n.b]);
          break;
        case WitnessNode::Kind::Sub:
          values[id] = field.sub(values[n.a], values[n.b]);
          break;
        case WitnessNode::Kind::Mul:
          values[id] = field.mul(values[n.a], values[n.b]);
          break;
        case WitnessNode::Kind::InvOnePlus: {
          auto v = opt_inv_one_plus(field, values[n.a]);
          if (!v) {
            failed = true;
            fail_cursor = hensel_cursor;
            fail_node = id;
            break;
          }
          values[id] = *v;
          break;
        }
        case WitnessNode::Kind::HenselRoot: {
          const uint32_t k = hensel_cursor++;
          std::vector<typename F::Value> cs;
          cs.reserve(n.coeffs.size());
          for (uint32_t cid : n.coeffs) cs.push_back(values[cid]);
          auto order = candidate_order(n, cs);
          if (choice[k] >= order.size()) {
            failed = true;
            exhausted_at = true;
            fail_cursor = k;
            fail_node = id;
            break;
          }
          values[id] = order[choice[k]];
          break;
        }
      }
    }
    if (!failed) {
      // tower growth during evaluation leaves stale prefixes; lift lazily
      StageSeq<F> cand;
      cand.stages.resize(prog.stage_nodes.size());
      for (size_t i = 0; i < prog.stage_nodes.size(); ++i) {
        for (uint32_t nid : prog.stage_nodes[i]) cand.stages[i].insert(field, values[nid]);
        if (cand.stages[i].size() > budget.max_stage_field)
          throw StageSizeExceeded("field stage exceeded " + std::to_string(budget.max_stage_field));
      }
      bool certified = false;
      out.last_report = certify_extension(field, base, cand, target, {}, &certified);
      if (certified) {
        out.seq = std::move(cand);
        return out;
      }
    }
    // backjump: advance the deepest choice the failure depends on (after a
    // certification miss, the deepest choice overall)
    std::vector<uint32_t> conflicts;
    if (failed) {
      conflicts = cone[fail_node];
      if (exhausted_at && !conflicts.empty() && conflicts.back() == fail_cursor) conflicts.pop_back();
    } else {
      conflicts.resize(hensel_ids.size());
      for (uint32_t k = 0; k < conflicts.size(); ++k) conflicts[k] = k;
    }
    bool advanced = false;
    for (size_t ci = conflicts.size(); ci-- > 0;) {
      const uint32_t k = conflicts[ci];
      ++choice[k];
      // no node offers more than degree-many roots
      if (choice[k] <= prog.nodes[hensel_ids[k]].degree) {
        for (uint32_t j = k + 1; j < choice.size(); ++j) choice[j] = 0;
        advanced = true;
        restart_node = hensel_ids[k];
        break;
      }
      choice[k] = 0;
    }
    if (!advanced) break;
  }
  return out;
}

}  // namespace topoforge

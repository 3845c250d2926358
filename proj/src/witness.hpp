#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conditions.hpp"
#include "poly.hpp"
#include "series.hpp"

namespace topoforge {

// A straight-line construction record.  Evaluating over the series ring
// with Seed -> t reproduces the recorded stages; evaluating over the field
// with Seed -> tau realizes the same quantifier-free construction in K,
// with per-node root-branch backtracking at HenselRoot nodes.
struct WitnessNode {
  enum class Kind : uint8_t { Const, Seed, Add, Sub, Mul, InvOnePlus, HenselRoot };
  Kind kind = Kind::Const;
  uint32_t a = 0, b = 0;           // operand node ids
  std::string const_repr;          // Const: canonical element encoding
  uint32_t degree = 0;             // HenselRoot: n
  std::vector<uint32_t> coeffs;    // HenselRoot: node ids of c_0..c_(n-2)
  uint32_t branch = 0;             // HenselRoot: index into the canonical simple-root list
};

struct WitnessProgram {
  std::vector<WitnessNode> nodes;
  // stage index -> node ids whose values form the stage set
  std::vector<std::vector<uint32_t>> stage_nodes;

  uint32_t push(WitnessNode n) {
    nodes.push_back(std::move(n));
    return static_cast<uint32_t>(nodes.size() - 1);
  }
  uint32_t push_const(const std::string& repr) {
    WitnessNode n;
    n.kind = WitnessNode::Kind::Const;
    n.const_repr = repr;
    return push(n);
  }
  uint32_t push_op(WitnessNode::Kind k, uint32_t a, uint32_t b = 0) {
    WitnessNode n;
    n.kind = k;
    n.a = a;
    n.b = b;
    return push(n);
  }
  size_t hensel_count() const {
    size_t c = 0;
    for (const auto& n : nodes)
      if (n.kind == WitnessNode::Kind::HenselRoot) ++c;
    return c;
  }
};

template <class F>
  requires requires(F f, const std::string& s) { f.decode(s); }
typename F::Value ring_decode_const(F& ring, const std::string& repr) {
  return ring.decode(repr);
}

template <class F>
typename SeriesRing<F>::Value ring_decode_const(SeriesRing<F>& ring, const std::string& repr) {
  return ring.from_const(ring.field().decode(repr));
}

// Evaluation outcome for one pass over the program.
template <class R>
struct EvalResult {
  bool ok = false;
  uint32_t fail_node = 0;
  std::string reason;
  std::vector<typename R::Value> values;
};

// resolve(node_id, node, coeff_values) returns the chosen root or nothing.
template <class R>
EvalResult<R> eval_program(R& ring, const WitnessProgram& prog, const typename R::Value& seed,
                           const std::function<std::optional<typename R::Value>(
                               uint32_t, const WitnessNode&, const std::vector<typename R::Value>&)>& resolve) {
  EvalResult<R> res;
  res.values.reserve(prog.nodes.size());
  for (uint32_t id = 0; id < prog.nodes.size(); ++id) {
    const WitnessNode& n = prog.nodes[id];
    switch (n.kind) {
      case WitnessNode::Kind::Const:
        res.values.push_back(ring_decode_const(ring, n.const_repr));
        break;
      case WitnessNode::Kind::Seed:
        res.values.push_back(seed);
        break;
      case WitnessNode::Kind::Add:
        res.values.push_back(ring.add(res.values[n.a], res.values[n.b]));
        break;
      case WitnessNode::Kind::Sub:
        res.values.push_back(ring.sub(res.values[n.a], res.values[n.b]));
        break;
      case WitnessNode::Kind::Mul:
        res.values.push_back(ring.mul(res.values[n.a], res.values[n.b]));
        break;
      case WitnessNode::Kind::InvOnePlus: {
        auto v = opt_inv_one_plus(ring, res.values[n.a]);
        if (!v) {
          res.fail_node = id;
          res.reason = "1+x not a unit at node " + std::to_string(id);
          return res;
        }
        res.values.push_back(*v);
        break;
      }
      case WitnessNode::Kind::HenselRoot: {
        std::vector<typename R::Value> cs;
        cs.reserve(n.coeffs.size());
        for (uint32_t cid : n.coeffs) cs.push_back(res.values[cid]);
        auto v = resolve(id, n, cs);
        if (!v) {
          res.fail_node = id;
          res.reason = "no admissible root at node " + std::to_string(id);
          return res;
        }
        res.values.push_back(*v);
        break;
      }
    }
  }
  res.ok = true;
  return res;
}

// Canonical list of simple roots of the monic tail polynomial, used both
// when recording branches over R and when retrying them over K.
template <class F>
std::vector<typename F::Value> simple_roots_sorted(F& field, uint32_t n,
                                                   const std::vector<typename F::Value>& tuple) {
  auto f = monic_tail_poly(field, n, tuple);
  bool complete = true;
  auto rs = field.roots(f, &complete);
  std::vector<typename F::Value> out;
  for (const auto& rm : rs) {
    if (rm.mult == 1) out.push_back(rm.root);
  }
  return out;
}

}  // namespace topoforge

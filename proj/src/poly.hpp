#pragma once

#include <cstdint>
#include <vector>

namespace topoforge {

// Dense univariate polynomials over any ring R exposing the usual value
// interface (zero/one/add/sub/mul/neg/eq/is_zero/from_small).  Coefficient
// index = power of X; vectors are kept normalized, empty = zero.

template <class R>
using PolyOf = std::vector<typename R::Value>;

template <class R>
void poly_normalize(const R& ring, PolyOf<R>& f) {
  while (!f.empty() && ring.is_zero(f.back())) f.pop_back();
}

template <class R>
int poly_deg(const PolyOf<R>& f) {
  return static_cast<int>(f.size()) - 1;
}

template <class R>
typename R::Value poly_eval(const R& ring, const PolyOf<R>& f, const typename R::Value& x) {
  typename R::Value acc = ring.zero();
  for (size_t i = f.size(); i-- > 0;) {
    acc = ring.add(ring.mul(acc, x), f[i]);
  }
  return acc;
}

template <class R>
PolyOf<R> poly_derivative(const R& ring, const PolyOf<R>& f) {
  PolyOf<R> r;
  for (size_t i = 1; i < f.size(); ++i) {
    r.push_back(ring.mul(f[i], ring.from_small(static_cast<int64_t>(i))));
  }
  poly_normalize(ring, r);
  return r;
}

template <class R>
PolyOf<R> poly_mul(const R& ring, const PolyOf<R>& a, const PolyOf<R>& b) {
  if (a.empty() || b.empty()) return {};
  PolyOf<R> r(a.size() + b.size() - 1, ring.zero());
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      r[i + j] = ring.add(r[i + j], ring.mul(a[i], b[j]));
    }
  }
  poly_normalize(ring, r);
  return r;
}

// The clause-7 family: X^n + X^(n-1) + c_(n-2) X^(n-2) + ... + c_1 X + c_0.
template <class R>
PolyOf<R> monic_tail_poly(const R& ring, uint32_t n, const std::vector<typename R::Value>& low) {
  PolyOf<R> f(n + 1, ring.zero());
  for (size_t k = 0; k < low.size(); ++k) f[k] = low[k];
  f[n - 1] = ring.add(f[n - 1], ring.one());
  f[n] = ring.one();
  return f;
}

}  // namespace topoforge

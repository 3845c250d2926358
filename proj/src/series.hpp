#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "poly.hpp"

namespace topoforge {

// K[[t]] truncated at precision N: the henselian local ring the
// construction extends into.  Coefficient index = power of t.  All
// arithmetic is exact modulo t^N; the residue map is evaluation at t = 0.
//
// Values are plain coefficient vectors of length N over the base field;
// the ring object carries the field reference and the precision.
template <class F>
class SeriesRing {
 public:
  struct Series {
    std::vector<typename F::Elem> c;  // length = precision N
  };
  using Value = Series;

  SeriesRing(F& field, uint32_t precision) : f_(field), n_(precision) {
    if (precision == 0) throw std::invalid_argument("SeriesRing: precision must be positive");
  }

  F& field() const { return f_; }
  uint32_t precision() const { return n_; }
  uint64_t version() const { return f_.version(); }

  Series zero() const {
    Series s;
    s.c.assign(n_, f_.zero());
    return s;
  }
  Series one() const { return from_const(f_.one()); }
  Series minus_one() const { return from_const(f_.minus_one()); }
  Series from_small(int64_t v) const { return from_const(f_.from_small(v)); }
  Series from_const(const typename F::Elem& a) const {
    Series s = zero();
    s.c[0] = a;
    return s;
  }
  Series seed() const {  // the element t
    Series s = zero();
    if (n_ < 2) throw std::logic_error("SeriesRing: seed needs precision >= 2");
    s.c[1] = f_.one();
    return s;
  }

  typename F::Elem residue(const Series& s) const { return s.c[0]; }
  bool in_maximal_ideal(const Series& s) const { return f_.is_zero(s.c[0]); }

  Series add(const Series& a, const Series& b) const {
    check(a);
    check(b);
    Series r = zero();
    for (uint32_t k = 0; k < n_; ++k) r.c[k] = f_.add(a.c[k], b.c[k]);
    return r;
  }
  Series sub(const Series& a, const Series& b) const {
    check(a);
    check(b);
    Series r = zero();
    for (uint32_t k = 0; k < n_; ++k) r.c[k] = f_.sub(a.c[k], b.c[k]);
    return r;
  }
  Series mul(const Series& a, const Series& b) const {
    check(a);
    check(b);
    Series r = zero();
    for (uint32_t i = 0; i < n_; ++i) {
      if (f_.is_zero(a.c[i])) continue;
      for (uint32_t j = 0; i + j < n_; ++j) {
        r.c[i + j] = f_.add(r.c[i + j], f_.mul(a.c[i], b.c[j]));
      }
    }
    return r;
  }
  Series neg(const Series& a) const {
    check(a);
    Series r = zero();
    for (uint32_t k = 0; k < n_; ++k) r.c[k] = f_.neg(a.c[k]);
    return r;
  }
  bool eq(const Series& a, const Series& b) const {
    check(a);
    check(b);
    for (uint32_t k = 0; k < n_; ++k) {
      if (!f_.eq(a.c[k], b.c[k])) return false;
    }
    return true;
  }
  bool is_zero(const Series& a) const {
    check(a);
    for (const auto& c : a.c) {
      if (!f_.is_zero(c)) return false;
    }
    return true;
  }
  bool is_minus_one(const Series& a) const { return eq(a, minus_one()); }

  // Inverse of an arbitrary unit (nonzero residue).
  Series inv_unit(const Series& u) const {
    check(u);
    if (f_.is_zero(u.c[0])) throw std::domain_error("SeriesRing: inverse of a non-unit");
    // w with u*w = 1: solve coefficients by forward substitution
    Series w = zero();
    const typename F::Elem u0i = f_.inv(u.c[0]);
    w.c[0] = u0i;
    for (uint32_t k = 1; k < n_; ++k) {
      typename F::Elem acc = f_.zero();
      for (uint32_t j = 1; j <= k; ++j) acc = f_.add(acc, f_.mul(u.c[j], w.c[k - j]));
      w.c[k] = f_.neg(f_.mul(acc, u0i));
    }
    return w;
  }

  // (1+s)^(-1) - 1; precondition res(s) != -1, otherwise a domain error is
  // thrown (the caller must have checked the corresponding guard).
  Series inv_one_plus(const Series& s) const {
    check(s);
    if (f_.is_minus_one(s.c[0]))
      throw std::domain_error("SeriesRing: 1+s is not a unit (residue -1)");
    return sub(inv_unit(add(one(), s)), one());
  }

  // Lifts a simple residue root rho of the reduction of f to a root of f
  // mod t^N by Newton iteration with quadratic precision doubling.
  // Preconditions: fbar(rho) = 0 and fbar'(rho) != 0.
  Series hensel_lift_simple_root(const std::vector<Series>& f, const typename F::Elem& rho) const {
    std::vector<typename F::Elem> fbar, fbar_d;
    for (const Series& c : f) fbar.push_back(residue(c));
    {
      // reduce and check the residue polynomial at rho
      typename F::Elem v = f_.zero();
      for (size_t i = fbar.size(); i-- > 0;) v = f_.add(f_.mul(v, rho), fbar[i]);
      if (!f_.is_zero(v)) throw std::domain_error("hensel: rho is not a residue root");
    }
    {
      typename F::Elem v = f_.zero();
      for (size_t i = fbar.size(); i-- > 1;) {
        typename F::Elem ci = f_.mul(fbar[i], f_.from_small(static_cast<int64_t>(i)));
        v = f_.add(f_.mul(v, rho), ci);
      }
      if (f_.is_zero(v)) throw std::domain_error("hensel: residue root is not simple");
    }
    Series r = from_const(rho);
    // each Newton step doubles the valuation of f(r); ceil(log2 N) steps
    uint32_t steps = 0;
    for (uint32_t reach = 1; reach < n_; reach *= 2) ++steps;
    for (uint32_t s = 0; s < steps; ++s) {
      Series fr = poly_eval(*this, f, r);
      std::vector<Series> fd = poly_derivative(*this, f);
      Series dfr = poly_eval(*this, fd, r);
      r = sub(r, mul(fr, inv_unit(dfr)));
    }
    return r;
  }

  void up(Series& s) const {
    for (auto& c : s.c) f_.up(c);
  }
  Series lifted(Series s) const {
    up(s);
    return s;
  }

  std::vector<uint8_t> key(const Series& s) const {
    std::vector<uint8_t> k;
    for (const auto& c : s.c) {
      std::vector<uint8_t> ck = f_.key(c);
      k.push_back(static_cast<uint8_t>(ck.size() & 0xff));
      k.insert(k.end(), ck.begin(), ck.end());
    }
    return k;
  }

  bool less(const Series& a, const Series& b) const {
    for (uint32_t k = 0; k < n_; ++k) {
      if (!f_.eq(a.c[k], b.c[k])) return f_.less(a.c[k], b.c[k]);
    }
    return false;
  }

  std::string encode(const Series& s) const {
    std::string out = "N:" + std::to_string(n_) + ";coeffs:[";
    for (uint32_t k = 0; k < n_; ++k) {
      if (k) out += ",";
      out += f_.encode(s.c[k]);
    }
    out += "]";
    return out;
  }

  // re-truncate a series from another precision
  Series to_precision(const Series& s) const {
    Series r = zero();
    for (uint32_t k = 0; k < n_ && k < s.c.size(); ++k) r.c[k] = s.c[k];
    return r;
  }

 private:
  void check(const Series& s) const {
    if (s.c.size() != n_) throw std::invalid_argument("SeriesRing: precision mismatch");
  }

  F& f_;
  uint32_t n_;
};

}  // namespace topoforge

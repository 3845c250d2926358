#include "fp.hpp"

#include <algorithm>
#include <numeric>

namespace topoforge {

FpCtx::FpCtx(uint32_t p) : p_(p) {
  if (p < 2 || p > 251) throw std::invalid_argument("FpCtx: prime out of range");
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("FpCtx: modulus not prime");
  inv_table_.assign(p, 0);
  for (uint32_t a = 1; a < p; ++a) {
    for (uint32_t b = 1; b < p; ++b) {
      if ((a * b) % p == 1) {
        inv_table_[a] = static_cast<uint8_t>(b);
        break;
      }
    }
  }
}

uint8_t FpCtx::inv(uint8_t a) const {
  if (a == 0) throw std::domain_error("FpCtx::inv: division by zero");
  return inv_table_[a];
}

void fp_poly_normalize(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int fp_poly_deg(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

FpPoly fp_poly_add(const FpCtx& F, const FpPoly& a, const FpPoly& b) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    uint8_t x = i < a.size() ? a[i] : 0;
    uint8_t y = i < b.size() ? b[i] : 0;
    r[i] = F.add(x, y);
  }
  fp_poly_normalize(r);
  return r;
}

FpPoly fp_poly_sub(const FpCtx& F, const FpPoly& a, const FpPoly& b) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    uint8_t x = i < a.size() ? a[i] : 0;
    uint8_t y = i < b.size() ? b[i] : 0;
    r[i] = F.sub(x, y);
  }
  fp_poly_normalize(r);
  return r;
}

FpPoly fp_poly_mul(const FpCtx& F, const FpPoly& a, const FpPoly& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] += uint32_t(a[i]) * b[j];
  }
  FpPoly r(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<uint8_t>(acc[i] % F.p());
  fp_poly_normalize(r);
  return r;
}

FpPoly fp_poly_rem(const FpCtx& F, FpPoly a, const FpPoly& b) {
  if (b.empty()) throw std::domain_error("fp_poly_rem: division by zero polynomial");
  const int db = fp_poly_deg(b);
  const uint8_t lead_inv = F.inv(b.back());
  while (fp_poly_deg(a) >= db) {
    const int da = fp_poly_deg(a);
    const uint8_t q = F.mul(a.back(), lead_inv);
    for (int i = 0; i <= db; ++i) {
      a[da - db + i] = F.sub(a[da - db + i], F.mul(q, b[i]));
    }
    fp_poly_normalize(a);
  }
  return a;
}

FpPoly fp_poly_gcd(const FpCtx& F, FpPoly a, FpPoly b) {
  while (!b.empty()) {
    FpPoly r = fp_poly_rem(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    const uint8_t s = F.inv(a.back());
    for (auto& c : a) c = F.mul(c, s);
  }
  return a;
}

FpPoly fp_poly_deriv(const FpCtx& F, const FpPoly& f) {
  FpPoly r;
  for (size_t i = 1; i < f.size(); ++i) {
    r.push_back(F.mul(f[i], static_cast<uint8_t>(i % F.p())));
  }
  fp_poly_normalize(r);
  return r;
}

static FpPoly fp_poly_pow_mod(const FpCtx& F, FpPoly base, uint64_t e, const FpPoly& mod) {
  FpPoly r = {1};
  base = fp_poly_rem(F, std::move(base), mod);
  while (e > 0) {
    if (e & 1) r = fp_poly_rem(F, fp_poly_mul(F, r, base), mod);
    base = fp_poly_rem(F, fp_poly_mul(F, base, base), mod);
    e >>= 1;
  }
  return r;
}

FpPoly fp_poly_frobenius_power(const FpCtx& F, const FpPoly& f, uint32_t k) {
  FpPoly x = fp_poly_rem(F, FpPoly{0, 1}, f);
  for (uint32_t i = 0; i < k; ++i) x = fp_poly_pow_mod(F, x, F.p(), f);
  return x;
}

bool fp_poly_is_irreducible(const FpCtx& F, const FpPoly& f) {
  // Rabin's test: X^(p^d) == X mod f, and gcd(X^(p^(d/q)) - X, f) = 1
  // for every prime q dividing d.
  const int d = fp_poly_deg(f);
  if (d <= 0) return false;
  if (d == 1) return true;
  FpPoly xq = fp_poly_frobenius_power(F, f, static_cast<uint32_t>(d));
  FpPoly x = fp_poly_rem(F, FpPoly{0, 1}, f);
  if (fp_poly_sub(F, xq, x) != FpPoly{}) return false;
  uint32_t rem = static_cast<uint32_t>(d);
  std::vector<uint32_t> prime_divs;
  for (uint32_t q = 2; q * q <= rem; ++q) {
    if (rem % q == 0) {
      prime_divs.push_back(q);
      while (rem % q == 0) rem /= q;
    }
  }
  if (rem > 1) prime_divs.push_back(rem);
  for (uint32_t q : prime_divs) {
    FpPoly xe = fp_poly_frobenius_power(F, f, static_cast<uint32_t>(d) / q);
    FpPoly g = fp_poly_gcd(F, fp_poly_sub(F, xe, x), f);
    if (fp_poly_deg(g) != 0) return false;
  }
  return true;
}

FpPoly lex_least_irreducible(const FpCtx& F, uint32_t d) {
  if (d == 0) throw std::invalid_argument("lex_least_irreducible: degree 0");
  if (d == 1) return FpPoly{0, 1};  // X
  // Candidates are monic; rank the d low coefficients as a base-p number
  // with the X^(d-1) coefficient most significant.
  const uint64_t p = F.p();
  uint64_t count = 1;
  for (uint32_t i = 0; i < d && count <= (uint64_t(1) << 22); ++i) count *= p;
  // The first irreducible in this ordering always has tiny low
  // coefficients, so a bounded window suffices at any degree.
  if (count > (uint64_t(1) << 22)) count = uint64_t(1) << 22;
  for (uint64_t v = 0; v < count; ++v) {
    FpPoly f(d + 1, 0);
    f[d] = 1;
    uint64_t t = v;
    for (uint32_t i = 0; i < d; ++i) {
      f[i] = static_cast<uint8_t>(t % p);
      t /= p;
    }
    if (fp_poly_is_irreducible(F, f)) return f;
  }
  throw std::runtime_error("lex_least_irreducible: none found");
}

std::string fp_poly_to_string(const FpPoly& f) {
  if (f.empty()) return "0";
  std::string s;
  for (int i = fp_poly_deg(f); i >= 0; --i) {
    if (f[i] == 0) continue;
    if (!s.empty()) s += " + ";
    if (i == 0 || f[i] != 1) s += std::to_string(int(f[i]));
    if (i > 0) {
      s += "X";
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace topoforge

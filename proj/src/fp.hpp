#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace topoforge {

// Arithmetic mod a small prime p (p < 256), plus dense univariate
// polynomials over F_p.  Coefficient vectors store c[k] = coefficient
// of X^k and are kept normalized (no trailing zeros, empty = zero).

class FpCtx {
 public:
  explicit FpCtx(uint32_t p);

  uint32_t p() const { return p_; }

  uint8_t add(uint8_t a, uint8_t b) const { return norm_(a + b); }
  uint8_t sub(uint8_t a, uint8_t b) const { return norm_(a + p_ - b); }
  uint8_t mul(uint8_t a, uint8_t b) const {
    return static_cast<uint8_t>((uint32_t(a) * b) % p_);
  }
  uint8_t neg(uint8_t a) const { return a == 0 ? 0 : static_cast<uint8_t>(p_ - a); }
  uint8_t inv(uint8_t a) const;

 private:
  uint8_t norm_(uint32_t v) const { return static_cast<uint8_t>(v >= p_ ? v - p_ : v); }

  uint32_t p_;
  std::vector<uint8_t> inv_table_;
};

using FpPoly = std::vector<uint8_t>;  // c[k] = coeff of X^k, normalized

void fp_poly_normalize(FpPoly& f);
int fp_poly_deg(const FpPoly& f);  // -1 for zero
FpPoly fp_poly_add(const FpCtx& F, const FpPoly& a, const FpPoly& b);
FpPoly fp_poly_sub(const FpCtx& F, const FpPoly& a, const FpPoly& b);
FpPoly fp_poly_mul(const FpCtx& F, const FpPoly& a, const FpPoly& b);
// Remainder of a mod b; b must be nonzero.
FpPoly fp_poly_rem(const FpCtx& F, FpPoly a, const FpPoly& b);
FpPoly fp_poly_gcd(const FpCtx& F, FpPoly a, FpPoly b);  // monic gcd
FpPoly fp_poly_deriv(const FpCtx& F, const FpPoly& f);
// X^(p^k) mod f, via repeated p-th powers.
FpPoly fp_poly_frobenius_power(const FpCtx& F, const FpPoly& f, uint32_t k);
bool fp_poly_is_irreducible(const FpCtx& F, const FpPoly& f);

// The lexicographically least monic irreducible of degree d over F_p,
// ranking candidates by the non-leading coefficient vector read as a
// base-p number with the X^(d-1) coefficient most significant.
FpPoly lex_least_irreducible(const FpCtx& F, uint32_t d);

std::string fp_poly_to_string(const FpPoly& f);

}  // namespace topoforge

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fp.hpp"

namespace topoforge {

// The algebraic closure of F_p, realized as a single growing compound
// field F_{p^D}.  D grows by lcm whenever an element of a new home degree
// is materialized or a polynomial needs roots in a larger extension.
// Elements carry the version of the compound they were written in and are
// lifted transparently when the tower has grown since.
//
// Canonical form of an element is (home degree d, coefficients over the
// power basis of g_d), where d is minimal and g_d is a fixed root of the
// lexicographically least monic irreducible of degree d over F_p.
class PrimeClosure {
 public:
  struct Elem {
    uint64_t ver = 0;
    std::vector<uint8_t> c;
  };

  struct Canon {
    uint32_t deg = 1;
    std::vector<uint8_t> c;  // length deg

    bool operator==(const Canon& o) const { return deg == o.deg && c == o.c; }
    bool operator<(const Canon& o) const;
  };

  struct RootMult {
    Elem root;
    uint32_t mult;
  };

  using Value = Elem;

  explicit PrimeClosure(uint32_t p);

  uint32_t p() const { return fp_.p(); }
  uint32_t compound_degree() const { return deg_; }
  uint64_t version() const { return version_; }
  bool has_char(uint32_t q) const { return fp_.p() == q; }

  // -- ring / field operations ------------------------------------------
  Elem zero() const;
  Elem one() const;
  Elem minus_one() const;
  Elem from_small(int64_t v) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem inv(const Elem& a) const;  // throws on zero
  bool eq(const Elem& a, const Elem& b) const;
  bool is_zero(const Elem& a) const;
  bool is_one(const Elem& a) const;
  bool is_minus_one(const Elem& a) const { return eq(a, minus_one()); }

  // Brings an element up to the current compound representation.
  void up(Elem& e) const;
  Elem lifted(Elem e) const {
    up(e);
    return e;
  }

  // Hash/equality key at the current version (coords, little endian).
  std::vector<uint8_t> key(const Elem& e) const;

  // -- canonical form and ordering --------------------------------------
  Canon canon(const Elem& e) const;
  Elem from_canon(const Canon& c);  // may grow the tower
  bool less(const Elem& a, const Elem& b) const;  // canonical order

  std::string encode(const Elem& e) const;  // "p:<p>;d:<d>;c:[...]"
  Elem decode(const std::string& s);

  // -- enumeration -------------------------------------------------------
  // Bijective enumeration of the closure: degrees ascending, elements of
  // minimal degree d ordered by coefficient vector value (g_d^(d-1) digit
  // most significant).  enumerate(0) = 0, enumerate(1) = 1.
  Canon enumerate_canon(uint64_t index) const;
  Elem enumerate(uint64_t index);

  // -- roots --------------------------------------------------------------
  // All roots of f in the closure with multiplicities (grows the tower as
  // needed), sorted canonically.  complete is always true here.
  std::vector<RootMult> roots(const std::vector<Elem>& poly, bool* complete = nullptr);
  static constexpr bool roots_always_complete = true;

  // -- descriptor ----------------------------------------------------------
  // Defining polynomials, compound modulus and generator images; enough
  // for an independent process to reproduce this coordinate system.
  std::map<uint32_t, FpPoly> defining_table() const { return defining_; }
  std::map<uint32_t, std::vector<uint8_t>> generator_images() const;
  void adopt_descriptor(uint32_t compound_deg,
                        const std::map<uint32_t, FpPoly>& defining,
                        const std::map<uint32_t, std::vector<uint8_t>>& gen_images);

  void grow_to_degree_multiple(uint32_t d);

 private:
  using Vec = std::vector<uint8_t>;  // raw coords, length deg_

  // raw compound arithmetic
  Vec rzero() const { return Vec(deg_, 0); }
  Vec radd(const Vec& a, const Vec& b) const;
  Vec rsub(const Vec& a, const Vec& b) const;
  Vec rneg(const Vec& a) const;
  Vec rmul(const Vec& a, const Vec& b) const;
  Vec rinv(const Vec& a) const;
  Vec rpow(Vec a, uint64_t e) const;
  bool riszero(const Vec& a) const;
  Vec rfrob(const Vec& a) const;        // x -> x^p
  Vec rfrob_k(Vec a, uint32_t k) const; // x -> x^(p^k)
  static bool vec_value_less(const Vec& a, const Vec& b);

  // polynomial helpers over raw coords (coefficient index = power of X)
  using RPoly = std::vector<Vec>;
  void rp_normalize(RPoly& f) const;
  RPoly rp_mul(const RPoly& a, const RPoly& b) const;
  RPoly rp_rem(RPoly a, const RPoly& b) const;
  RPoly rp_divexact(const RPoly& a, const RPoly& b) const;
  RPoly rp_gcd(RPoly a, RPoly b) const;
  RPoly rp_deriv(const RPoly& f) const;
  Vec rp_eval(const RPoly& f, const Vec& x) const;
  RPoly rp_monic(RPoly f) const;
  RPoly rp_pow_mod(RPoly base, const std::vector<bool>& ebits, const RPoly& mod) const;
  RPoly rp_xq_mod(const RPoly& mod) const;  // X^(p^D) mod `mod`

  // distinct in-field roots of a squarefree monic polynomial that splits
  // over the current compound
  std::vector<Vec> split_linear(RPoly h) const;
  // y with y^2 + y = c over F_{2^D}; empty when Tr(c) = 1
  std::optional<Vec> artin_schreier(const Vec& c) const;
  std::vector<Vec> roots_in_field(const RPoly& f) const;
  // distinct roots over the closure; returns the lcm of extension degrees
  // still needed (1 when done)
  uint32_t distinct_roots_step(RPoly f, std::vector<Vec>& out) const;
  RPoly rp_pth_root(const RPoly& f) const;

  const FpPoly& defining_poly(uint32_t d);
  Vec gen_image(uint32_t d);
  void ensure_frobenius() const;
  void grow_to(uint32_t new_deg);

  uint32_t min_subfield_degree(const Vec& x) const;
  Vec coords_in_subfield(const Vec& x, uint32_t d, bool* ok);

  FpCtx fp_;
  uint32_t deg_ = 1;
  FpPoly modulus_;                       // f_D, degree deg_
  std::map<uint32_t, FpPoly> defining_;  // d -> lex-least irreducible
  std::map<uint32_t, Vec> gen_image_;    // d -> coords of g_d in compound
  uint64_t version_ = 0;
  struct GrowthEvent {
    uint32_t old_deg;
    std::vector<Vec> lift;  // old basis power k -> new coords
  };
  std::vector<GrowthEvent> events_;

  mutable std::vector<Vec> frob_cols_;  // cached Frobenius matrix columns
  mutable bool frob_valid_ = false;
  std::map<uint32_t, std::vector<Vec>> gen_powers_;  // d -> powers g_d^0..g_d^(d-1)
  mutable std::unordered_map<std::string, std::vector<std::pair<Canon, uint32_t>>> root_memo_;
};

}  // namespace topoforge

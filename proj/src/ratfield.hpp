#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bigint.hpp"

namespace topoforge {

// Exact rational arithmetic presented through the same oracle interface as
// the closure field.  This field is not algebraically closed, so root
// finding reports a completeness flag; it exists as a negative control for
// the construction, which must stall once an obligation demands an
// irrational root.
class RationalField {
 public:
  using Elem = Rat;
  using Value = Rat;

  struct Canon {
    std::string repr;
    bool operator==(const Canon& o) const { return repr == o.repr; }
    bool operator<(const Canon& o) const { return repr < o.repr; }
  };

  struct RootMult {
    Rat root;
    uint32_t mult;
  };

  RationalField() = default;

  uint32_t p() const { return 0; }
  uint64_t version() const { return 0; }

  Rat zero() const { return Rat(0); }
  Rat one() const { return Rat(1); }
  Rat minus_one() const { return Rat(-1); }
  Rat from_small(int64_t v) const { return Rat(v); }
  Rat add(const Rat& a, const Rat& b) const { return a + b; }
  Rat sub(const Rat& a, const Rat& b) const { return a - b; }
  Rat mul(const Rat& a, const Rat& b) const { return a * b; }
  Rat neg(const Rat& a) const { return -a; }
  Rat inv(const Rat& a) const { return one() / a; }
  bool eq(const Rat& a, const Rat& b) const { return a == b; }
  bool is_zero(const Rat& a) const { return a.is_zero(); }
  bool is_one(const Rat& a) const { return a == Rat(1); }
  bool is_minus_one(const Rat& a) const { return a == Rat(-1); }

  void up(Rat&) const {}
  Rat lifted(Rat a) const { return a; }
  std::vector<uint8_t> key(const Rat& a) const {
    std::string s = a.to_string();
    return std::vector<uint8_t>(s.begin(), s.end());
  }
  bool less(const Rat& a, const Rat& b) const { return a < b; }

  std::string encode(const Rat& a) const { return "p:0;d:1;c:[" + a.to_string() + "]"; }
  Rat decode(const std::string& s) const;

  // 0, then the Calkin-Wilf walk of the positive rationals interleaved
  // with its negatives: 0, 1, -1, 1/2, -1/2, 2, -2, ...
  Rat enumerate_canon(uint64_t index) const { return enumerate_value(index); }
  Rat enumerate(uint64_t index) { return enumerate_value(index); }

  // Rational roots only.  complete is true iff the multiplicities found
  // sum to deg f, i.e. f splits into linear factors over the rationals.
  std::vector<RootMult> roots(const std::vector<Rat>& poly, bool* complete = nullptr) const;
  static constexpr bool roots_always_complete = false;

 private:
  Rat enumerate_value(uint64_t index) const;
};

}  // namespace topoforge

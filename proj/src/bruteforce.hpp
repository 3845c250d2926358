#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fp.hpp"

namespace topoforge {

// The genuinely finite field F_p as a ring oracle: root search never
// leaves F_p, which is exactly what makes the impossibility argument an
// exhaustive theorem-grade check.
class FpRing {
 public:
  using Value = uint8_t;

  explicit FpRing(uint32_t p) : ctx_(p) {}

  uint32_t p() const { return ctx_.p(); }
  uint64_t version() const { return 0; }

  Value zero() const { return 0; }
  Value one() const { return 1; }
  Value minus_one() const { return ctx_.neg(1); }
  Value from_small(int64_t v) const {
    int64_t m = v % int64_t(ctx_.p());
    if (m < 0) m += ctx_.p();
    return static_cast<Value>(m);
  }
  Value add(Value a, Value b) const { return ctx_.add(a, b); }
  Value sub(Value a, Value b) const { return ctx_.sub(a, b); }
  Value mul(Value a, Value b) const { return ctx_.mul(a, b); }
  Value neg(Value a) const { return ctx_.neg(a); }
  Value inv(Value a) const { return ctx_.inv(a); }
  bool eq(Value a, Value b) const { return a == b; }
  bool is_zero(Value a) const { return a == 0; }
  bool is_minus_one(Value a) const { return a == minus_one(); }
  void up(Value&) const {}
  Value lifted(Value a) const { return a; }
  bool less(Value a, Value b) const { return a < b; }
  std::vector<uint8_t> key(Value a) const { return {a}; }
  std::string encode(Value a) const { return std::to_string(int(a)); }
  Value decode(const std::string& s) const { return static_cast<Value>(std::stoul(s) % ctx_.p()); }
  Value enumerate(uint64_t i) const { return static_cast<Value>(i % ctx_.p()); }

  struct RootMult {
    Value root;
    uint32_t mult;
  };
  std::vector<RootMult> roots(const std::vector<Value>& poly, bool* complete = nullptr) const;

 private:
  FpCtx ctx_;
};

struct SearchSpaceSpec {
  uint32_t p = 2;
  uint32_t max_len = 4;  // L
};

struct BruteForceResult {
  uint32_t p = 0;
  uint32_t max_len = 0;
  // largest k such that some suitable sequence (within length max_len,
  // {0} beyond) has A_k != {0}
  int64_t max_nondegenerate_depth = -1;
  std::vector<bool> stage_can_be_nonzero;  // index 0..max_len
  std::vector<std::vector<std::string>> witness;  // a deepest nondegenerate sequence
  uint64_t sequences_checked = 0;

  std::string to_json(bool pretty = false) const;
};

BruteForceResult brute_force_suitable_search(const SearchSpaceSpec& spec);

}  // namespace topoforge

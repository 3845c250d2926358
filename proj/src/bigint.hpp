#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace topoforge {

// Sign-magnitude arbitrary-precision integer, base 2^32.  Only what the
// rational control field needs: ring ops, divmod, gcd, square testing.
class BigInt {
 public:
  BigInt() = default;
  BigInt(int64_t v);

  static BigInt from_string(const std::string& s);
  std::string to_string() const;

  bool is_zero() const { return mag_.empty(); }
  bool is_negative() const { return neg_; }
  int signum() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator/(const BigInt& o) const;  // truncated toward zero
  BigInt operator%(const BigInt& o) const;

  bool operator==(const BigInt& o) const { return neg_ == o.neg_ && mag_ == o.mag_; }
  bool operator!=(const BigInt& o) const { return !(*this == o); }
  bool operator<(const BigInt& o) const;

  BigInt abs() const;
  static BigInt gcd(BigInt a, BigInt b);
  // Integer square root of a non-negative value (floor).
  static BigInt isqrt(const BigInt& v);
  bool is_perfect_square() const;
  bool fits_int64(int64_t* out) const;

 private:
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r);
  static void trim(std::vector<uint32_t>& v);
  void divmod(const BigInt& o, BigInt& q, BigInt& r) const;

  bool neg_ = false;
  std::vector<uint32_t> mag_;  // little-endian limbs, no leading zeros
};

// Normalized rational: den > 0, gcd(|num|, den) = 1.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(int64_t v) : num_(v), den_(1) {}
  Rat(BigInt num, BigInt den);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_ == BigInt(1); }

  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;  // throws on zero divisor
  Rat operator-() const;

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const;

  std::string to_string() const;  // "n" or "n/d"
  static Rat from_string(const std::string& s);

 private:
  BigInt num_;
  BigInt den_;
};

}  // namespace topoforge

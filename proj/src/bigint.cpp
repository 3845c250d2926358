#include "bigint.hpp"

#include <algorithm>
#include <stdexcept>

namespace topoforge {

BigInt::BigInt(int64_t v) {
  neg_ = v < 0;
  uint64_t m = neg_ ? (~static_cast<uint64_t>(v) + 1) : static_cast<uint64_t>(v);
  while (m > 0) {
    mag_.push_back(static_cast<uint32_t>(m & 0xffffffffu));
    m >>= 32;
  }
}

void BigInt::trim(std::vector<uint32_t>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r[i] = static_cast<uint32_t>(s);
    carry = s >> 32;
  }
  trim(r);
  return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  // requires a >= b
  std::vector<uint32_t> r = a;
  int64_t borrow = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    int64_t s = int64_t(r[i]) - borrow - (i < b.size() ? int64_t(b[i]) : 0);
    if (s < 0) {
      s += int64_t(1) << 32;
      borrow = 1;
    } else {
      borrow = 0;
    }
    r[i] = static_cast<uint32_t>(s);
  }
  trim(r);
  return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      uint64_t cur = uint64_t(r[i + j]) + uint64_t(a[i]) * b[j] + carry;
      r[i + j] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    size_t k = i + b.size();
    while (carry > 0) {
      uint64_t cur = uint64_t(r[k]) + carry;
      r[k] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
      ++k;
    }
  }
  trim(r);
  return r;
}

void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  if (b.empty()) throw std::domain_error("BigInt: division by zero");
  q.clear();
  r.clear();
  if (cmp_mag(a, b) < 0) {
    r = a;
    return;
  }
  // Bitwise long division; adequate at the scale the control field needs.
  const size_t bits = a.size() * 32;
  q.assign(a.size(), 0);
  for (size_t i = bits; i-- > 0;) {
    // r <<= 1
    uint32_t carry = 0;
    for (size_t k = 0; k < r.size(); ++k) {
      uint32_t nc = r[k] >> 31;
      r[k] = (r[k] << 1) | carry;
      carry = nc;
    }
    if (carry) r.push_back(carry);
    // r |= bit i of a
    if ((a[i / 32] >> (i % 32)) & 1u) {
      if (r.empty()) r.push_back(1);
      else r[0] |= 1u;
    }
    if (cmp_mag(r, b) >= 0) {
      r = sub_mag(r, b);
      q[i / 32] |= (uint32_t(1) << (i % 32));
    }
  }
  trim(q);
  trim(r);
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  if (!r.is_zero()) r.neg_ = !r.neg_;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  if (neg_ == o.neg_) {
    r.mag_ = add_mag(mag_, o.mag_);
    r.neg_ = neg_;
  } else {
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.mag_ = sub_mag(mag_, o.mag_);
      r.neg_ = neg_;
    } else {
      r.mag_ = sub_mag(o.mag_, mag_);
      r.neg_ = o.neg_;
    }
  }
  if (r.mag_.empty()) r.neg_ = false;
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  BigInt r;
  r.mag_ = mul_mag(mag_, o.mag_);
  r.neg_ = !r.mag_.empty() && (neg_ != o.neg_);
  return r;
}

void BigInt::divmod(const BigInt& o, BigInt& q, BigInt& r) const {
  divmod_mag(mag_, o.mag_, q.mag_, r.mag_);
  q.neg_ = !q.mag_.empty() && (neg_ != o.neg_);
  r.neg_ = !r.mag_.empty() && neg_;
}

BigInt BigInt::operator/(const BigInt& o) const {
  BigInt q, r;
  divmod(o, q, r);
  return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
  BigInt q, r;
  divmod(o, q, r);
  return r;
}

bool BigInt::operator<(const BigInt& o) const {
  if (neg_ != o.neg_) return neg_;
  int c = cmp_mag(mag_, o.mag_);
  return neg_ ? c > 0 : c < 0;
}

BigInt BigInt::abs() const {
  BigInt r = *this;
  r.neg_ = false;
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.neg_ = false;
  b.neg_ = false;
  while (!b.is_zero()) {
    BigInt r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

BigInt BigInt::isqrt(const BigInt& v) {
  if (v.is_negative()) throw std::domain_error("BigInt::isqrt: negative");
  if (v.is_zero()) return BigInt();
  BigInt lo(1), hi = v;
  if (BigInt(2) < v) {
    // Newton-style bisection on [1, v]
    while (lo < hi) {
      BigInt mid = (lo + hi + BigInt(1)) / BigInt(2);
      if (v < mid * mid) {
        hi = mid - BigInt(1);
      } else {
        lo = mid;
      }
    }
  }
  return lo;
}

bool BigInt::is_perfect_square() const {
  if (is_negative()) return false;
  BigInt r = isqrt(*this);
  return r * r == *this;
}

bool BigInt::fits_int64(int64_t* out) const {
  if (mag_.size() > 2) return false;
  uint64_t m = 0;
  if (mag_.size() >= 1) m = mag_[0];
  if (mag_.size() == 2) m |= uint64_t(mag_[1]) << 32;
  if (neg_) {
    if (m > (uint64_t(1) << 63)) return false;
    if (out) *out = -static_cast<int64_t>(m);
  } else {
    if (m > static_cast<uint64_t>(INT64_MAX)) return false;
    if (out) *out = static_cast<int64_t>(m);
  }
  return true;
}

BigInt BigInt::from_string(const std::string& s) {
  BigInt r;
  size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i >= s.size()) throw std::invalid_argument("BigInt::from_string: empty");
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt::from_string: bad digit");
    r = r * BigInt(10) + BigInt(s[i] - '0');
  }
  if (neg && !r.is_zero()) r.neg_ = true;
  return r;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  BigInt v = abs();
  std::string digits;
  const BigInt ten(10);
  while (!v.is_zero()) {
    BigInt q, r;
    v.divmod(ten, q, r);
    int64_t d = 0;
    r.fits_int64(&d);
    digits.push_back(static_cast<char>('0' + d));
    v = std::move(q);
  }
  if (neg_) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Rat::Rat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("Rat: zero denominator");
  if (den_.is_negative()) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (g != BigInt(1) && !g.is_zero()) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
  if (num_.is_zero()) den_ = BigInt(1);
}

Rat Rat::operator+(const Rat& o) const { return Rat(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
Rat Rat::operator-(const Rat& o) const { return Rat(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
Rat Rat::operator*(const Rat& o) const { return Rat(num_ * o.num_, den_ * o.den_); }

Rat Rat::operator/(const Rat& o) const {
  if (o.is_zero()) throw std::domain_error("Rat: division by zero");
  return Rat(num_ * o.den_, den_ * o.num_);
}

Rat Rat::operator-() const { return Rat(-num_, den_); }

bool Rat::operator<(const Rat& o) const { return num_ * o.den_ < o.num_ * den_; }

std::string Rat::to_string() const {
  if (is_integer()) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

Rat Rat::from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(BigInt::from_string(s), BigInt(1));
  return Rat(BigInt::from_string(s.substr(0, slash)), BigInt::from_string(s.substr(slash + 1)));
}

}  // namespace topoforge

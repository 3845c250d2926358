#include "ratfield.hpp"

#include <algorithm>
#include <stdexcept>

namespace topoforge {

Rat RationalField::decode(const std::string& s) const {
  if (s.rfind("p:0;d:1;c:[", 0) != 0 || s.back() != ']')
    throw std::invalid_argument("rational decode: bad encoding");
  return Rat::from_string(s.substr(11, s.size() - 12));
}

Rat RationalField::enumerate_value(uint64_t index) const {
  if (index == 0) return Rat(0);
  const uint64_t j = (index + 1) / 2;  // 1-based position in the Calkin-Wilf walk
  const bool negative = (index % 2) == 0;
  Rat q(1);
  for (uint64_t step = 1; step < j; ++step) {
    // q -> 1 / (2*floor(q) - q + 1)
    BigInt fl = q.num() / q.den();  // q >= 0 here, truncation = floor
    Rat next = Rat(1) / (Rat(fl, BigInt(1)) * Rat(2) - q + Rat(1));
    q = next;
  }
  return negative ? -q : q;
}

namespace {

// divisors of |v| up to a search cap; flags when the cap truncated the list
std::vector<BigInt> bounded_divisors(const BigInt& v, bool* truncated) {
  std::vector<BigInt> divs;
  *truncated = false;
  BigInt a = v.abs();
  if (a.is_zero()) return divs;
  int64_t small = 0;
  if (a.fits_int64(&small) && small <= 2000000) {
    for (int64_t d = 1; d * d <= small; ++d) {
      if (small % d == 0) {
        divs.push_back(BigInt(d));
        divs.push_back(BigInt(small / d));
      }
    }
  } else {
    // trial division by small candidates only
    for (int64_t d = 1; d <= 4096; ++d) {
      if ((a % BigInt(d)).is_zero()) {
        divs.push_back(BigInt(d));
        divs.push_back(a / BigInt(d));
      }
    }
    *truncated = true;
  }
  std::sort(divs.begin(), divs.end(), [](const BigInt& x, const BigInt& y) { return x < y; });
  divs.erase(std::unique(divs.begin(), divs.end()), divs.end());
  return divs;
}

std::vector<Rat> poly_normalized(const std::vector<Rat>& poly) {
  std::vector<Rat> f = poly;
  while (!f.empty() && f.back().is_zero()) f.pop_back();
  return f;
}

Rat eval(const std::vector<Rat>& f, const Rat& x) {
  Rat acc(0);
  for (size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return acc;
}

std::vector<Rat> deflate(const std::vector<Rat>& f, const Rat& r) {
  // exact division by (X - r); caller guarantees f(r) = 0
  std::vector<Rat> q(f.size() - 1, Rat(0));
  Rat carry(0);
  for (size_t i = f.size(); i-- > 1;) {
    carry = carry * r + f[i];
    q[i - 1] = carry;
  }
  return q;
}

}  // namespace

std::vector<RationalField::RootMult> RationalField::roots(const std::vector<Rat>& poly, bool* complete) const {
  std::vector<Rat> f = poly_normalized(poly);
  if (f.empty()) throw std::invalid_argument("roots: zero polynomial");
  const size_t degree = f.size() - 1;
  std::vector<RootMult> out;
  bool full_search = true;

  auto add_root = [&](const Rat& r) {
    for (auto& rm : out) {
      if (rm.root == r) {
        ++rm.mult;
        return;
      }
    }
    out.push_back(RootMult{r, 1});
  };

  std::vector<Rat> cur = f;
  // strip powers of X
  while (cur.size() > 1 && cur.front().is_zero()) {
    add_root(Rat(0));
    cur.erase(cur.begin());
  }
  while (cur.size() > 1) {
    if (cur.size() == 2) {
      add_root(-(cur[0] / cur[1]));
      break;
    }
    if (cur.size() == 3) {
      // exact quadratic: a X^2 + b X + c
      const Rat &c = cur[0], &b = cur[1], &a = cur[2];
      Rat disc = b * b - Rat(4) * a * c;
      if (disc.num().is_negative()) break;
      if (!disc.num().is_perfect_square() || !disc.den().is_perfect_square()) break;
      Rat sq(BigInt::isqrt(disc.num()), BigInt::isqrt(disc.den()));
      Rat two_a = Rat(2) * a;
      Rat r1 = (-b + sq) / two_a;
      Rat r2 = (-b - sq) / two_a;
      add_root(r1);
      if (r2 != r1) add_root(r2);
      cur.clear();
      break;
    }
    // rational root candidates p/q with p | c0_num-scaled, q | lead
    // clear denominators first
    BigInt den_lcm(1);
    for (const Rat& c : cur) den_lcm = den_lcm * (c.den() / BigInt::gcd(den_lcm, c.den()));
    std::vector<BigInt> ic;
    for (const Rat& c : cur) ic.push_back(c.num() * (den_lcm / c.den()));
    bool t1 = false, t2 = false;
    std::vector<BigInt> p_divs = bounded_divisors(ic.front(), &t1);
    std::vector<BigInt> q_divs = bounded_divisors(ic.back(), &t2);
    if (t1 || t2) full_search = false;
    bool found = false;
    for (const BigInt& pn : p_divs) {
      for (const BigInt& qd : q_divs) {
        for (int sign = 0; sign < 2; ++sign) {
          Rat cand(sign ? -pn : pn, qd);
          if (eval(cur, cand).is_zero()) {
            add_root(cand);
            cur = deflate(cur, cand);
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) break;
  }

  // multiplicities of roots found by deflation are already accumulated;
  // confirm against the original polynomial by repeated deflation
  std::vector<RootMult> confirmed;
  for (const auto& rm : out) {
    std::vector<Rat> g = f;
    uint32_t m = 0;
    while (g.size() > 1 && eval(g, rm.root).is_zero()) {
      g = deflate(g, rm.root);
      ++m;
    }
    if (m > 0) confirmed.push_back(RootMult{rm.root, m});
  }
  std::sort(confirmed.begin(), confirmed.end(),
            [](const RootMult& a, const RootMult& b) { return a.root < b.root; });
  uint64_t total = 0;
  for (const auto& rm : confirmed) total += rm.mult;
  (void)full_search;
  if (complete) *complete = (total == degree);
  return confirmed;
}

}  // namespace topoforge

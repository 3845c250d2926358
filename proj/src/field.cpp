#include "field.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "bigint.hpp"

namespace topoforge {

namespace {

uint64_t lcm_u32(uint64_t a, uint64_t b) { return a / std::gcd(a, b) * b; }

// saturating p^e
uint64_t pow_sat(uint64_t p, uint32_t e) {
  uint64_t r = 1;
  for (uint32_t i = 0; i < e; ++i) {
    if (r > (UINT64_MAX >> 3) / p) return UINT64_MAX;
    r *= p;
  }
  return r;
}

// Moebius function of small n
int moebius(uint32_t n) {
  int m = 1;
  for (uint32_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      n /= q;
      if (n % q == 0) return 0;
      m = -m;
    }
  }
  if (n > 1) m = -m;
  return m;
}

constexpr uint32_t kMaxCompoundDegree = 210;
// Exhaustive scan only pays off in very small fields; above this the
// gcd/splitting route is used.
constexpr uint64_t kExhaustiveRootBound = 1u << 10;

}  // namespace

bool PrimeClosure::Canon::operator<(const Canon& o) const {
  if (deg != o.deg) return deg < o.deg;
  for (size_t i = c.size(); i-- > 0;) {
    if (c[i] != o.c[i]) return c[i] < o.c[i];
  }
  return false;
}

PrimeClosure::PrimeClosure(uint32_t p) : fp_(p) {
  deg_ = 1;
  modulus_ = FpPoly{0, 1};  // X
  defining_[1] = modulus_;
  gen_image_[1] = rzero();
  gen_powers_[1] = {Vec{1}};
}

// ---------------------------------------------------------------------------
// raw compound arithmetic

bool PrimeClosure::vec_value_less(const Vec& a, const Vec& b) {
  for (size_t i = std::max(a.size(), b.size()); i-- > 0;) {
    uint8_t x = i < a.size() ? a[i] : 0;
    uint8_t y = i < b.size() ? b[i] : 0;
    if (x != y) return x < y;
  }
  return false;
}

PrimeClosure::Vec PrimeClosure::radd(const Vec& a, const Vec& b) const {
  Vec r(deg_);
  for (uint32_t i = 0; i < deg_; ++i) r[i] = fp_.add(a[i], b[i]);
  return r;
}

PrimeClosure::Vec PrimeClosure::rsub(const Vec& a, const Vec& b) const {
  Vec r(deg_);
  for (uint32_t i = 0; i < deg_; ++i) r[i] = fp_.sub(a[i], b[i]);
  return r;
}

PrimeClosure::Vec PrimeClosure::rneg(const Vec& a) const {
  Vec r(deg_);
  for (uint32_t i = 0; i < deg_; ++i) r[i] = fp_.neg(a[i]);
  return r;
}

PrimeClosure::Vec PrimeClosure::rmul(const Vec& a, const Vec& b) const {
  if (deg_ == 1) return Vec{fp_.mul(a[0], b[0])};
  std::vector<uint32_t> acc(2 * deg_ - 1, 0);
  for (uint32_t i = 0; i < deg_; ++i) {
    if (a[i] == 0) continue;
    for (uint32_t j = 0; j < deg_; ++j) acc[i + j] += uint32_t(a[i]) * b[j];
  }
  std::vector<uint8_t> t(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) t[i] = static_cast<uint8_t>(acc[i] % fp_.p());
  for (size_t i = t.size(); i-- > deg_;) {
    const uint8_t c = t[i];
    if (c == 0) continue;
    t[i] = 0;
    for (uint32_t k = 0; k < deg_; ++k) {
      t[i - deg_ + k] = fp_.sub(t[i - deg_ + k], fp_.mul(c, modulus_[k]));
    }
  }
  t.resize(deg_);
  return t;
}

bool PrimeClosure::riszero(const Vec& a) const {
  return std::all_of(a.begin(), a.end(), [](uint8_t c) { return c == 0; });
}

PrimeClosure::Vec PrimeClosure::rinv(const Vec& a) const {
  if (riszero(a)) throw std::domain_error("PrimeClosure: inverse of zero");
  if (deg_ == 1) return Vec{fp_.inv(a[0])};
  // extended Euclid in F_p[X] against the modulus
  FpPoly r0 = modulus_, r1(a.begin(), a.end());
  fp_poly_normalize(r1);
  FpPoly s0 = {}, s1 = {1};
  while (!r1.empty()) {
    // divide r0 by r1
    FpPoly q;
    FpPoly rem = r0;
    const int d1 = fp_poly_deg(r1);
    const uint8_t li = fp_.inv(r1.back());
    while (fp_poly_deg(rem) >= d1) {
      const int k = fp_poly_deg(rem) - d1;
      const uint8_t c = fp_.mul(rem.back(), li);
      if (static_cast<int>(q.size()) < k + 1) q.resize(k + 1, 0);
      q[k] = fp_.add(q[k], c);
      FpPoly shifted(k, 0);
      shifted.insert(shifted.end(), r1.begin(), r1.end());
      for (auto& cc : shifted) cc = fp_.mul(cc, c);
      rem = fp_poly_sub(fp_, rem, shifted);
    }
    FpPoly s2 = fp_poly_sub(fp_, s0, fp_poly_mul(fp_, q, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (fp_poly_deg(r0) != 0) throw std::logic_error("PrimeClosure: modulus not irreducible");
  const uint8_t scale = fp_.inv(r0[0]);
  Vec out(deg_, 0);
  for (size_t i = 0; i < s0.size(); ++i) out[i] = fp_.mul(s0[i], scale);
  return out;
}

PrimeClosure::Vec PrimeClosure::rpow(Vec a, uint64_t e) const {
  Vec r = rzero();
  r[0] = 1;
  while (e > 0) {
    if (e & 1) r = rmul(r, a);
    a = rmul(a, a);
    e >>= 1;
  }
  return r;
}

void PrimeClosure::ensure_frobenius() const {
  if (frob_valid_) return;
  frob_cols_.assign(deg_, rzero());
  Vec g = rzero();
  if (deg_ == 1) {
    frob_cols_[0] = Vec{1};
    frob_valid_ = true;
    return;
  }
  g[1] = 1;
  Vec gp = rpow(g, fp_.p());
  Vec col = rzero();
  col[0] = 1;
  frob_cols_[0] = col;
  for (uint32_t k = 1; k < deg_; ++k) {
    col = rmul(col, gp);
    frob_cols_[k] = col;
  }
  frob_valid_ = true;
}

PrimeClosure::Vec PrimeClosure::rfrob(const Vec& a) const {
  ensure_frobenius();
  Vec r = rzero();
  for (uint32_t k = 0; k < deg_; ++k) {
    if (a[k] == 0) continue;
    for (uint32_t i = 0; i < deg_; ++i) r[i] = fp_.add(r[i], fp_.mul(a[k], frob_cols_[k][i]));
  }
  return r;
}

PrimeClosure::Vec PrimeClosure::rfrob_k(Vec a, uint32_t k) const {
  for (uint32_t i = 0; i < k; ++i) a = rfrob(a);
  return a;
}

// ---------------------------------------------------------------------------
// element interface

void PrimeClosure::up(Elem& e) const {
  while (e.ver < version_) {
    const GrowthEvent& ev = events_[e.ver];
    Vec out(ev.lift[0].size(), 0);
    for (uint32_t k = 0; k < ev.old_deg; ++k) {
      if (e.c[k] == 0) continue;
      for (size_t i = 0; i < out.size(); ++i) out[i] = fp_.add(out[i], fp_.mul(e.c[k], ev.lift[k][i]));
    }
    e.c = std::move(out);
    ++e.ver;
  }
}

PrimeClosure::Elem PrimeClosure::zero() const { return Elem{version_, rzero()}; }

PrimeClosure::Elem PrimeClosure::one() const {
  Elem e{version_, rzero()};
  e.c[0] = 1;
  return e;
}

PrimeClosure::Elem PrimeClosure::minus_one() const {
  Elem e{version_, rzero()};
  e.c[0] = fp_.neg(1);
  return e;
}

PrimeClosure::Elem PrimeClosure::from_small(int64_t v) const {
  int64_t m = v % int64_t(fp_.p());
  if (m < 0) m += fp_.p();
  Elem e{version_, rzero()};
  e.c[0] = static_cast<uint8_t>(m);
  return e;
}

PrimeClosure::Elem PrimeClosure::add(const Elem& a, const Elem& b) const {
  return Elem{version_, radd(lifted(a).c, lifted(b).c)};
}

PrimeClosure::Elem PrimeClosure::sub(const Elem& a, const Elem& b) const {
  return Elem{version_, rsub(lifted(a).c, lifted(b).c)};
}

PrimeClosure::Elem PrimeClosure::mul(const Elem& a, const Elem& b) const {
  return Elem{version_, rmul(lifted(a).c, lifted(b).c)};
}

PrimeClosure::Elem PrimeClosure::neg(const Elem& a) const { return Elem{version_, rneg(lifted(a).c)}; }

PrimeClosure::Elem PrimeClosure::inv(const Elem& a) const { return Elem{version_, rinv(lifted(a).c)}; }

bool PrimeClosure::eq(const Elem& a, const Elem& b) const { return lifted(a).c == lifted(b).c; }

bool PrimeClosure::is_zero(const Elem& a) const { return riszero(lifted(a).c); }

bool PrimeClosure::is_one(const Elem& a) const { return eq(a, one()); }

std::vector<uint8_t> PrimeClosure::key(const Elem& e) const { return lifted(e).c; }

// ---------------------------------------------------------------------------
// canonical form

uint32_t PrimeClosure::min_subfield_degree(const Vec& x) const {
  for (uint32_t d = 1; d <= deg_; ++d) {
    if (deg_ % d != 0) continue;
    if (rfrob_k(x, d) == x) return d;
  }
  throw std::logic_error("min_subfield_degree: no fixed degree found");
}

PrimeClosure::Vec PrimeClosure::coords_in_subfield(const Vec& x, uint32_t d, bool* ok) {
  gen_image(d);
  const std::vector<Vec>& pw = gen_powers_[d];
  // Solve sum_k a_k * pw[k] = x over F_p by Gaussian elimination.
  const uint32_t rows = deg_, cols = d;
  std::vector<std::vector<uint8_t>> m(rows, std::vector<uint8_t>(cols + 1, 0));
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t k = 0; k < cols; ++k) m[r][k] = pw[k][r];
    m[r][cols] = x[r];
  }
  uint32_t rank = 0;
  std::vector<int> pivot_col(rows, -1);
  for (uint32_t col = 0; col < cols && rank < rows; ++col) {
    uint32_t sel = rank;
    while (sel < rows && m[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[rank]);
    const uint8_t piv = fp_.inv(m[rank][col]);
    for (uint32_t k = col; k <= cols; ++k) m[rank][k] = fp_.mul(m[rank][k], piv);
    for (uint32_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const uint8_t c = m[r][col];
      for (uint32_t k = col; k <= cols; ++k) m[r][k] = fp_.sub(m[r][k], fp_.mul(c, m[rank][k]));
    }
    pivot_col[rank] = static_cast<int>(col);
    ++rank;
  }
  Vec a(d, 0);
  for (uint32_t r = 0; r < rank; ++r) {
    if (pivot_col[r] >= 0) a[pivot_col[r]] = m[r][cols];
  }
  // consistency rows
  for (uint32_t r = rank; r < rows; ++r) {
    if (m[r][cols] != 0) {
      if (ok) *ok = false;
      return a;
    }
  }
  if (ok) *ok = true;
  return a;
}

PrimeClosure::Canon PrimeClosure::canon(const Elem& e) const {
  Elem x = lifted(e);
  PrimeClosure* self = const_cast<PrimeClosure*>(this);
  const uint32_t d = min_subfield_degree(x.c);
  bool ok = true;
  Vec cs = self->coords_in_subfield(x.c, d, &ok);
  if (!ok) throw std::logic_error("canon: inconsistent subfield coordinates");
  return Canon{d, std::move(cs)};
}

PrimeClosure::Elem PrimeClosure::from_canon(const Canon& cn) {
  if (cn.c.size() != cn.deg) throw std::invalid_argument("from_canon: bad coefficient length");
  for (uint8_t c : cn.c)
    if (c >= fp_.p()) throw std::invalid_argument("from_canon: coefficient out of range");
  grow_to_degree_multiple(cn.deg);
  gen_image(cn.deg);
  const std::vector<Vec>& pw = gen_powers_[cn.deg];
  Vec x = rzero();
  for (uint32_t k = 0; k < cn.deg; ++k) {
    if (cn.c[k] == 0) continue;
    for (uint32_t i = 0; i < deg_; ++i) x[i] = fp_.add(x[i], fp_.mul(cn.c[k], pw[k][i]));
  }
  return Elem{version_, std::move(x)};
}

bool PrimeClosure::less(const Elem& a, const Elem& b) const { return canon(a) < canon(b); }

std::string PrimeClosure::encode(const Elem& e) const {
  Canon cn = canon(e);
  std::string s = "p:" + std::to_string(fp_.p()) + ";d:" + std::to_string(cn.deg) + ";c:[";
  for (uint32_t k = 0; k < cn.deg; ++k) {
    if (k) s += ",";
    s += std::to_string(int(cn.c[k]));
  }
  s += "]";
  return s;
}

PrimeClosure::Elem PrimeClosure::decode(const std::string& s) {
  uint32_t p = 0, d = 0;
  if (s.rfind("p:", 0) != 0) throw std::invalid_argument("element decode: missing p");
  size_t pos = 2;
  size_t semi = s.find(';', pos);
  p = static_cast<uint32_t>(std::stoul(s.substr(pos, semi - pos)));
  if (p != fp_.p()) throw std::invalid_argument("element decode: characteristic mismatch");
  if (s.compare(semi + 1, 2, "d:") != 0) throw std::invalid_argument("element decode: missing d");
  pos = semi + 3;
  semi = s.find(';', pos);
  d = static_cast<uint32_t>(std::stoul(s.substr(pos, semi - pos)));
  if (s.compare(semi + 1, 3, "c:[") != 0 || s.back() != ']')
    throw std::invalid_argument("element decode: missing coefficients");
  pos = semi + 4;
  Canon cn;
  cn.deg = d;
  std::string body = s.substr(pos, s.size() - 1 - pos);
  size_t start = 0;
  while (start <= body.size() && !body.empty()) {
    size_t comma = body.find(',', start);
    std::string tok = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    cn.c.push_back(static_cast<uint8_t>(std::stoul(tok)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (cn.c.size() != d) throw std::invalid_argument("element decode: coefficient count mismatch");
  return from_canon(cn);
}

// ---------------------------------------------------------------------------
// enumeration

PrimeClosure::Canon PrimeClosure::enumerate_canon(uint64_t index) const {
  const uint64_t p = fp_.p();
  uint32_t d = 1;
  uint64_t remaining = index;
  for (;; ++d) {
    if (d > 64) throw std::invalid_argument("enumerate: index out of supported range");
    // count of elements with minimal degree exactly d
    uint64_t count = 0;
    bool sat = false;
    int64_t signed_count = 0;
    for (uint32_t e = 1; e <= d; ++e) {
      if (d % e != 0) continue;
      uint64_t pe = pow_sat(p, e);
      if (pe == UINT64_MAX) sat = true;
      signed_count += moebius(d / e) * static_cast<int64_t>(pe);
    }
    count = sat ? UINT64_MAX : static_cast<uint64_t>(signed_count);
    if (remaining < count) break;
    remaining -= count;
  }
  if (d == 1) return Canon{1, {static_cast<uint8_t>(remaining)}};

  // local context F_p[X]/f_d, independent of the running tower
  const FpPoly fd = lex_least_irreducible(fp_, d);
  auto local_frob = [&](FpPoly x) {
    // x -> x^p mod fd
    FpPoly r = {1};
    uint32_t e = fp_.p();
    while (e > 0) {
      if (e & 1) r = fp_poly_rem(fp_, fp_poly_mul(fp_, r, x), fd);
      x = fp_poly_rem(fp_, fp_poly_mul(fp_, x, x), fd);
      e >>= 1;
    }
    return r;
  };
  const uint64_t total = pow_sat(p, d);
  uint64_t seen = 0;
  for (uint64_t v = 0; v < total; ++v) {
    Canon cn;
    cn.deg = d;
    cn.c.assign(d, 0);
    uint64_t t = v;
    for (uint32_t k = 0; k < d; ++k) {
      cn.c[k] = static_cast<uint8_t>(t % p);
      t /= p;
    }
    // minimal degree must be exactly d
    FpPoly x(cn.c.begin(), cn.c.end());
    fp_poly_normalize(x);
    bool proper_subfield = false;
    for (uint32_t e = 1; e < d; ++e) {
      if (d % e != 0) continue;
      FpPoly y = x;
      for (uint32_t i = 0; i < e; ++i) y = local_frob(y);
      if (y == x) {
        proper_subfield = true;
        break;
      }
    }
    if (proper_subfield) continue;
    if (seen == remaining) return cn;
    ++seen;
  }
  throw std::logic_error("enumerate: exhausted degree block unexpectedly");
}

PrimeClosure::Elem PrimeClosure::enumerate(uint64_t index) { return from_canon(enumerate_canon(index)); }

// ---------------------------------------------------------------------------
// growth

const FpPoly& PrimeClosure::defining_poly(uint32_t d) {
  auto it = defining_.find(d);
  if (it != defining_.end()) return it->second;
  return defining_.emplace(d, lex_least_irreducible(fp_, d)).first->second;
}

PrimeClosure::Vec PrimeClosure::gen_image(uint32_t d) {
  auto it = gen_image_.find(d);
  if (it == gen_image_.end()) {
    if (deg_ % d != 0) throw std::logic_error("gen_image: degree does not divide compound");
    const FpPoly& fd = defining_poly(d);
    RPoly lifted(fd.size());
    for (size_t i = 0; i < fd.size(); ++i) {
      lifted[i] = rzero();
      lifted[i][0] = fd[i];
    }
    std::vector<Vec> rs = roots_in_field(lifted);
    if (rs.size() != d) throw std::logic_error("gen_image: defining polynomial did not split");
    std::sort(rs.begin(), rs.end(), vec_value_less);
    it = gen_image_.emplace(d, rs.front()).first;
  }
  if (!gen_powers_.count(d)) {
    std::vector<Vec> pw(d);
    Vec acc = rzero();
    acc[0] = 1;
    pw[0] = acc;
    for (uint32_t k = 1; k < d; ++k) {
      acc = rmul(acc, it->second);
      pw[k] = acc;
    }
    gen_powers_[d] = std::move(pw);
  }
  return it->second;
}

void PrimeClosure::grow_to_degree_multiple(uint32_t d) {
  const uint64_t target = lcm_u32(deg_, d);
  if (target > kMaxCompoundDegree)
    throw std::runtime_error("tower growth beyond supported compound degree " +
                             std::to_string(kMaxCompoundDegree));
  if (target != deg_) grow_to(static_cast<uint32_t>(target));
  else gen_image(d);
}

void PrimeClosure::grow_to(uint32_t new_deg) {
  const uint32_t old_deg = deg_;
  const FpPoly old_modulus = modulus_;
  const FpPoly& f_new = defining_poly(new_deg);

  deg_ = new_deg;
  modulus_ = f_new;
  frob_valid_ = false;
  gen_powers_.clear();
  // root_memo_ survives growth: keys and values are canonical forms

  GrowthEvent ev;
  ev.old_deg = old_deg;
  ev.lift.assign(old_deg, rzero());
  if (old_deg == 1) {
    ev.lift[0] = rzero();
    ev.lift[0][0] = 1;
  } else {
    RPoly fold(old_modulus.size());
    for (size_t i = 0; i < old_modulus.size(); ++i) {
      fold[i] = rzero();
      fold[i][0] = old_modulus[i];
    }
    std::vector<Vec> rs = roots_in_field(fold);
    if (rs.empty()) throw std::logic_error("grow_to: old modulus has no root in new compound");
    std::sort(rs.begin(), rs.end(), vec_value_less);
    const Vec rho = rs.front();
    Vec acc = rzero();
    acc[0] = 1;
    ev.lift[0] = acc;
    for (uint32_t k = 1; k < old_deg; ++k) {
      acc = rmul(acc, rho);
      ev.lift[k] = acc;
    }
  }
  events_.push_back(std::move(ev));
  ++version_;

  // transport generator images through the new embedding
  for (auto& [d, img] : gen_image_) {
    Elem tmp{version_ - 1, img};
    up(tmp);
    img = std::move(tmp.c);
  }
  gen_image_[new_deg] = [&] {
    Vec g = rzero();
    if (new_deg > 1) g[1] = 1;
    else g[0] = 0;
    return g;
  }();
  gen_image(new_deg);  // populate powers
}

// ---------------------------------------------------------------------------
// polynomial helpers over raw coords

void PrimeClosure::rp_normalize(RPoly& f) const {
  while (!f.empty() && riszero(f.back())) f.pop_back();
}

PrimeClosure::RPoly PrimeClosure::rp_mul(const RPoly& a, const RPoly& b) const {
  if (a.empty() || b.empty()) return {};
  RPoly r(a.size() + b.size() - 1, rzero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (riszero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (riszero(b[j])) continue;
      r[i + j] = radd(r[i + j], rmul(a[i], b[j]));
    }
  }
  rp_normalize(r);
  return r;
}

PrimeClosure::RPoly PrimeClosure::rp_rem(RPoly a, const RPoly& b) const {
  if (b.empty()) throw std::domain_error("rp_rem: zero divisor");
  rp_normalize(a);
  const size_t db = b.size() - 1;
  const Vec li = rinv(b.back());
  while (a.size() > db) {
    const size_t da = a.size() - 1;
    const Vec q = rmul(a.back(), li);
    for (size_t i = 0; i <= db; ++i) {
      a[da - db + i] = rsub(a[da - db + i], rmul(q, b[i]));
    }
    rp_normalize(a);
  }
  return a;
}

PrimeClosure::RPoly PrimeClosure::rp_divexact(const RPoly& a, const RPoly& b) const {
  if (b.empty()) throw std::domain_error("rp_divexact: zero divisor");
  RPoly rem = a, q;
  rp_normalize(rem);
  const size_t db = b.size() - 1;
  if (rem.size() <= db) return {};
  const Vec li = rinv(b.back());
  q.assign(rem.size() - db, rzero());
  while (rem.size() > db) {
    const size_t da = rem.size() - 1;
    const Vec c = rmul(rem.back(), li);
    q[da - db] = c;
    for (size_t i = 0; i <= db; ++i) {
      rem[da - db + i] = rsub(rem[da - db + i], rmul(c, b[i]));
    }
    rp_normalize(rem);
  }
  rp_normalize(q);
  return q;
}

PrimeClosure::RPoly PrimeClosure::rp_gcd(RPoly a, RPoly b) const {
  rp_normalize(a);
  rp_normalize(b);
  while (!b.empty()) {
    RPoly r = rp_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return rp_monic(std::move(a));
}

PrimeClosure::RPoly PrimeClosure::rp_monic(RPoly f) const {
  rp_normalize(f);
  if (f.empty()) return f;
  Vec one_v = rzero();
  one_v[0] = 1;
  if (f.back() != one_v) {
    const Vec li = rinv(f.back());
    for (auto& c : f) c = rmul(c, li);
  }
  return f;
}

PrimeClosure::RPoly PrimeClosure::rp_deriv(const RPoly& f) const {
  RPoly r;
  for (size_t i = 1; i < f.size(); ++i) {
    Vec k = rzero();
    k[0] = static_cast<uint8_t>(i % fp_.p());
    r.push_back(rmul(f[i], k));
  }
  rp_normalize(r);
  return r;
}

PrimeClosure::Vec PrimeClosure::rp_eval(const RPoly& f, const Vec& x) const {
  Vec acc = rzero();
  for (size_t i = f.size(); i-- > 0;) {
    acc = radd(rmul(acc, x), f[i]);
  }
  return acc;
}

PrimeClosure::RPoly PrimeClosure::rp_pow_mod(RPoly base, const std::vector<bool>& ebits, const RPoly& mod) const {
  // ebits[0] is the most significant bit
  RPoly r = {[&] {
    Vec o = rzero();
    o[0] = 1;
    return o;
  }()};
  base = rp_rem(std::move(base), mod);
  for (size_t i = 0; i < ebits.size(); ++i) {
    r = rp_rem(rp_mul(r, r), mod);
    if (ebits[i]) r = rp_rem(rp_mul(r, base), mod);
  }
  return r;
}

PrimeClosure::RPoly PrimeClosure::rp_xq_mod(const RPoly& mod) const {
  // X^(p^deg_) mod `mod`, via deg_ successive p-th powers
  RPoly x = {rzero(), [&] {
    Vec o = rzero();
    o[0] = 1;
    return o;
  }()};
  RPoly t = rp_rem(std::move(x), mod);
  std::vector<bool> pbits;
  for (uint32_t v = fp_.p(); v > 0; v >>= 1) pbits.push_back(v & 1);
  std::reverse(pbits.begin(), pbits.end());
  for (uint32_t i = 0; i < deg_; ++i) {
    t = rp_pow_mod(std::move(t), pbits, mod);
  }
  return t;
}

PrimeClosure::RPoly PrimeClosure::rp_pth_root(const RPoly& f) const {
  // f = g(X^p); returns g with coefficients taken to their p-th roots
  RPoly g;
  for (size_t i = 0; i < f.size(); i += fp_.p()) {
    g.push_back(rfrob_k(f[i], deg_ >= 1 ? deg_ - 1 : 0));
  }
  rp_normalize(g);
  return g;
}

// ---------------------------------------------------------------------------
// root finding

std::optional<PrimeClosure::Vec> PrimeClosure::artin_schreier(const Vec& c) const {
  // solve (F + I) y = c over F_2, F the Frobenius matrix
  ensure_frobenius();
  const uint32_t D = deg_;
  std::vector<std::vector<uint8_t>> m(D, std::vector<uint8_t>(D + 1, 0));
  for (uint32_t r = 0; r < D; ++r) {
    for (uint32_t k = 0; k < D; ++k) m[r][k] = frob_cols_[k][r];
    m[r][r] ^= 1;
    m[r][D] = c[r];
  }
  uint32_t rank = 0;
  std::vector<int> pivot_of_row(D, -1);
  for (uint32_t col = 0; col < D && rank < D; ++col) {
    uint32_t sel = rank;
    while (sel < D && m[sel][col] == 0) ++sel;
    if (sel == D) continue;
    std::swap(m[sel], m[rank]);
    for (uint32_t r = 0; r < D; ++r) {
      if (r != rank && m[r][col]) {
        for (uint32_t k = col; k <= D; ++k) m[r][k] ^= m[rank][k];
      }
    }
    pivot_of_row[rank] = static_cast<int>(col);
    ++rank;
  }
  for (uint32_t r = rank; r < D; ++r) {
    if (m[r][D]) return std::nullopt;  // Tr(c) = 1: no solution in this field
  }
  Vec y = rzero();
  for (uint32_t r = 0; r < rank; ++r) {
    if (pivot_of_row[r] >= 0) y[pivot_of_row[r]] = m[r][D];
  }
  return y;
}

std::vector<PrimeClosure::Vec> PrimeClosure::split_linear(RPoly h) const {
  std::vector<Vec> out;
  rp_normalize(h);
  if (h.size() <= 1) return out;
  if (h.size() == 2) {
    h = rp_monic(std::move(h));
    out.push_back(rneg(h[0]));
    return out;
  }
  if (fp_.p() == 2 && h.size() == 3) {
    // X^2 + bX + c with distinct in-field roots, so b != 0; substitute
    // X = bY and solve Y^2 + Y = c/b^2 directly.  Falls through to the
    // generic splitter if anything looks off.
    h = rp_monic(std::move(h));
    const Vec b = h[1];
    const Vec c = h[0];
    if (!riszero(b)) {
      Vec bi = rinv(b);
      Vec rhs = rmul(rmul(c, bi), bi);
      std::optional<Vec> y = artin_schreier(rhs);
      if (y) {
        Vec r1 = rmul(b, *y);
        Vec r2 = radd(r1, b);
        if (riszero(rp_eval(h, r1)) && riszero(rp_eval(h, r2))) {
          out.push_back(r1);
          out.push_back(r2);
          return out;
        }
      }
    }
  }
  const uint64_t q = pow_sat(fp_.p(), deg_);
  if (q <= kExhaustiveRootBound) {
    // exhaustive scan of the compound field
    Vec x = rzero();
    for (uint64_t v = 0; v < q; ++v) {
      uint64_t t = v;
      for (uint32_t k = 0; k < deg_; ++k) {
        x[k] = static_cast<uint8_t>(t % fp_.p());
        t /= fp_.p();
      }
      if (riszero(rp_eval(h, x))) out.push_back(x);
    }
    return out;
  }
  // Cantor-Zassenhaus style splitting with a deterministic trial sequence.
  h = rp_monic(std::move(h));
  std::vector<RPoly> work = {h};
  uint32_t trial = 1;
  std::vector<bool> half_bits;
  if (fp_.p() != 2) {
    BigInt e(1);
    for (uint32_t i = 0; i < deg_; ++i) e = e * BigInt(int64_t(fp_.p()));
    e = (e - BigInt(1)) / BigInt(2);
    std::string bits;
    BigInt two(2);
    while (!e.is_zero()) {
      BigInt r = e % two;
      half_bits.push_back(!r.is_zero());
      e = e / two;
    }
    std::reverse(half_bits.begin(), half_bits.end());
  }
  while (!work.empty()) {
    RPoly cur = std::move(work.back());
    work.pop_back();
    if (cur.size() <= 1) continue;
    if (cur.size() == 2) {
      out.push_back(rneg(rp_monic(std::move(cur))[0]));
      continue;
    }
    bool split_found = false;
    if (fp_.p() == 2) {
      // The trace form is non-degenerate, so some power-basis delta
      // separates any two distinct roots: Tr(delta*(r1-r2)) = 1.
      for (uint32_t bk = 0; bk < deg_ && !split_found; ++bk) {
        Vec delta = rzero();
        delta[bk] = 1;
        RPoly dx = {rzero(), delta};
        RPoly term = rp_rem(dx, cur);
        RPoly acc = term;
        for (uint32_t i = 1; i < deg_; ++i) {
          term = rp_rem(rp_mul(term, term), cur);
          if (acc.size() < term.size()) acc.resize(term.size(), rzero());
          for (size_t k = 0; k < term.size(); ++k) acc[k] = radd(acc[k], term[k]);
          rp_normalize(acc);
        }
        RPoly g = rp_gcd(acc, cur);
        if (!g.empty() && g.size() > 1 && g.size() < cur.size()) {
          RPoly rest = rp_divexact(cur, g);
          work.push_back(std::move(g));
          work.push_back(std::move(rest));
          split_found = true;
        }
      }
    } else {
      for (; trial < 100000 && !split_found; ++trial) {
        Vec delta = rzero();
        uint64_t t = trial;
        for (uint32_t k = 0; k < deg_ && t > 0; ++k) {
          delta[k] = static_cast<uint8_t>(t % fp_.p());
          t /= fp_.p();
        }
        RPoly xd = {delta, [&] {
          Vec o = rzero();
          o[0] = 1;
          return o;
        }()};
        RPoly probe = rp_pow_mod(std::move(xd), half_bits, cur);
        if (probe.empty()) probe = {rzero()};
        Vec o = rzero();
        o[0] = 1;
        probe[0] = rsub(probe[0], o);
        rp_normalize(probe);
        RPoly g = rp_gcd(probe, cur);
        if (!g.empty() && g.size() > 1 && g.size() < cur.size()) {
          RPoly rest = rp_divexact(cur, g);
          work.push_back(std::move(g));
          work.push_back(std::move(rest));
          split_found = true;
        }
      }
    }
    if (!split_found)
      throw std::logic_error("split_linear: trial sequence exhausted (deg_=" + std::to_string(deg_) +
                             ", cur_deg=" + std::to_string(cur.size() - 1) +
                             ", collected=" + std::to_string(out.size()) + ")");
  }
  return out;
}

std::vector<PrimeClosure::Vec> PrimeClosure::roots_in_field(const RPoly& f) const {
  // distinct roots lying in the current compound; f need not be squarefree
  RPoly g = rp_monic(f);
  if (g.size() <= 1) return {};
  RPoly xq = rp_xq_mod(g);
  // xq - X
  RPoly diff = xq;
  if (diff.size() < 2) diff.resize(2, rzero());
  {
    Vec o = rzero();
    o[0] = 1;
    diff[1] = rsub(diff[1], o);
  }
  rp_normalize(diff);
  RPoly h = rp_gcd(diff, g);
  return split_linear(std::move(h));
}

uint32_t PrimeClosure::distinct_roots_step(RPoly f, std::vector<Vec>& out) const {
  rp_normalize(f);
  if (f.size() <= 1) return 1;
  f = rp_monic(std::move(f));
  RPoly fd = rp_deriv(f);
  if (fd.empty()) {
    return distinct_roots_step(rp_pth_root(f), out);
  }
  RPoly g = rp_gcd(f, fd);
  RPoly w = (g.size() <= 1) ? f : rp_divexact(f, g);
  uint32_t L = 1;
  bool w_handled = false;
  if (fp_.p() == 2 && w.size() == 3) {
    // separable quadratic in characteristic 2: solve directly
    const Vec b = w[1], c0 = w[0];
    if (!riszero(b)) {
      Vec bi = rinv(b);
      std::optional<Vec> y = artin_schreier(rmul(rmul(c0, bi), bi));
      if (y) {
        Vec r1 = rmul(b, *y);
        out.push_back(r1);
        out.push_back(radd(r1, b));
      } else {
        L = 2;  // roots live in the quadratic extension
      }
      w_handled = true;
    }
  }
  if (!w_handled && w.size() > 1) {
    std::vector<Vec> rs = roots_in_field(w);
    RPoly infield = {[&] {
      Vec o = rzero();
      o[0] = 1;
      return o;
    }()};
    for (const Vec& r : rs) {
      out.push_back(r);
      RPoly lin = {rneg(r), [&] {
        Vec o = rzero();
        o[0] = 1;
        return o;
      }()};
      infield = rp_mul(infield, lin);
    }
    RPoly wrem = (infield.size() > 1) ? rp_divexact(w, infield) : w;
    if (wrem.size() > 1) {
      // distinct-degree profile to learn the needed extension
      RPoly cur = wrem;
      RPoly t = rp_xq_mod(cur);
      std::vector<bool> pbits;
      for (uint32_t v = fp_.p(); v > 0; v >>= 1) pbits.push_back(v & 1);
      std::reverse(pbits.begin(), pbits.end());
      for (uint32_t e = 2; cur.size() > 1 && e <= wrem.size(); ++e) {
        // t = X^(q^e) mod cur
        for (uint32_t i = 0; i < deg_; ++i) t = rp_pow_mod(std::move(t), pbits, cur);
        RPoly diff = t;
        if (diff.size() < 2) diff.resize(2, rzero());
        Vec o = rzero();
        o[0] = 1;
        diff[1] = rsub(diff[1], o);
        rp_normalize(diff);
        RPoly ge = rp_gcd(diff, cur);
        if (ge.size() > 1) {
          L = static_cast<uint32_t>(lcm_u32(L, e));
          cur = rp_divexact(cur, ge);
          t = rp_rem(std::move(t), cur);
        }
      }
      if (cur.size() > 1) {
        // remaining factor of degree = its own size - 1
        L = static_cast<uint32_t>(lcm_u32(L, static_cast<uint32_t>(cur.size() - 1)));
      }
    }
  }
  if (g.size() > 1) {
    uint32_t Lg = distinct_roots_step(g, out);
    L = static_cast<uint32_t>(lcm_u32(L, Lg));
  }
  return L;
}

std::vector<PrimeClosure::RootMult> PrimeClosure::roots(const std::vector<Elem>& poly, bool* complete) {
  std::vector<Elem> f = poly;
  for (auto& c : f) up(c);
  while (!f.empty() && riszero(f.back().c)) f.pop_back();
  if (f.empty()) throw std::invalid_argument("roots: zero polynomial");
  if (complete) *complete = true;
  if (f.size() == 1) return {};

  // memoized on the canonical encodings of the coefficients
  std::string memo_key;
  for (const auto& c : f) memo_key += encode(c) + "|";
  auto hit = root_memo_.find(memo_key);
  if (hit != root_memo_.end()) {
    std::vector<RootMult> out;
    for (const auto& [cn, m] : hit->second) out.push_back(RootMult{from_canon(cn), m});
    return out;
  }

  for (int guard = 0; guard < 8; ++guard) {
    RPoly rp(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
      Elem c = lifted(f[i]);
      rp[i] = std::move(c.c);
    }
    std::vector<Vec> distinct;
    uint32_t L = distinct_roots_step(rp, distinct);
    if (L == 1) {
      // dedupe, compute multiplicities by synthetic division, sort canonically
      std::vector<Vec> uniq;
      for (const Vec& r : distinct) {
        bool seen = false;
        for (const Vec& u : uniq) {
          if (u == r) {
            seen = true;
            break;
          }
        }
        if (!seen) uniq.push_back(r);
      }
      std::vector<RootMult> out;
      for (const Vec& r : uniq) {
        uint32_t mult = 0;
        RPoly cur = rp;
        for (;;) {
          // divide cur by (X - r) via Horner; remainder = cur(r)
          if (riszero(rp_eval(cur, r))) {
            RPoly quo(cur.size() - 1, rzero());
            Vec carry = rzero();
            for (size_t i = cur.size(); i-- > 1;) {
              carry = radd(rmul(carry, r), cur[i]);
              quo[i - 1] = carry;
            }
            cur = std::move(quo);
            ++mult;
            if (cur.size() <= 1) break;
          } else {
            break;
          }
        }
        if (mult == 0) throw std::logic_error("roots: found non-root");
        out.push_back(RootMult{Elem{version_, r}, mult});
      }
      std::sort(out.begin(), out.end(),
                [&](const RootMult& a, const RootMult& b) { return less(a.root, b.root); });
      std::vector<std::pair<Canon, uint32_t>> memo;
      for (const auto& rm : out) memo.emplace_back(canon(rm.root), rm.mult);
      root_memo_.emplace(std::move(memo_key), std::move(memo));
      return out;
    }
    const uint64_t need = uint64_t(deg_) * L;
    if (need > kMaxCompoundDegree)
      throw std::runtime_error("roots: splitting field beyond supported compound degree");
    grow_to_degree_multiple(static_cast<uint32_t>(need));
    for (auto& c : f) up(c);
  }
  throw std::logic_error("roots: did not stabilize after growth");
}

// ---------------------------------------------------------------------------
// descriptor

std::map<uint32_t, std::vector<uint8_t>> PrimeClosure::generator_images() const {
  std::map<uint32_t, std::vector<uint8_t>> out;
  for (const auto& [d, img] : gen_image_) out[d] = img;
  return out;
}

void PrimeClosure::adopt_descriptor(uint32_t compound_deg, const std::map<uint32_t, FpPoly>& defining,
                                    const std::map<uint32_t, std::vector<uint8_t>>& gen_images) {
  if (version_ != 0 || deg_ != 1) throw std::logic_error("adopt_descriptor: field already in use");
  for (const auto& [d, f] : defining) {
    if (fp_poly_deg(f) != static_cast<int>(d) || f.back() != 1)
      throw std::invalid_argument("descriptor: defining polynomial degree mismatch");
    if (!fp_poly_is_irreducible(fp_, f)) throw std::invalid_argument("descriptor: reducible defining polynomial");
    if (f != lex_least_irreducible(fp_, d))
      throw std::invalid_argument("descriptor: defining polynomial is not the canonical choice");
  }
  auto top = defining.find(compound_deg);
  if (compound_deg > 1 && top == defining.end())
    throw std::invalid_argument("descriptor: missing compound modulus");
  defining_ = defining;
  defining_[1] = FpPoly{0, 1};
  deg_ = compound_deg;
  modulus_ = compound_deg == 1 ? FpPoly{0, 1} : top->second;
  gen_image_.clear();
  gen_powers_.clear();
  frob_valid_ = false;
  root_memo_.clear();
  gen_image_[1] = rzero();
  for (const auto& [d, img] : gen_images) {
    if (img.size() != deg_) throw std::invalid_argument("descriptor: generator image length mismatch");
    if (compound_deg % d != 0) throw std::invalid_argument("descriptor: image degree does not divide compound");
    // must be a root of the defining polynomial of its degree
    if (d > 1) {
      auto it = defining_.find(d);
      if (it == defining_.end()) throw std::invalid_argument("descriptor: image without defining polynomial");
      RPoly fd(it->second.size());
      for (size_t i = 0; i < it->second.size(); ++i) {
        fd[i] = rzero();
        fd[i][0] = it->second[i];
      }
      if (!riszero(rp_eval(fd, img)))
        throw std::invalid_argument("descriptor: generator image is not a root of its defining polynomial");
    }
    gen_image_[d] = img;
  }
  if (compound_deg > 1) {
    Vec g = rzero();
    g[1] = 1;
    gen_image_[compound_deg] = g;
  }
  for (const auto& [d, img] : gen_image_) gen_image(d);
}

}  // namespace topoforge

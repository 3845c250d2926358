#include "builder.hpp"

#include <algorithm>

namespace topoforge {

namespace {

std::string canon_string(uint32_t p, const PrimeClosure::Canon& cn) {
  std::string s = "p:" + std::to_string(p) + ";d:" + std::to_string(cn.deg) + ";c:[";
  for (uint32_t k = 0; k < cn.deg; ++k) {
    if (k) s += ",";
    s += std::to_string(int(cn.c[k]));
  }
  s += "]";
  return s;
}

}  // namespace

std::vector<std::string> tau_candidates(PrimeClosure& field, uint64_t count, uint64_t seed) {
  // Enumerate a window, prefer high home degree (fresh extensions), break
  // ties by a seeded shuffle.  Candidates are kept as encodings so the
  // tower only grows when one is actually tried.
  std::vector<PrimeClosure::Canon> window;
  const uint64_t want = 2 * count + 8;
  for (uint64_t i = 1; window.size() < want; ++i) {
    window.push_back(field.enumerate_canon(i));
  }
  seeded_shuffle(window, seed);
  std::stable_sort(window.begin(), window.end(),
                   [](const PrimeClosure::Canon& a, const PrimeClosure::Canon& b) { return a.deg > b.deg; });
  if (window.size() > count) window.resize(count);
  std::vector<std::string> out;
  for (const auto& cn : window) out.push_back(canon_string(field.p(), cn));
  return out;
}

std::vector<std::string> tau_candidates(RationalField& field, uint64_t count, uint64_t seed) {
  (void)seed;  // the control field keeps plain enumeration order
  std::vector<std::string> out;
  for (uint64_t i = 1; out.size() < count; ++i) out.push_back(field.encode(field.enumerate(i)));
  return out;
}

}  // namespace topoforge

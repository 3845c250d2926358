#include "bruteforce.hpp"

#include <json.hpp>
#include <stdexcept>

#include "conditions.hpp"

namespace topoforge {

std::vector<FpRing::RootMult> FpRing::roots(const std::vector<Value>& poly, bool* complete) const {
  std::vector<Value> f = poly;
  while (!f.empty() && f.back() == 0) f.pop_back();
  if (f.empty()) throw std::invalid_argument("roots: zero polynomial");
  const size_t degree = f.size() - 1;
  std::vector<RootMult> out;
  for (uint32_t x = 0; x < ctx_.p(); ++x) {
    std::vector<Value> cur = f;
    uint32_t mult = 0;
    for (;;) {
      Value acc = 0;
      for (size_t i = cur.size(); i-- > 0;) acc = ctx_.add(ctx_.mul(acc, static_cast<Value>(x)), cur[i]);
      if (acc != 0 || cur.size() <= 1) break;
      std::vector<Value> quo(cur.size() - 1, 0);
      Value carry = 0;
      for (size_t i = cur.size(); i-- > 1;) {
        carry = ctx_.add(ctx_.mul(carry, static_cast<Value>(x)), cur[i]);
        quo[i - 1] = carry;
      }
      cur = std::move(quo);
      ++mult;
    }
    if (mult > 0) out.push_back(RootMult{static_cast<Value>(x), mult});
  }
  uint64_t total = 0;
  for (const auto& rm : out) total += rm.mult;
  if (complete) *complete = (total == degree);
  return out;
}

namespace {

using Stage = StageSet<FpRing>;

std::vector<Stage> subsets_with_zero(const FpRing& ring) {
  std::vector<Stage> out;
  const uint32_t p = ring.p();
  for (uint32_t mask = 0; mask < (1u << p); ++mask) {
    if (!(mask & 1u)) continue;  // must contain 0
    Stage s;
    for (uint32_t x = 0; x < p; ++x) {
      if (mask & (1u << x)) s.insert(ring, static_cast<uint8_t>(x));
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct SearchState {
  const FpRing* ring;
  uint32_t max_len;
  uint64_t checked = 0;
  std::vector<bool> can_nonzero;
  std::vector<std::vector<std::string>> best_witness;
  int64_t best_depth = -1;
};

void record(SearchState& st, const std::vector<Stage>& chain) {
  int64_t depth = -1;
  for (size_t k = 0; k < chain.size(); ++k) {
    if (!chain[k].is_zero_only(*st.ring)) {
      st.can_nonzero[k] = true;
      depth = static_cast<int64_t>(k);
    }
  }
  if (depth > st.best_depth) {
    st.best_depth = depth;
    st.best_witness.clear();
    for (const auto& s : chain) {
      std::vector<std::string> enc;
      for (const auto& v : s.sorted_items(*st.ring)) enc.push_back(st.ring->encode(v));
      st.best_witness.push_back(std::move(enc));
    }
  }
}

// extend the chain with every A_{next} that is a subset of the last stage,
// contains 0, and satisfies C_{next-1}(A_{next-1}, A_next)
void dfs(SearchState& st, std::vector<Stage>& chain) {
  FpRing ring = *st.ring;
  const size_t i = chain.size() - 1;  // condition index to check next
  if (i >= st.max_len) {
    // close with the {0} tail: C_i(A_i, {0}) must hold as well
    Stage tail = Stage::zero_stage(ring);
    ++st.checked;
    if (check_condition(ring, i, chain.back(), tail).ok()) record(st, chain);
    return;
  }
  bool extended_nondegenerate = false;
  const uint32_t p = ring.p();
  for (uint32_t mask = 1; mask < (1u << p); mask += 2) {  // subsets containing 0
    Stage cand;
    bool inside = true;
    for (uint32_t x = 0; x < p && inside; ++x) {
      if (mask & (1u << x)) {
        if (!chain.back().contains(ring, static_cast<uint8_t>(x))) inside = false;
        else cand.insert(ring, static_cast<uint8_t>(x));
      }
    }
    if (!inside) continue;
    ++st.checked;
    if (!check_condition(ring, i, chain.back(), cand).ok()) continue;
    if (cand.size() > 1) extended_nondegenerate = true;
    chain.push_back(std::move(cand));
    dfs(st, chain);
    chain.pop_back();
  }
  (void)extended_nondegenerate;
}

}  // namespace

BruteForceResult brute_force_suitable_search(const SearchSpaceSpec& spec) {
  if (spec.p != 2 && spec.p != 3 && spec.p != 5)
    throw std::invalid_argument("brute force search is capped to p in {2, 3, 5}");
  if (spec.max_len > 6) throw std::invalid_argument("brute force search is capped to L <= 6");
  FpRing ring(spec.p);
  SearchState st;
  st.ring = &ring;
  st.max_len = spec.max_len;
  st.can_nonzero.assign(spec.max_len + 1, false);

  for (Stage& a0 : subsets_with_zero(ring)) {
    std::vector<Stage> chain;
    chain.push_back(std::move(a0));
    dfs(st, chain);
  }

  BruteForceResult res;
  res.p = spec.p;
  res.max_len = spec.max_len;
  res.max_nondegenerate_depth = st.best_depth;
  res.stage_can_be_nonzero = st.can_nonzero;
  res.witness = st.best_witness;
  res.sequences_checked = st.checked;
  return res;
}

std::string BruteForceResult::to_json(bool pretty) const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["max_len"] = max_len;
  j["max_nondegenerate_depth"] = max_nondegenerate_depth;
  nlohmann::ordered_json forced = nlohmann::ordered_json::array();
  for (size_t k = 0; k < stage_can_be_nonzero.size(); ++k) {
    nlohmann::ordered_json e;
    e["stage"] = k;
    e["forced_zero"] = !stage_can_be_nonzero[k];
    forced.push_back(std::move(e));
  }
  j["stages"] = std::move(forced);
  j["witness"] = witness;
  j["sequences_checked"] = sequences_checked;
  return pretty ? j.dump(2) : j.dump();
}

}  // namespace topoforge

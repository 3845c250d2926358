#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace topoforge {

// A finite stage set over a ring: deterministic insertion order plus a
// hash index for membership.  Keys are re-derived when the underlying
// tower has grown since the last touch.
template <class R>
class StageSet {
 public:
  using Value = typename R::Value;

  StageSet() = default;

  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Value& at(size_t i) const { return items_[i]; }
  const std::vector<Value>& items() const { return items_; }

  // returns true when the value was new
  bool insert(const R& ring, const Value& v) {
    sync(ring);
    std::string k = key_str(ring, v);
    auto [it, fresh] = index_.emplace(std::move(k), items_.size());
    if (fresh) items_.push_back(ring.lifted(v));
    return fresh;
  }

  bool contains(const R& ring, const Value& v) const {
    const_cast<StageSet*>(this)->sync(ring);
    return index_.count(key_str(ring, v)) > 0;
  }

  bool is_zero_only(const R& ring) const {
    if (items_.size() != 1) return false;
    return ring.is_zero(items_[0]);
  }

  static StageSet zero_stage(const R& ring) {
    StageSet s;
    s.insert(ring, ring.zero());
    return s;
  }

  bool set_equal(const R& ring, const StageSet& other) const {
    if (items_.size() != other.items_.size()) return false;
    for (const Value& v : other.items_) {
      if (!contains(ring, v)) return false;
    }
    return true;
  }

  bool subset_of(const R& ring, const StageSet& other) const {
    for (const Value& v : items_) {
      if (!other.contains(ring, v)) return false;
    }
    return true;
  }

  // canonical (sorted) copies for serialization
  std::vector<Value> sorted_items(const R& ring) const {
    std::vector<Value> out = items_;
    for (auto& v : out) v = ring.lifted(v);
    std::sort(out.begin(), out.end(), [&](const Value& a, const Value& b) { return ring.less(a, b); });
    return out;
  }

 private:
  void sync(const R& ring) {
    if (ver_ == ring.version() && !index_.empty()) return;
    if (ver_ != ring.version()) {
      for (auto& v : items_) v = ring.lifted(v);
      ver_ = ring.version();
      rebuild(ring);
    } else if (index_.empty() && !items_.empty()) {
      rebuild(ring);
    }
  }

  void rebuild(const R& ring) {
    index_.clear();
    for (size_t i = 0; i < items_.size(); ++i) index_.emplace(key_str(ring, items_[i]), i);
  }

  static std::string key_str(const R& ring, const Value& v) {
    std::vector<uint8_t> k = ring.key(v);
    return std::string(k.begin(), k.end());
  }

  std::vector<Value> items_;
  std::unordered_map<std::string, size_t> index_;
  uint64_t ver_ = 0;
};

// An essentially finite sequence of stages: explicit prefix, {0} beyond.
template <class R>
struct StageSeq {
  std::vector<StageSet<R>> stages;

  StageSet<R> get(const R& ring, size_t i) const {
    if (i < stages.size()) return stages[i];
    return StageSet<R>::zero_stage(ring);
  }

  // first index from which every materialized stage is {0}
  size_t tail_index(const R& ring) const {
    size_t t = stages.size();
    while (t > 0 && stages[t - 1].is_zero_only(ring)) --t;
    return t;
  }

  static StageSeq all_zero(const R& ring, size_t prefix_len) {
    StageSeq s;
    for (size_t i = 0; i < prefix_len; ++i) s.stages.push_back(StageSet<R>::zero_stage(ring));
    return s;
  }
};

}  // namespace topoforge

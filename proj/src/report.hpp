#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace topoforge {

// One record per checked clause instance.  Witness carries the concrete
// failing tuple (or a short success note for the constructive clauses).
struct ClauseRecord {
  uint64_t index = 0;   // schedule index i
  uint32_t clause = 0;  // 1..7, or 100+k for axiom-level checks
  bool pass = false;
  std::string witness;
};

struct VerificationReport {
  std::vector<ClauseRecord> records;

  bool ok() const {
    for (const auto& r : records) {
      if (!r.pass) return false;
    }
    return true;
  }

  const ClauseRecord* first_failure() const {
    for (const auto& r : records) {
      if (!r.pass) return &r;
    }
    return nullptr;
  }

  void add(uint64_t index, uint32_t clause, bool pass, std::string witness = {}) {
    records.push_back(ClauseRecord{index, clause, pass, std::move(witness)});
  }

  void merge(const VerificationReport& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
  }

  std::string summary() const {
    size_t passed = 0;
    for (const auto& r : records)
      if (r.pass) ++passed;
    std::string s = std::to_string(passed) + "/" + std::to_string(records.size()) + " clause instances";
    if (const ClauseRecord* f = first_failure()) {
      s += "; first failure i=" + std::to_string(f->index) + " clause " + std::to_string(f->clause);
      if (!f->witness.empty()) s += " [" + f->witness + "]";
    }
    return s;
  }
};

}  // namespace topoforge

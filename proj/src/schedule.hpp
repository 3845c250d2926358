#pragma once

#include <cstdint>
#include <utility>

namespace topoforge {

// Diagonal (Cantor) unpairing: i -> (x, y), enumerating each diagonal by
// ascending x.  unpair(0) = (0,0), unpair(1) = (0,1), unpair(2) = (1,0).
inline std::pair<uint64_t, uint64_t> cantor_unpair(uint64_t i) {
  uint64_t s = 0;
  while ((s + 1) * (s + 2) / 2 <= i) ++s;
  const uint64_t x = i - s * (s + 1) / 2;
  return {x, s - x};
}

inline uint64_t cantor_pair(uint64_t x, uint64_t y) { return (x + y) * (x + y + 1) / 2 + x; }

// The fair schedules: a_i runs through the element enumeration and n_i
// through {2,3,4,...}, each value recurring infinitely often.
struct SchedulePoint {
  uint64_t element_index;  // a_i = enumerate(element_index)
  uint32_t n;              // n_i >= 2
};

inline SchedulePoint schedule_at(uint64_t i) {
  const auto [x, y] = cantor_unpair(i);
  (void)y;
  return SchedulePoint{x, static_cast<uint32_t>(2 + x)};
}

inline constexpr const char* kScheduleId = "cantor-diagonal-v1";

}  // namespace topoforge

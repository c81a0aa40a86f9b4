#pragma once

#include <atomic>
#include <cstdint>

namespace lfmhop::instrumentation {

/// Number of full passes over the N rows of an N-sized matrix performed by
/// library operations since process start. Lets callers assert that a code
/// path (e.g. the hopper's iteration loop) never rescans the data.
inline std::atomic<std::uint64_t>& row_scan_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

inline void count_row_scan() {
  row_scan_counter().fetch_add(1, std::memory_order_relaxed);
}

inline std::uint64_t row_scans() {
  return row_scan_counter().load(std::memory_order_relaxed);
}

}  // namespace lfmhop::instrumentation

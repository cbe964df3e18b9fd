#pragma once

#include <cstdint>
#include <functional>

namespace softedge {

/// Fixed block size of the deterministic parallel sample loop. Block
/// boundaries never depend on the worker count, so per-block partial results
/// (reduced afterwards in block order) are bit-identical for any scheduling.
inline constexpr std::int64_t kMcBlock = 4096;

/// Requested worker count resolved to an actual one (0 or negative means
/// hardware concurrency, floor 1).
int resolve_workers(int requested);

/// Runs fn(block_index, begin, end) over [0, total) split into kMcBlock-sized
/// blocks, distributed across `workers` threads. fn must only write state
/// owned by its block.
void for_each_block(std::int64_t total, int workers,
                    const std::function<void(std::int64_t, std::int64_t,
                                             std::int64_t)>& fn);

inline std::int64_t block_count(std::int64_t total) {
  return (total + kMcBlock - 1) / kMcBlock;
}

/// Compensated accumulator for the ordered cross-block reductions.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace softedge

#include "softedge/mc.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace softedge {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void for_each_block(std::int64_t total, int workers,
                    const std::function<void(std::int64_t, std::int64_t,
                                             std::int64_t)>& fn) {
  if (total <= 0) return;
  const std::int64_t blocks = block_count(total);
  workers = resolve_workers(workers);

  auto run_block = [&](std::int64_t b) {
    const std::int64_t begin = b * kMcBlock;
    const std::int64_t end = std::min(total, begin + kMcBlock);
    fn(b, begin, end);
  };

  if (workers == 1 || blocks == 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  std::atomic_flag error_latch = ATOMIC_FLAG_INIT;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= blocks || failed.load(std::memory_order_relaxed)) return;
        try {
          run_block(b);
        } catch (...) {
          if (!error_latch.test_and_set()) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace softedge

#ifndef LSKR_PARALLEL_HPP
#define LSKR_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace lskr {

namespace detail {
inline std::atomic<int>& thread_cap() {
  static std::atomic<int> cap{[] {
    if (const char* env = std::getenv("LSKR_THREADS")) {
      try {
        const int v = std::stoi(env);
        if (v >= 1) return v;
      } catch (...) {
      }
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }()};
  return cap;
}
}  // namespace detail

/// Worker count used by internal loops; LSKR_THREADS overrides the default.
inline int num_threads() { return detail::thread_cap().load(); }
inline void set_num_threads(int n) { detail::thread_cap().store(std::max(1, n)); }

/// Runs body(i) for i in [0, count) over contiguous blocks. The result must
/// not depend on the partition, so bodies only write to index-owned slots.
template <typename Body>
void parallel_for(long count, Body&& body) {
  const int workers = static_cast<int>(std::min<long>(num_threads(), std::max(1L, count / 8)));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const long block = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long begin = w * block;
    const long end = std::min(count, begin + block);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] {
      for (long i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lskr

#endif  // LSKR_PARALLEL_HPP

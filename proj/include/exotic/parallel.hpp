#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace exotic {

// Worker count: min(hardware_concurrency, EXOTIC_BSERIES_THREADS if set).
// Always at least 1.
inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("EXOTIC_BSERIES_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = std::min<long>(n, v);
  }
  return n;
}

// Runs fn(begin, end) over disjoint chunks of [0, count) on worker_count()
// threads. Chunk boundaries depend only on count and chunk_size, never on the
// number of workers, so chunk-local results can be combined in index order
// for thread-count-independent output.
template <class Fn>
void parallel_chunks(long count, long chunk_size, Fn&& fn) {
  if (count <= 0) return;
  const long nchunks = (count + chunk_size - 1) / chunk_size;
  unsigned workers = worker_count();
  if (workers <= 1 || nchunks == 1) {
    for (long c = 0; c < nchunks; ++c) {
      long lo = c * chunk_size;
      long hi = std::min(count, lo + chunk_size);
      fn(c, lo, hi);
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (long c = w; c < nchunks; c += workers) {
        long lo = c * chunk_size;
        long hi = std::min(count, lo + chunk_size);
        fn(c, lo, hi);
      }
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace exotic

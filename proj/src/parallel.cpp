// SPDX-License-Identifier: Apache-2.0
#include "tightembed/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tightembed {

int worker_count() {
  if (const char* env = std::getenv("TIGHT_EMBED_THREADS")) {
    const int requested = std::atoi(env);
    if (requested >= 1) return requested;
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  constexpr std::size_t kMinPerWorker = 1024;
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(worker_count()),
      std::max<std::size_t>(1, n / kMinPerWorker));
  if (workers <= 1 || n == 0) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace tightembed

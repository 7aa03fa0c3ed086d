#pragma once

#include <thread>
#include <vector>

namespace dga {

/// Runs fn(i) for i in [0, n) over `threads` workers on contiguous index
/// ranges. Each index must write only its own slots; results are then
/// identical for any thread count.
template <typename F>
void parallel_for(int n, int threads, F&& fn) {
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int begin = w * chunk;
    int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (int i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace dga

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace gwi {

/// Runs task(i) for i in [0, count) on a small pool and returns the results in
/// index order, so merges do not depend on scheduling. threads = 0 means
/// hardware concurrency.
template <class Result, class Task>
std::vector<Result> run_indexed(std::size_t count, unsigned threads, Task&& task) {
  std::vector<Result> out(count);
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) out[i] = task(i);
  };
  if (workers <= 1) {
    drain();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
  }
  return out;
}

}  // namespace gwi

// Copyright (c) the svs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVS_PARALLEL_HPP_
#define SVS_PARALLEL_HPP_

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace svs {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(i) for i in [begin, end) on up to `workers` threads. Iterations are
// claimed through a shared counter, so any scheduling produces the same set of
// calls; fn must not depend on which thread runs it. The first exception is
// rethrown on the calling thread after all workers have stopped.
template <typename Fn>
void parallel_for(std::int64_t begin, std::int64_t end, int workers, Fn&& fn) {
  const std::int64_t n = end - begin;
  if (n <= 0) return;
  workers = resolve_workers(workers);
  if (workers == 1 || n == 1) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  if (static_cast<std::int64_t>(workers) > n) workers = static_cast<int>(n);

  std::atomic<std::int64_t> next{begin};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= end) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(end, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace svs

#endif  // SVS_PARALLEL_HPP_

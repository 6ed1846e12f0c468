// Copyright 2026 The forgesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_PARALLEL_HPP
#define FORGE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace forge {

// Runs fn(0), ..., fn(n_chunks - 1) across up to `workers` threads.  Each
// chunk must write only to its own output slot, so results do not depend on
// the worker count or scheduling order.
inline void parallel_chunks(long n_chunks, int workers,
                            const std::function<void(long)>& fn) {
  if (n_chunks <= 0) {
    return;
  }
  const long use = std::min<long>(std::max(workers, 1), n_chunks);
  if (use == 1) {
    for (long c = 0; c < n_chunks; ++c) {
      fn(c);
    }
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(use));
  for (long w = 0; w < use; ++w) {
    pool.emplace_back([&] {
      for (long c; (c = next.fetch_add(1)) < n_chunks;) {
        fn(c);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

}  // namespace forge

#endif  // FORGE_PARALLEL_HPP

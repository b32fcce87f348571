// Copyright 2026 The tiermatch Authors
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

#ifndef TIERMATCH_SRC_PARALLEL_HPP_
#define TIERMATCH_SRC_PARALLEL_HPP_

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tiermatch::internal {

// Splits [0, n) into contiguous chunks and calls fn(begin, end) on each from
// up to `jobs` threads. The first exception thrown by a worker is rethrown.
template <class Fn>
void parallel_for(int64_t n, int jobs, Fn&& fn) {
  if (n <= 0) return;
  const int64_t workers = std::clamp<int64_t>(jobs, 1, n);
  if (workers == 1) {
    fn(int64_t{0}, n);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const int64_t chunk = (n + workers - 1) / workers;
  for (int64_t w = 0; w < workers; ++w) {
    const int64_t begin = w * chunk;
    const int64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tiermatch::internal

#endif  // TIERMATCH_SRC_PARALLEL_HPP_

/*
 * Copyright 2026 The WelfareLens Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WELFARELENS_PARALLEL_HPP_
#define WELFARELENS_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace welfarelens {

// Parallelism cap: WELFARELENS_THREADS if set to a positive integer, else
// the number of hardware threads.
inline std::size_t ThreadCount() {
  if (const char* env = std::getenv("WELFARELENS_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace parallel_internal {
// Set on pool workers; nested loops then run inline instead of spawning.
inline thread_local bool in_worker = false;
}  // namespace parallel_internal

// Runs body(i) for i in [0, count). Each index writes only its own output
// slot, so results do not depend on scheduling. If several bodies throw, the
// exception of the lowest index is rethrown.
template <typename Body>
void ParallelFor(std::size_t count, Body&& body, std::size_t threads = 0) {
  if (threads == 0) threads = ThreadCount();
  threads = std::min(threads, count);
  if (threads <= 1 || parallel_internal::in_worker) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&]() {
    parallel_internal::in_worker = true;
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace welfarelens

#endif  // WELFARELENS_PARALLEL_HPP_

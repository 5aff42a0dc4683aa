// Copyright 2026 The avoidlab Authors
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace avoidlab {

/*! \brief Splits [0, count) into contiguous chunks, one per worker, and
 * reduces the per-chunk results in chunk order.
 *
 * `body(i, acc)` folds item i into a chunk-local accumulator. Results are
 * independent of scheduling as long as `combine` is associative, which
 * holds for the integer counters used here.
 */
template <class Acc, class Body, class Combine>
Acc parallel_reduce(std::uint64_t count, Acc init, Body body, Combine combine, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count / 64, 1)));
  std::vector<Acc> partial(workers, init);
  std::vector<std::exception_ptr> errors(workers);
  auto run_chunk = [&](unsigned w) {
    const std::uint64_t lo = count * w / workers, hi = count * (w + 1) / workers;
    try {
      for (std::uint64_t i = lo; i < hi; ++i) body(i, partial[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run_chunk(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run_chunk, w);
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Acc out = init;
  for (auto &p : partial) out = combine(out, p);
  return out;
}

}  // namespace avoidlab

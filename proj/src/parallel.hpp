// Copyright 2026 The PASM Authors
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
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "pasm/op_counts.hpp"

namespace pasm::internal {

// Runs body(begin, end) over [0, rows) split into contiguous chunks. Op
// counts recorded on worker threads are folded into the caller's counters.
template <typename Body>
void for_each_row_chunk(std::size_t rows, unsigned threads, Body&& body) {
  const std::size_t workers =
      std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(rows, 1));
  if (workers == 1) {
    body(std::size_t{0}, rows);
    return;
  }
  std::vector<OpCounts> counts(workers);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (rows + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
      const std::size_t begin = std::min(rows, t * chunk);
      const std::size_t end = std::min(rows, begin + chunk);
      pool.emplace_back([&, t, begin, end] {
        OpCountScope scope;
        try {
          body(begin, end);
        } catch (...) {
          errors[t] = std::current_exception();
        }
        counts[t] = scope.delta();
      });
    }
  }
  for (const auto& c : counts) thread_op_counts() += c;
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace pasm::internal

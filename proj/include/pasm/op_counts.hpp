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

#include <cstdint>

namespace pasm {

// Per-thread instrumentation of the arithmetic performed by the dot and
// convolution paths. Multiplies counts full-width multiplications, adds
// counts accumulator additions, bin_writes counts PAS bin updates.
struct OpCounts {
  std::uint64_t multiplies = 0;
  std::uint64_t adds = 0;
  std::uint64_t bin_writes = 0;

  OpCounts& operator+=(const OpCounts& o) noexcept {
    multiplies += o.multiplies;
    adds += o.adds;
    bin_writes += o.bin_writes;
    return *this;
  }
  friend OpCounts operator-(OpCounts a, const OpCounts& b) noexcept {
    a.multiplies -= b.multiplies;
    a.adds -= b.adds;
    a.bin_writes -= b.bin_writes;
    return a;
  }
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

OpCounts& thread_op_counts() noexcept;
void reset_op_counts() noexcept;

// Captures the calling thread's counts between construction and delta().
class OpCountScope {
 public:
  OpCountScope() noexcept : start_(thread_op_counts()) {}
  OpCounts delta() const noexcept { return thread_op_counts() - start_; }

 private:
  OpCounts start_;
};

}  // namespace pasm

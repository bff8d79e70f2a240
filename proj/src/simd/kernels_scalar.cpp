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

#include "pasm/simd/kernels.hpp"

namespace pasm::simd::detail {

// Unsigned arithmetic gives the mod 2^64 wrap without signed overflow.

std::int64_t dot_i32_scalar(const std::int64_t* a, const std::int64_t* b,
                            std::size_t n) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<std::uint64_t>(a[i] * b[i]);
  }
  return static_cast<std::int64_t>(acc);
}

std::int64_t gather_dot_i32_scalar(const std::int64_t* images,
                                   const std::uint8_t* idx,
                                   const std::int64_t* table, std::size_t n) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<std::uint64_t>(images[i] * table[idx[i]]);
  }
  return static_cast<std::int64_t>(acc);
}

void bin_accumulate_scalar(const std::int64_t* images, const std::uint8_t* idx,
                           std::size_t n, std::int64_t* bins, std::size_t) {
  for (std::size_t i = 0; i < n; ++i) {
    auto& bin = bins[idx[i]];
    bin = static_cast<std::int64_t>(static_cast<std::uint64_t>(bin) +
                                    static_cast<std::uint64_t>(images[i]));
  }
}

}  // namespace pasm::simd::detail

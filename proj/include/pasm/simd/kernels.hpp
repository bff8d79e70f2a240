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

// Inner-loop kernels over int64 raw storage. Every kernel computes modulo
// 2^64; callers wrap the result to an accumulator width <= 64, which is
// exact because two's-complement wrap-around addition is a ring.
//
// Each kernel has a scalar reference and, where the target supports it,
// an AVX2 variant. The active table is chosen once at startup from CPUID
// and can be pinned with PASM_ISA=scalar|avx2 or set_active_isa().

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pasm::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  // sum(a[i] * b[i]) mod 2^64. Operands must lie in the int32 range.
  std::int64_t (*dot_i32)(const std::int64_t* a, const std::int64_t* b,
                          std::size_t n);

  // sum(images[i] * table[idx[i]]) mod 2^64; the weight-shared MAC inner
  // loop. Operands must lie in the int32 range, idx[i] < table size.
  std::int64_t (*gather_dot_i32)(const std::int64_t* images,
                                 const std::uint8_t* idx,
                                 const std::int64_t* table, std::size_t n);

  // bins[idx[i]] += images[i] mod 2^64; the PAS accumulate phase.
  // idx[i] < b, images unrestricted.
  void (*bin_accumulate)(const std::int64_t* images, const std::uint8_t* idx,
                         std::size_t n, std::int64_t* bins, std::size_t b);
};

const KernelTable& scalar_kernels() noexcept;
// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels() noexcept;

bool isa_supported(Isa isa) noexcept;
std::vector<Isa> supported_isas();

const KernelTable& active_kernels() noexcept;
Isa active_isa() noexcept;
// Throws Errc::invalid_argument if the ISA is not supported.
void set_active_isa(Isa isa);

// Restores the previously active ISA on destruction.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

namespace detail {
std::int64_t dot_i32_scalar(const std::int64_t* a, const std::int64_t* b,
                            std::size_t n);
std::int64_t gather_dot_i32_scalar(const std::int64_t* images,
                                   const std::uint8_t* idx,
                                   const std::int64_t* table, std::size_t n);
void bin_accumulate_scalar(const std::int64_t* images, const std::uint8_t* idx,
                           std::size_t n, std::int64_t* bins, std::size_t b);
#if defined(PASM_HAVE_AVX2)
std::int64_t dot_i32_avx2(const std::int64_t* a, const std::int64_t* b,
                          std::size_t n);
std::int64_t gather_dot_i32_avx2(const std::int64_t* images,
                                 const std::uint8_t* idx,
                                 const std::int64_t* table, std::size_t n);
void bin_accumulate_avx2(const std::int64_t* images, const std::uint8_t* idx,
                         std::size_t n, std::int64_t* bins, std::size_t b);
#endif
}  // namespace detail

}  // namespace pasm::simd

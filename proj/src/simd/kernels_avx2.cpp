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

#include <immintrin.h>

#include <cstring>

#include "pasm/simd/kernels.hpp"

namespace pasm::simd::detail {

namespace {

inline std::uint64_t hsum_epi64(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

inline __m256i loadu(const std::int64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// Four consecutive u8 indices widened to i32 lanes.
inline __m128i load_idx4_epi32(const std::uint8_t* p) {
  std::int32_t four;
  std::memcpy(&four, p, sizeof(four));
  return _mm_cvtepu8_epi32(_mm_cvtsi32_si128(four));
}

inline __m256i load_idx4_epi64(const std::uint8_t* p) {
  std::int32_t four;
  std::memcpy(&four, p, sizeof(four));
  return _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(four));
}

}  // namespace

// _mm256_mul_epi32 multiplies the sign-extended low 32 bits of each 64-bit
// lane, which is exact for int32-range operands.
std::int64_t dot_i32_avx2(const std::int64_t* a, const std::int64_t* b,
                          std::size_t n) {
  __m256i acc0 = _mm256_setzero_si256();
  __m256i acc1 = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_epi64(acc0, _mm256_mul_epi32(loadu(a + i), loadu(b + i)));
    acc1 = _mm256_add_epi64(acc1,
                            _mm256_mul_epi32(loadu(a + i + 4), loadu(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_epi64(acc0, _mm256_mul_epi32(loadu(a + i), loadu(b + i)));
  }
  std::uint64_t acc = hsum_epi64(_mm256_add_epi64(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<std::uint64_t>(a[i] * b[i]);
  return static_cast<std::int64_t>(acc);
}

std::int64_t gather_dot_i32_avx2(const std::int64_t* images,
                                 const std::uint8_t* idx,
                                 const std::int64_t* table, std::size_t n) {
  const auto* base = reinterpret_cast<const long long*>(table);
  __m256i acc0 = _mm256_setzero_si256();
  __m256i acc1 = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i w0 = _mm256_i32gather_epi64(base, load_idx4_epi32(idx + i), 8);
    const __m256i w1 = _mm256_i32gather_epi64(base, load_idx4_epi32(idx + i + 4), 8);
    acc0 = _mm256_add_epi64(acc0, _mm256_mul_epi32(loadu(images + i), w0));
    acc1 = _mm256_add_epi64(acc1, _mm256_mul_epi32(loadu(images + i + 4), w1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256i w0 = _mm256_i32gather_epi64(base, load_idx4_epi32(idx + i), 8);
    acc0 = _mm256_add_epi64(acc0, _mm256_mul_epi32(loadu(images + i), w0));
  }
  std::uint64_t acc = hsum_epi64(_mm256_add_epi64(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<std::uint64_t>(images[i] * table[idx[i]]);
  return static_cast<std::int64_t>(acc);
}

// Each lane owns a private copy of the b bins (interleaved as bin*4 + lane),
// so the four addresses in one step never collide. AVX2 has no scatter, so
// the updated lanes are written back individually; the private copies still
// break the load-add-store chain a scalar loop hits on repeated indices.
void bin_accumulate_avx2(const std::int64_t* images, const std::uint8_t* idx,
                         std::size_t n, std::int64_t* bins, std::size_t b) {
  std::size_t i = 0;
  if (n >= 16) {
    alignas(32) std::int64_t priv[4 * 256];
    std::memset(priv, 0, 4 * b * sizeof(std::int64_t));
    const auto* gbase = reinterpret_cast<const long long*>(priv);
    const __m256i lane = _mm256_setr_epi64x(0, 1, 2, 3);
    alignas(32) std::int64_t off[4];
    alignas(32) std::int64_t sum[4];
    for (; i + 4 <= n; i += 4) {
      const __m256i slot =
          _mm256_add_epi64(_mm256_slli_epi64(load_idx4_epi64(idx + i), 2), lane);
      const __m256i cur = _mm256_i64gather_epi64(gbase, slot, 8);
      _mm256_store_si256(reinterpret_cast<__m256i*>(sum),
                         _mm256_add_epi64(cur, loadu(images + i)));
      _mm256_store_si256(reinterpret_cast<__m256i*>(off), slot);
      priv[off[0]] = sum[0];
      priv[off[1]] = sum[1];
      priv[off[2]] = sum[2];
      priv[off[3]] = sum[3];
    }
    for (std::size_t k = 0; k < b; ++k) {
      const __m256i v =
          _mm256_load_si256(reinterpret_cast<const __m256i*>(priv + 4 * k));
      bins[k] = static_cast<std::int64_t>(static_cast<std::uint64_t>(bins[k]) +
                                          hsum_epi64(v));
    }
  }
  for (; i < n; ++i) {
    bins[idx[i]] = static_cast<std::int64_t>(static_cast<std::uint64_t>(bins[idx[i]]) +
                                             static_cast<std::uint64_t>(images[i]));
  }
}

}  // namespace pasm::simd::detail

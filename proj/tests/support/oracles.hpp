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

// Independent arithmetic for tests: arbitrary-precision integers and
// straight-line loops, sharing nothing with the library's int128 paths.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "pasm/codebook.hpp"
#include "pasm/error.hpp"
#include "pasm/fxp.hpp"
#include "pasm/tensor.hpp"

namespace pasm::testing {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big(wide_int v) {
  const bool neg = v < 0;
  wide_uint mag = neg ? wide_uint(0) - static_cast<wide_uint>(v) : static_cast<wide_uint>(v);
  BigInt out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return neg ? BigInt(-out) : out;
}

inline BigInt pow2(int bits) { return BigInt(1) << bits; }

// Two's-complement reinterpretation of the low `bits` bits.
inline BigInt big_wrap(BigInt v, int bits) {
  const BigInt m = pow2(bits);
  v %= m;  // sign follows the dividend
  if (v < 0) v += m;
  if (v >= pow2(bits - 1)) v -= m;
  return v;
}

// floor(v / 2^s)
inline BigInt big_floor_shift(const BigInt& v, int s) {
  if (s <= 0) return v << -s;
  const BigInt d = pow2(s);
  BigInt q = v / d;  // truncates toward zero
  if (v < 0 && q * d != v) q -= 1;
  return q;
}

inline wide_int narrow(const BigInt& v) {
  const BigInt lo_mask = (BigInt(1) << 64) - 1;
  const BigInt u = v < 0 ? BigInt(v + pow2(128)) : v;
  const auto hi = static_cast<std::uint64_t>((u >> 64) & lo_mask);
  const auto lo = static_cast<std::uint64_t>(u & lo_mask);
  return static_cast<wide_int>((static_cast<wide_uint>(hi) << 64) | lo);
}

inline BigInt oracle_dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  BigInt sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += BigInt(a[i]) * BigInt(b[i]);
  return sum;
}

// Exact valid convolution, product fraction bits; no wrap.
inline std::vector<BigInt> oracle_conv_exact(const Tensor3& in, const KernelSet& k) {
  const auto& s = k.shape();
  const std::size_t ow = in.width() - s.k + 1;
  const std::size_t oh = in.height() - s.k + 1;
  std::vector<BigInt> out(ow * oh * s.output_channels);
  for (std::size_t w = 0; w < ow; ++w)
    for (std::size_t h = 0; h < oh; ++h)
      for (std::size_t o = 0; o < s.output_channels; ++o) {
        BigInt sum = 0;
        for (std::size_t x = 0; x < s.k; ++x)
          for (std::size_t y = 0; y < s.k; ++y)
            for (std::size_t i = 0; i < s.input_channels; ++i)
              sum += BigInt(in.raws()[in.offset(w + x, h + y, i)]) *
                     BigInt(k.raws()[s.offset(o, x, y, i)]);
        out[(w * oh + h) * s.output_channels + o] = sum;
      }
  return out;
}

// Exact convolution reduced to the input format: shift off the kernel's
// fraction bits (floor) and wrap to the input width.
inline std::vector<std::int64_t> oracle_conv(const Tensor3& in, const KernelSet& k) {
  std::vector<std::int64_t> out;
  for (const auto& v : oracle_conv_exact(in, k)) {
    const BigInt r = big_wrap(big_floor_shift(v, k.format().frac_bits),
                              in.format().total_bits);
    out.push_back(static_cast<std::int64_t>(r));
  }
  return out;
}

// Uniform raw over the whole format (fmt <= 64 bits).
inline std::int64_t any_raw(std::mt19937_64& rng, QFormat fmt) {
  const auto lo = static_cast<std::int64_t>(fmt.min_raw());
  const auto hi = static_cast<std::int64_t>(fmt.max_raw());
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// Biased toward the edges of the range, where wrap bugs live.
inline std::int64_t edgy_raw(std::mt19937_64& rng, QFormat fmt) {
  const auto lo = static_cast<std::int64_t>(fmt.min_raw());
  const auto hi = static_cast<std::int64_t>(fmt.max_raw());
  switch (rng() % 6) {
    case 0: return lo;
    case 1: return hi;
    case 2: return 0;
    case 3: return static_cast<std::int64_t>(rng() % 4) - 2;
    default: return any_raw(rng, fmt);
  }
}

inline std::vector<std::int64_t> raws_of(std::mt19937_64& rng, QFormat fmt, std::size_t n,
                                         bool edgy = false) {
  std::vector<std::int64_t> v(n);
  for (auto& r : v) r = edgy ? edgy_raw(rng, fmt) : any_raw(rng, fmt);
  return v;
}

inline std::vector<Fxp> fxps(std::span<const std::int64_t> raws, QFormat fmt) {
  std::vector<Fxp> v;
  for (const auto r : raws) v.push_back(Fxp::from_raw(r, fmt));
  return v;
}

inline std::vector<std::uint8_t> indices_of(std::mt19937_64& rng, std::size_t b,
                                            std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (auto& i : v) i = static_cast<std::uint8_t>(rng() % b);
  return v;
}

inline Codebook codebook_of(std::mt19937_64& rng, QFormat fmt, std::size_t b) {
  return Codebook::from_raws(raws_of(rng, fmt, b, true), fmt);
}

inline Tensor3 tensor_of(std::mt19937_64& rng, std::size_t w, std::size_t h, std::size_t c,
                         QFormat fmt) {
  return Tensor3(w, h, c, fmt, raws_of(rng, fmt, w * h * c, true));
}

// The error code thrown by f, or nullopt if it returns normally.
template <typename F>
std::optional<Errc> errc_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace pasm::testing

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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace pasm {

// Raw storage for every fixed-point value. Formats up to 128 bits are
// representable so that 32-bit operands keep a full 2w product plus
// log2(n) guard bits.
__extension__ typedef __int128 wide_int;
__extension__ typedef unsigned __int128 wide_uint;

struct QFormat {
  static constexpr int kMaxBits = 128;
  // Tensors, codebooks and the SIMD kernels store raws as int64.
  static constexpr int kMaxStorageBits = 64;

  int total_bits = 32;
  int frac_bits = 0;

  // Throws Errc::invalid_argument unless 2 <= total <= 128 and
  // 0 <= frac < total.
  static QFormat make(int total, int frac);
  // Parses "Q24.8" (total.frac).
  static QFormat parse(std::string_view text);

  bool valid() const noexcept {
    return total_bits >= 2 && total_bits <= kMaxBits && frac_bits >= 0 &&
           frac_bits < total_bits;
  }
  int int_bits() const noexcept { return total_bits - frac_bits; }
  wide_int min_raw() const noexcept;
  wide_int max_raw() const noexcept;
  bool fits(wide_int raw) const noexcept {
    return raw >= min_raw() && raw <= max_raw();
  }
  std::string to_string() const;

  friend bool operator==(const QFormat&, const QFormat&) = default;
};

// Sign-extends the low `bits` bits of `raw` (two's-complement wrap).
wide_int wrap_to(wide_int raw, int bits) noexcept;

// ceil(log2(n)); 0 for n <= 1.
int guard_bits(std::size_t n) noexcept;

std::string to_string(wide_int value);

// A two's-complement fixed-point scalar; value == raw / 2^frac_bits.
class Fxp {
 public:
  Fxp() = default;

  static Fxp zero(QFormat fmt);
  // Throws Errc::overflow when raw is not representable in fmt.
  static Fxp from_raw(wide_int raw, QFormat fmt);
  static Fxp wrapped(wide_int raw, QFormat fmt);
  // Round half away from zero; throws Errc::overflow when out of range.
  static Fxp from_real(double x, QFormat fmt);

  wide_int raw() const noexcept { return raw_; }
  QFormat format() const noexcept { return fmt_; }

  double to_double() const noexcept;
  long double to_long_double() const noexcept;
  // Exact decimal expansion, e.g. "32.80078125".
  std::string to_decimal_string() const;

  friend bool operator==(const Fxp&, const Fxp&) = default;

 private:
  Fxp(wide_int raw, QFormat fmt) : raw_(raw), fmt_(fmt) {}

  wide_int raw_ = 0;
  QFormat fmt_{};
};

// Wrap-around addition; both operands must share a format.
Fxp add(const Fxp& a, const Fxp& b);
// As add, but throws Errc::overflow instead of wrapping.
Fxp add_checked(const Fxp& a, const Fxp& b);

// Exact product in Q{a.w + b.w, a.f + b.f}. Throws Errc::overflow if the
// product width exceeds QFormat::kMaxBits.
Fxp mul_full(const Fxp& a, const Fxp& b);
QFormat product_format(QFormat a, QFormat b);

// Fraction bits move by arithmetic shift (floor when narrowing), integer
// bits wrap when narrowing the width.
Fxp resize(const Fxp& a, QFormat fmt);
// As resize, but throws Errc::overflow when the integer part does not fit.
Fxp resize_checked(const Fxp& a, QFormat fmt);

// Shifts a raw between fraction widths without wrapping.
wide_int shift_frac(wide_int raw, int from_frac, int to_frac) noexcept;

}  // namespace pasm

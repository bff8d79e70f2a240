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

#include "pasm/fxp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pasm/error.hpp"

namespace pasm {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::format_mismatch: return "format mismatch";
    case Errc::overflow: return "overflow";
    case Errc::out_of_range: return "out of range";
    case Errc::shape_mismatch: return "shape mismatch";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::accumulator_too_narrow: return "accumulator too narrow";
    case Errc::infeasible_config: return "infeasible configuration";
    case Errc::parse: return "parse error";
    case Errc::io: return "i/o error";
  }
  return "unknown";
}

QFormat QFormat::make(int total, int frac) {
  QFormat fmt{total, frac};
  if (!fmt.valid()) {
    fail(Errc::invalid_argument,
         "invalid Q format: total=" + std::to_string(total) +
             " frac=" + std::to_string(frac));
  }
  return fmt;
}

QFormat QFormat::parse(std::string_view text) {
  auto bad = [&]() -> QFormat {
    fail(Errc::parse, "cannot parse Q format '" + std::string(text) +
                          "' (expected Qw.f, e.g. Q24.8)");
  };
  if (text.size() < 4 || text[0] != 'Q' || text[1] == '-' || text.find(".-") != text.npos) {
    return bad();
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return bad();
  int total = 0;
  int frac = 0;
  const auto* begin = text.data();
  auto r1 = std::from_chars(begin + 1, begin + dot, total);
  auto r2 = std::from_chars(begin + dot + 1, begin + text.size(), frac);
  if (r1.ec != std::errc{} || r1.ptr != begin + dot || r2.ec != std::errc{} ||
      r2.ptr != begin + text.size()) {
    return bad();
  }
  return make(total, frac);
}

wide_int QFormat::min_raw() const noexcept {
  return -static_cast<wide_int>(wide_uint{1} << (total_bits - 1));
}

wide_int QFormat::max_raw() const noexcept {
  return static_cast<wide_int>((wide_uint{1} << (total_bits - 1)) - 1);
}

std::string QFormat::to_string() const {
  return "Q" + std::to_string(total_bits) + "." + std::to_string(frac_bits);
}

wide_int wrap_to(wide_int raw, int bits) noexcept {
  if (bits >= 128) return raw;
  const int shift = 128 - bits;
  const wide_uint up = static_cast<wide_uint>(raw) << shift;
  return static_cast<wide_int>(up) >> shift;
}

int guard_bits(std::size_t n) noexcept {
  int bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

std::string to_string(wide_int value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  wide_uint mag = negative ? wide_uint{0} - static_cast<wide_uint>(value)
                           : static_cast<wide_uint>(value);
  std::string digits;
  while (mag != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Fxp Fxp::zero(QFormat fmt) { return from_raw(0, fmt); }

Fxp Fxp::from_raw(wide_int raw, QFormat fmt) {
  if (!fmt.valid()) fail(Errc::invalid_argument, "invalid Q format");
  if (!fmt.fits(raw)) {
    fail(Errc::overflow,
         "raw " + pasm::to_string(raw) + " not representable in " +
             fmt.to_string());
  }
  return Fxp(raw, fmt);
}

Fxp Fxp::wrapped(wide_int raw, QFormat fmt) {
  if (!fmt.valid()) fail(Errc::invalid_argument, "invalid Q format");
  return Fxp(wrap_to(raw, fmt.total_bits), fmt);
}

namespace {

// Exact for integral long doubles of magnitude below 2^127.
wide_int integral_to_wide(long double v) {
  const long double two64 = std::ldexp(1.0L, 64);
  const bool negative = v < 0;
  long double mag = negative ? -v : v;
  const long double hi = std::floor(mag / two64);
  const long double lo = mag - hi * two64;
  wide_uint out = (static_cast<wide_uint>(static_cast<std::uint64_t>(hi)) << 64) |
                  static_cast<std::uint64_t>(lo);
  return negative ? -static_cast<wide_int>(out) : static_cast<wide_int>(out);
}

}  // namespace

Fxp Fxp::from_real(double x, QFormat fmt) {
  if (!fmt.valid()) fail(Errc::invalid_argument, "invalid Q format");
  const long double scaled =
      std::round(std::ldexp(static_cast<long double>(x), fmt.frac_bits));
  const long double limit = std::ldexp(1.0L, fmt.total_bits - 1);
  if (!std::isfinite(scaled) || scaled < -limit || scaled >= limit) {
    fail(Errc::overflow,
         "value " + std::to_string(x) + " overflows " + fmt.to_string());
  }
  return Fxp(integral_to_wide(scaled), fmt);
}

long double Fxp::to_long_double() const noexcept {
  const wide_uint mag =
      raw_ < 0 ? wide_uint{0} - static_cast<wide_uint>(raw_)
               : static_cast<wide_uint>(raw_);
  const long double hi = static_cast<long double>(static_cast<std::uint64_t>(mag >> 64));
  const long double lo = static_cast<long double>(static_cast<std::uint64_t>(mag));
  const long double value =
      std::ldexp(std::ldexp(hi, 64) + lo, -fmt_.frac_bits);
  return raw_ < 0 ? -value : value;
}

double Fxp::to_double() const noexcept {
  return static_cast<double>(to_long_double());
}

std::string Fxp::to_decimal_string() const {
  const bool negative = raw_ < 0;
  const wide_uint mag = negative ? wide_uint{0} - static_cast<wide_uint>(raw_)
                                 : static_cast<wide_uint>(raw_);
  const int f = fmt_.frac_bits;
  const wide_uint int_part = f == 0 ? mag : mag >> f;
  wide_uint rem = f == 0 ? 0 : mag & ((wide_uint{1} << f) - 1);

  std::string digits;
  for (wide_uint v = int_part;; v /= 10) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    if (v < 10) break;
  }
  std::string out = negative ? "-" : "";
  out.append(digits.rbegin(), digits.rend());
  if (rem != 0) {
    out.push_back('.');
    const wide_uint mask = (wide_uint{1} << f) - 1;
    while (rem != 0) {
      // rem * 10 can exceed 128 bits when f > 124; carry the top bits.
      const wide_uint lo = static_cast<wide_uint>(static_cast<std::uint64_t>(rem)) * 10;
      const wide_uint hi = (rem >> 64) * 10 + (lo >> 64);
      const wide_uint low128 = (hi << 64) | static_cast<std::uint64_t>(lo);
      const wide_uint carry = hi >> 64;
      const wide_uint digit = (carry << (128 - f)) | (low128 >> f);
      out.push_back(static_cast<char>('0' + static_cast<int>(digit)));
      rem = low128 & mask;
    }
  }
  return out;
}

namespace {

void require_same_format(const Fxp& a, const Fxp& b, const char* op) {
  if (a.format() != b.format()) {
    fail(Errc::format_mismatch, std::string(op) + ": " +
                                    a.format().to_string() + " vs " +
                                    b.format().to_string());
  }
}

}  // namespace

Fxp add(const Fxp& a, const Fxp& b) {
  require_same_format(a, b, "add");
  const wide_uint sum =
      static_cast<wide_uint>(a.raw()) + static_cast<wide_uint>(b.raw());
  return Fxp::wrapped(static_cast<wide_int>(sum), a.format());
}

Fxp add_checked(const Fxp& a, const Fxp& b) {
  require_same_format(a, b, "add");
  wide_int sum = 0;
  if (__builtin_add_overflow(a.raw(), b.raw(), &sum) || !a.format().fits(sum)) {
    fail(Errc::overflow, "checked add overflows " + a.format().to_string());
  }
  return Fxp::from_raw(sum, a.format());
}

QFormat product_format(QFormat a, QFormat b) {
  if (a.total_bits + b.total_bits > QFormat::kMaxBits) {
    fail(Errc::overflow, "product of " + a.to_string() + " and " +
                             b.to_string() + " exceeds 128 bits");
  }
  return QFormat{a.total_bits + b.total_bits, a.frac_bits + b.frac_bits};
}

Fxp mul_full(const Fxp& a, const Fxp& b) {
  const QFormat fmt = product_format(a.format(), b.format());
  const wide_uint p =
      static_cast<wide_uint>(a.raw()) * static_cast<wide_uint>(b.raw());
  return Fxp::from_raw(static_cast<wide_int>(p), fmt);
}

wide_int shift_frac(wide_int raw, int from_frac, int to_frac) noexcept {
  if (to_frac >= from_frac) {
    return static_cast<wide_int>(static_cast<wide_uint>(raw)
                                 << (to_frac - from_frac));
  }
  return raw >> (from_frac - to_frac);
}

Fxp resize(const Fxp& a, QFormat fmt) {
  if (!fmt.valid()) fail(Errc::invalid_argument, "invalid Q format");
  return Fxp::wrapped(shift_frac(a.raw(), a.format().frac_bits, fmt.frac_bits),
                      fmt);
}

Fxp resize_checked(const Fxp& a, QFormat fmt) {
  if (!fmt.valid()) fail(Errc::invalid_argument, "invalid Q format");
  const int up = fmt.frac_bits - a.format().frac_bits;
  if (up > 0) {
    // The shifted value must still fit; compare against the unshifted bounds.
    const wide_int lo = fmt.min_raw() >> up;
    const wide_int hi = fmt.max_raw() >> up;
    if (a.raw() < lo || a.raw() > hi) {
      fail(Errc::overflow, "resize to " + fmt.to_string() + " overflows");
    }
  }
  const wide_int shifted = shift_frac(a.raw(), a.format().frac_bits, fmt.frac_bits);
  if (!fmt.fits(shifted)) {
    fail(Errc::overflow, "resize to " + fmt.to_string() + " overflows");
  }
  return Fxp::from_raw(shifted, fmt);
}

}  // namespace pasm

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

#include "pasm/pasm_core.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "parallel.hpp"
#include "pasm/error.hpp"
#include "pasm/op_counts.hpp"
#include "pasm/simd/kernels.hpp"

namespace pasm {

namespace {

void require_fits_128(int bits, const char* what) {
  if (bits > QFormat::kMaxBits) {
    fail(Errc::overflow, std::string(what) + " needs " + std::to_string(bits) +
                             " bits, above the 128-bit cap");
  }
}

QFormat common_format(std::span<const Fxp> values) {
  const QFormat fmt = values.front().format();
  for (const auto& v : values) {
    if (v.format() != fmt) fail(Errc::format_mismatch, "images must share one format");
  }
  require_storage_format(fmt, "image");
  return fmt;
}

std::vector<std::int64_t> raws_of(std::span<const Fxp> values) {
  std::vector<std::int64_t> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(static_cast<std::int64_t>(v.raw()));
  return out;
}

void require_indices(std::span<const std::uint8_t> idx, std::size_t b) {
  for (const auto k : idx) {
    if (k >= b) {
      fail(Errc::out_of_range, "bin index " + std::to_string(k) +
                                   " >= b=" + std::to_string(b));
    }
  }
}

void require_lengths(std::size_t images, std::size_t indices) {
  if (images != indices) {
    fail(Errc::shape_mismatch, std::to_string(images) + " images vs " +
                                   std::to_string(indices) + " bin indices");
  }
}

// Integer bits of out_fmt, full product fraction bits.
QFormat post_format(QFormat prod, QFormat out_fmt) {
  const int bits = out_fmt.int_bits() + prod.frac_bits;
  require_fits_128(bits, "post-pass accumulator");
  return QFormat{bits, prod.frac_bits};
}

// bins (already wrapped to their format) times the codebook, ascending k.
template <typename Bin>
wide_int multiply_bins(const Bin* bins, std::span<const std::int64_t> table,
                       int post_bits) {
  wide_uint acc = 0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    acc += static_cast<wide_uint>(bins[k]) * static_cast<wide_uint>(
                                                 static_cast<wide_int>(table[k]));
  }
  auto& counts = thread_op_counts();
  counts.multiplies += table.size();
  counts.adds += table.size();
  return wrap_to(static_cast<wide_int>(acc), post_bits);
}

void note_accumulates(std::size_t n) {
  auto& counts = thread_op_counts();
  counts.bin_writes += n;
  counts.adds += n;
}

}  // namespace

AccumulatorFormats guarded_formats(QFormat image, QFormat weight,
                                   std::size_t n, std::size_t b) {
  const int gn = guard_bits(n);
  const int bins_bits = image.total_bits + gn;
  const int post_bits = bins_bits + weight.total_bits + guard_bits(b);
  const int mac_bits = image.total_bits + weight.total_bits + gn;
  require_fits_128(post_bits, "post-pass accumulator");
  require_fits_128(mac_bits, "MAC accumulator");
  const int pf = image.frac_bits + weight.frac_bits;
  return AccumulatorFormats{QFormat::make(bins_bits, image.frac_bits),
                            QFormat::make(post_bits, pf),
                            QFormat::make(mac_bits, pf)};
}

PasState PasState::reset(std::size_t b, QFormat acc_fmt) {
  wci_for_bins(b);
  if (!acc_fmt.valid()) fail(Errc::invalid_argument, "invalid accumulator format");
  return PasState(std::vector<wide_int>(b, 0), acc_fmt);
}

Fxp PasState::bin(std::size_t k) const {
  if (k >= bins_.size()) {
    fail(Errc::out_of_range, "bin " + std::to_string(k) + " >= b");
  }
  return Fxp::from_raw(bins_[k], fmt_);
}

void PasState::accumulate(const Fxp& image, std::size_t bin_index) {
  if (bin_index >= bins_.size()) {
    fail(Errc::out_of_range, "bin index " + std::to_string(bin_index) +
                                 " >= b=" + std::to_string(bins_.size()));
  }
  if (image.format().frac_bits != fmt_.frac_bits) {
    fail(Errc::format_mismatch, "image " + image.format().to_string() +
                                    " vs bin format " + fmt_.to_string());
  }
  auto& bin = bins_[bin_index];
  bin = wrap_to(static_cast<wide_int>(static_cast<wide_uint>(bin) +
                                      static_cast<wide_uint>(image.raw())),
                fmt_.total_bits);
  note_accumulates(1);
}

void PasState::accumulate(std::span<const std::int64_t> images,
                          QFormat image_fmt,
                          std::span<const std::uint8_t> bin_indices) {
  require_lengths(images.size(), bin_indices.size());
  require_indices(bin_indices, bins_.size());
  if (image_fmt.frac_bits != fmt_.frac_bits) {
    fail(Errc::format_mismatch, "image " + image_fmt.to_string() +
                                    " vs bin format " + fmt_.to_string());
  }
  const std::size_t n = images.size();
  if (fmt_.total_bits <= 64) {
    std::array<std::int64_t, 256> narrow{};
    for (std::size_t k = 0; k < bins_.size(); ++k) {
      narrow[k] = static_cast<std::int64_t>(bins_[k]);
    }
    simd::active_kernels().bin_accumulate(images.data(), bin_indices.data(), n,
                                          narrow.data(), bins_.size());
    for (std::size_t k = 0; k < bins_.size(); ++k) {
      bins_[k] = wrap_to(narrow[k], fmt_.total_bits);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      auto& bin = bins_[bin_indices[i]];
      bin = static_cast<wide_int>(static_cast<wide_uint>(bin) +
                                  static_cast<wide_uint>(static_cast<wide_int>(images[i])));
    }
    for (auto& bin : bins_) bin = wrap_to(bin, fmt_.total_bits);
  }
  note_accumulates(n);
}

PasState pas_reset(std::size_t b, QFormat acc_fmt) {
  return PasState::reset(b, acc_fmt);
}

PasState pas_accumulate(PasState state, const Fxp& image, std::size_t bin_index) {
  state.accumulate(image, bin_index);
  return state;
}

Fxp pasm_multiply_phase(const PasState& state, const Codebook& cb,
                        QFormat out_fmt) {
  if (cb.size() != state.size()) {
    fail(Errc::shape_mismatch, "codebook has " + std::to_string(cb.size()) +
                                   " entries, PAS has " +
                                   std::to_string(state.size()) + " bins");
  }
  if (!out_fmt.valid()) fail(Errc::invalid_argument, "invalid output format");
  const QFormat prod = product_format(state.format(), cb.format());
  const QFormat post = post_format(prod, out_fmt);
  const wide_int sum =
      multiply_bins(state.raw_bins().data(), cb.raws(), post.total_bits);
  return resize(Fxp::from_raw(sum, post), out_fmt);
}

Fxp pasm_dot(std::span<const Fxp> images,
             std::span<const std::uint8_t> bin_indices, const Codebook& cb,
             QFormat acc_fmt, QFormat out_fmt) {
  require_lengths(images.size(), bin_indices.size());
  PasState state = PasState::reset(cb.size(), acc_fmt);
  if (!images.empty()) {
    const QFormat image_fmt = common_format(images);
    state.accumulate(raws_of(images), image_fmt, bin_indices);
  }
  return pasm_multiply_phase(state, cb, out_fmt);
}

Fxp ws_mac_dot(std::span<const Fxp> images,
               std::span<const std::uint8_t> bin_indices, const Codebook& cb,
               QFormat acc_fmt, QFormat out_fmt) {
  require_lengths(images.size(), bin_indices.size());
  require_indices(bin_indices, cb.size());
  if (!acc_fmt.valid() || !out_fmt.valid()) {
    fail(Errc::invalid_argument, "invalid accumulator format");
  }
  if (images.empty()) return resize(Fxp::zero(acc_fmt), out_fmt);

  const QFormat image_fmt = common_format(images);
  const QFormat prod = product_format(image_fmt, cb.format());
  if (acc_fmt.frac_bits != prod.frac_bits) {
    fail(Errc::format_mismatch, "MAC accumulator " + acc_fmt.to_string() +
                                    " must carry the product's " +
                                    std::to_string(prod.frac_bits) +
                                    " fraction bits");
  }
  const auto raws = raws_of(images);
  const auto table = cb.raws();
  const std::size_t n = raws.size();
  wide_int sum = 0;
  if (image_fmt.total_bits <= 32 && cb.format().total_bits <= 32 &&
      acc_fmt.total_bits <= 64) {
    sum = simd::active_kernels().gather_dot_i32(raws.data(), bin_indices.data(),
                                                table.data(), n);
  } else {
    wide_uint acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += static_cast<wide_uint>(static_cast<wide_int>(raws[i]) *
                                    table[bin_indices[i]]);
    }
    sum = static_cast<wide_int>(acc);
  }
  auto& counts = thread_op_counts();
  counts.multiplies += n;
  counts.adds += n;
  return resize(Fxp::wrapped(sum, acc_fmt), out_fmt);
}

WsMacState::WsMacState(const Codebook& cb, QFormat acc_fmt)
    : cb_(&cb), acc_fmt_(acc_fmt) {
  if (!acc_fmt.valid()) fail(Errc::invalid_argument, "invalid accumulator format");
}

void WsMacState::step(const Fxp& image, std::size_t bin_index) {
  const Fxp product = mul_full(image, cb_->weight(bin_index));
  if (product.format().frac_bits != acc_fmt_.frac_bits) {
    fail(Errc::format_mismatch, "MAC accumulator " + acc_fmt_.to_string() +
                                    " vs product " + product.format().to_string());
  }
  acc_ = wrap_to(static_cast<wide_int>(static_cast<wide_uint>(acc_) +
                                       static_cast<wide_uint>(product.raw())),
                 acc_fmt_.total_bits);
  auto& counts = thread_op_counts();
  ++counts.multiplies;
  ++counts.adds;
}

Tensor3 pasm_conv2d(const Tensor3& input, const EncodedKernels& enc,
                    const Codebook& cb, QFormat acc_fmt, QFormat out_fmt,
                    ConvOptions options) {
  const KernelShape& ks = enc.shape;
  if (enc.indices.size() != ks.size()) {
    fail(Errc::shape_mismatch, "index tensor length does not match shape");
  }
  if (input.channels() != ks.input_channels) {
    fail(Errc::shape_mismatch,
         "input has " + std::to_string(input.channels()) +
             " channels, kernels expect " + std::to_string(ks.input_channels));
  }
  if (ks.k == 0 || ks.output_channels == 0 || ks.input_channels == 0) {
    fail(Errc::shape_mismatch, "kernel dimensions must be positive");
  }
  if (input.width() < ks.k || input.height() < ks.k) {
    fail(Errc::shape_mismatch, "kernel size " + std::to_string(ks.k) +
                                   " exceeds input " +
                                   std::to_string(input.width()) + "x" +
                                   std::to_string(input.height()));
  }
  require_indices(enc.indices, cb.size());
  if (!acc_fmt.valid() || !out_fmt.valid()) {
    fail(Errc::invalid_argument, "invalid accumulator format");
  }
  if (acc_fmt.frac_bits != input.format().frac_bits) {
    fail(Errc::format_mismatch, "bin format " + acc_fmt.to_string() +
                                    " must carry the input's fraction bits");
  }
  const QFormat prod = product_format(acc_fmt, cb.format());
  if (out_fmt.frac_bits != prod.frac_bits) {
    fail(Errc::format_mismatch, "post-pass format " + out_fmt.to_string() +
                                    " must carry the product's " +
                                    std::to_string(prod.frac_bits) +
                                    " fraction bits");
  }
  const std::size_t n = ks.k * ks.k * ks.input_channels;
  const std::size_t b = cb.size();
  const int need_bins = input.format().total_bits + guard_bits(n);
  const int need_post = acc_fmt.total_bits + cb.format().total_bits + guard_bits(b);
  if (acc_fmt.total_bits < need_bins) {
    fail(Errc::accumulator_too_narrow,
         "bin format " + acc_fmt.to_string() + " needs at least " +
             std::to_string(need_bins) + " bits for " + std::to_string(n) +
             " accumulations");
  }
  if (out_fmt.total_bits < need_post) {
    fail(Errc::accumulator_too_narrow,
         "post-pass format " + out_fmt.to_string() + " needs at least " +
             std::to_string(need_post) + " bits");
  }

  const std::size_t out_w = input.width() - ks.k + 1;
  const std::size_t out_h = input.height() - ks.k + 1;
  Tensor3 out(out_w, out_h, ks.output_channels, input.format());

  const std::size_t run = ks.k * ks.input_channels;
  const int bin_bits = acc_fmt.total_bits;
  const int shift = out_fmt.frac_bits - input.format().frac_bits;
  const int out_bits = input.format().total_bits;
  const auto in = input.raws();
  const auto table = cb.raws();
  const std::uint8_t* idx = enc.indices.data();
  auto dst = out.raws();

  internal::for_each_row_chunk(out_w, options.threads, [&](std::size_t w0,
                                                           std::size_t w1) {
    const auto& kern = simd::active_kernels();
    std::array<std::int64_t, 256> narrow{};
    std::array<wide_int, 256> wide{};
    for (std::size_t w = w0; w < w1; ++w) {
      for (std::size_t h = 0; h < out_h; ++h) {
        for (std::size_t o = 0; o < ks.output_channels; ++o) {
          wide_int result = 0;
          if (bin_bits <= 64) {
            std::fill_n(narrow.begin(), b, 0);
            for (std::size_t x = 0; x < ks.k; ++x) {
              kern.bin_accumulate(&in[input.offset(w + x, h, 0)],
                                  idx + ks.offset(o, x, 0, 0), run,
                                  narrow.data(), b);
            }
            for (std::size_t k = 0; k < b; ++k) {
              narrow[k] = static_cast<std::int64_t>(wrap_to(narrow[k], bin_bits));
            }
            result = multiply_bins(narrow.data(), table, out_fmt.total_bits);
          } else {
            std::fill_n(wide.begin(), b, 0);
            for (std::size_t x = 0; x < ks.k; ++x) {
              const std::int64_t* src = &in[input.offset(w + x, h, 0)];
              const std::uint8_t* sel = idx + ks.offset(o, x, 0, 0);
              for (std::size_t j = 0; j < run; ++j) wide[sel[j]] += src[j];
            }
            for (std::size_t k = 0; k < b; ++k) wide[k] = wrap_to(wide[k], bin_bits);
            result = multiply_bins(wide.data(), table, out_fmt.total_bits);
          }
          dst[out.offset(w, h, o)] =
              static_cast<std::int64_t>(wrap_to(result >> shift, out_bits));
        }
      }
      note_accumulates(out_h * ks.output_channels * n);
    }
  });
  return out;
}

}  // namespace pasm

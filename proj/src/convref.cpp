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

#include "pasm/convref.hpp"

#include <string>
#include <vector>

#include "parallel.hpp"
#include "pasm/error.hpp"
#include "pasm/op_counts.hpp"
#include "pasm/simd/kernels.hpp"

namespace pasm {

int required_dot_acc_bits(QFormat image, QFormat weight, std::size_t n) {
  return image.total_bits + weight.total_bits + guard_bits(n);
}

namespace {

// Sum of products mod 2^128, before wrapping to the accumulator width.
wide_int sum_products(const std::int64_t* a, const std::int64_t* b,
                      std::size_t n, bool narrow) {
  if (narrow) return simd::active_kernels().dot_i32(a, b, n);
  wide_uint acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<wide_uint>(static_cast<wide_int>(a[i]) * b[i]);
  }
  return static_cast<wide_int>(acc);
}

bool kernel_path(QFormat a, QFormat b, int acc_bits) {
  return a.total_bits <= 32 && b.total_bits <= 32 && acc_bits <= 64;
}

QFormat common_format(std::span<const Fxp> values, const char* what) {
  const QFormat fmt = values.front().format();
  for (const auto& v : values) {
    if (v.format() != fmt) {
      fail(Errc::format_mismatch, std::string(what) + " must share one format");
    }
  }
  require_storage_format(fmt, what);
  return fmt;
}

std::vector<std::int64_t> raws_of(std::span<const Fxp> values) {
  std::vector<std::int64_t> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(static_cast<std::int64_t>(v.raw()));
  return out;
}

}  // namespace

wide_int dot_raw(std::span<const std::int64_t> images, QFormat image_fmt,
                 std::span<const std::int64_t> weights, QFormat weight_fmt,
                 int acc_bits) {
  if (images.size() != weights.size()) {
    fail(Errc::shape_mismatch, "dot: " + std::to_string(images.size()) +
                                   " images vs " +
                                   std::to_string(weights.size()) + " weights");
  }
  const std::size_t n = images.size();
  auto& counts = thread_op_counts();
  counts.multiplies += n;
  counts.adds += n;
  const wide_int sum = sum_products(images.data(), weights.data(), n,
                                    kernel_path(image_fmt, weight_fmt, acc_bits));
  return wrap_to(sum, acc_bits);
}

Fxp dot_ref(std::span<const Fxp> images, std::span<const Fxp> weights,
            QFormat acc_fmt) {
  if (images.size() != weights.size()) {
    fail(Errc::shape_mismatch, "dot: " + std::to_string(images.size()) +
                                   " images vs " +
                                   std::to_string(weights.size()) + " weights");
  }
  if (!acc_fmt.valid()) fail(Errc::invalid_argument, "invalid accumulator format");
  if (images.empty()) return Fxp::zero(acc_fmt);

  const QFormat image_fmt = common_format(images, "images");
  const QFormat weight_fmt = common_format(weights, "weights");
  const QFormat prod = product_format(image_fmt, weight_fmt);
  if (acc_fmt.frac_bits != prod.frac_bits) {
    fail(Errc::format_mismatch, "accumulator " + acc_fmt.to_string() +
                                    " must carry the product's " +
                                    std::to_string(prod.frac_bits) +
                                    " fraction bits");
  }
  const auto a = raws_of(images);
  const auto b = raws_of(weights);
  return Fxp::from_raw(dot_raw(a, image_fmt, b, weight_fmt, acc_fmt.total_bits),
                       acc_fmt);
}

Tensor3 conv2d_ref(const Tensor3& input, const KernelSet& kernels,
                   QFormat acc_fmt, ConvOptions options) {
  const KernelShape& ks = kernels.shape();
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
  if (!acc_fmt.valid()) fail(Errc::invalid_argument, "invalid accumulator format");
  const QFormat prod = product_format(input.format(), kernels.format());
  if (acc_fmt.frac_bits != prod.frac_bits) {
    fail(Errc::format_mismatch, "accumulator " + acc_fmt.to_string() +
                                    " must carry the product's " +
                                    std::to_string(prod.frac_bits) +
                                    " fraction bits");
  }
  const std::size_t n = ks.k * ks.k * ks.input_channels;
  const int need = required_dot_acc_bits(input.format(), kernels.format(), n);
  if (acc_fmt.total_bits < need) {
    fail(Errc::accumulator_too_narrow,
         "accumulator " + acc_fmt.to_string() + " needs at least " +
             std::to_string(need) + " bits for " + std::to_string(n) +
             " products");
  }

  const std::size_t out_w = input.width() - ks.k + 1;
  const std::size_t out_h = input.height() - ks.k + 1;
  Tensor3 out(out_w, out_h, ks.output_channels, input.format());

  const bool narrow = kernel_path(input.format(), kernels.format(), acc_fmt.total_bits);
  const std::size_t run = ks.k * ks.input_channels;  // contiguous y,i span
  const int shift = prod.frac_bits - input.format().frac_bits;
  const int out_bits = input.format().total_bits;
  const auto in = input.raws();
  const auto kr = kernels.raws();
  auto dst = out.raws();

  internal::for_each_row_chunk(out_w, options.threads, [&](std::size_t w0,
                                                           std::size_t w1) {
    for (std::size_t w = w0; w < w1; ++w) {
      for (std::size_t h = 0; h < out_h; ++h) {
        for (std::size_t o = 0; o < ks.output_channels; ++o) {
          wide_uint sum = 0;
          for (std::size_t x = 0; x < ks.k; ++x) {
            sum += static_cast<wide_uint>(
                sum_products(&in[input.offset(w + x, h, 0)],
                             &kr[ks.offset(o, x, 0, 0)], run, narrow));
          }
          const wide_int acc = wrap_to(static_cast<wide_int>(sum), acc_fmt.total_bits);
          dst[out.offset(w, h, o)] =
              static_cast<std::int64_t>(wrap_to(acc >> shift, out_bits));
        }
      }
      auto& counts = thread_op_counts();
      counts.multiplies += out_h * ks.output_channels * n;
      counts.adds += out_h * ks.output_channels * n;
    }
  });
  return out;
}

}  // namespace pasm

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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pasm/codebook.hpp"
#include "pasm/convref.hpp"
#include "pasm/fxp.hpp"
#include "pasm/tensor.hpp"

namespace pasm {

// Accumulator formats under which every dot/convolution path is exact for
// n terms and b bins:
//   bins: image.w + ceil(log2 n) bits, image fraction bits
//   post: bins.w + weight.w + ceil(log2 b) bits, product fraction bits
//   mac:  image.w + weight.w + ceil(log2 n) bits, product fraction bits
struct AccumulatorFormats {
  QFormat bins;
  QFormat post;
  QFormat mac;
};

AccumulatorFormats guarded_formats(QFormat image, QFormat weight,
                                   std::size_t n, std::size_t b);

// The b-entry register file of one PAS unit. Each bin holds the running sum
// of the image values whose weight index selected it.
class PasState {
 public:
  // All bins zero. b must be a power of two in [2, 256].
  static PasState reset(std::size_t b, QFormat acc_fmt);

  std::size_t size() const noexcept { return bins_.size(); }
  QFormat format() const noexcept { return fmt_; }
  Fxp bin(std::size_t k) const;
  std::span<const wide_int> raw_bins() const noexcept { return bins_; }

  // bins[bin_index] += image, wrapping in the accumulator format. The image
  // must carry the accumulator's fraction bits.
  void accumulate(const Fxp& image, std::size_t bin_index);

  // Streams a run of (image, index) pairs. Indices are validated before any
  // bin changes.
  void accumulate(std::span<const std::int64_t> images, QFormat image_fmt,
                  std::span<const std::uint8_t> bin_indices);

  friend bool operator==(const PasState&, const PasState&) = default;

 private:
  PasState(std::vector<wide_int> bins, QFormat fmt)
      : bins_(std::move(bins)), fmt_(fmt) {}

  std::vector<wide_int> bins_;
  QFormat fmt_{};
};

PasState pas_reset(std::size_t b, QFormat acc_fmt);
PasState pas_accumulate(PasState state, const Fxp& image, std::size_t bin_index);

// sum_k bins[k] * cb.weight(k) in ascending k: exactly b multiplications.
// Products accumulate with out_fmt's integer bits and full product fraction
// bits, then resize to out_fmt.
Fxp pasm_multiply_phase(const PasState& state, const Codebook& cb,
                        QFormat out_fmt);

// Accumulate phase into bins in acc_fmt followed by the multiply phase.
Fxp pasm_dot(std::span<const Fxp> images,
             std::span<const std::uint8_t> bin_indices, const Codebook& cb,
             QFormat acc_fmt, QFormat out_fmt);

// Weight-shared MAC baseline: look up cb.weight(index), multiply with the
// image, accumulate in acc_fmt (product fraction bits), resize to out_fmt.
Fxp ws_mac_dot(std::span<const Fxp> images,
               std::span<const std::uint8_t> bin_indices, const Codebook& cb,
               QFormat acc_fmt, QFormat out_fmt);

// A single weight-shared MAC unit stepped one input pair at a time.
class WsMacState {
 public:
  WsMacState(const Codebook& cb, QFormat acc_fmt);

  void step(const Fxp& image, std::size_t bin_index);
  Fxp accumulator() const { return Fxp::from_raw(acc_, acc_fmt_); }
  Fxp result(QFormat out_fmt) const { return resize(accumulator(), out_fmt); }

 private:
  const Codebook* cb_;
  QFormat acc_fmt_;
  wide_int acc_ = 0;
};

// Per output element, runs pasm_dot over the K*K*c window. Bins use acc_fmt
// (input fraction bits), the multiply phase out_fmt (product fraction
// bits); the result is resized to the input format. Bit-equal to
// conv2d_ref(input, decode(enc), ...) whenever both satisfy their
// guard-bit rules, which are checked here.
Tensor3 pasm_conv2d(const Tensor3& input, const EncodedKernels& enc,
                    const Codebook& cb, QFormat acc_fmt, QFormat out_fmt,
                    ConvOptions options = {});

}  // namespace pasm

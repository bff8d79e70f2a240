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

#include "pasm/fxp.hpp"
#include "pasm/tensor.hpp"

namespace pasm {

struct ConvOptions {
  // Output rows are split across this many worker threads. Results are
  // bit-identical for every thread count.
  unsigned threads = 1;
};

// Width that makes wrap-around accumulation of n products exact:
// image.w + weight.w + ceil(log2 n).
int required_dot_acc_bits(QFormat image, QFormat weight, std::size_t n);

// sum(images[i] * weights[i]) with full-width products, accumulated with
// wrap-around in acc_fmt. acc_fmt.frac_bits must equal the product's
// fraction bits. Exactness needs acc_fmt to satisfy required_dot_acc_bits;
// narrower accumulators wrap.
Fxp dot_ref(std::span<const Fxp> images, std::span<const Fxp> weights,
            QFormat acc_fmt);

// Raw-level form used by the convolution paths; returns the wrapped raw.
wide_int dot_raw(std::span<const std::int64_t> images, QFormat image_fmt,
                 std::span<const std::int64_t> weights, QFormat weight_fmt,
                 int acc_bits);

// Valid-mode multi-channel 2-D convolution, stride 1:
//   out[w][h][o] = sum_{x,y,i} input[w+x][h+y][i] * kernels[o][x][y][i]
// accumulated in acc_fmt and resized to the input format. Output is
// (width-K+1) x (height-K+1) x output_channels.
Tensor3 conv2d_ref(const Tensor3& input, const KernelSet& kernels,
                   QFormat acc_fmt, ConvOptions options = {});

}  // namespace pasm

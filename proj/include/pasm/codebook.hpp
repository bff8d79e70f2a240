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

#include "pasm/fxp.hpp"
#include "pasm/tensor.hpp"

namespace pasm {

enum class BinningMethod { uniform_range, lloyd_kmeans };

// b = 2^wci shared weight values in one storage format. Index k selects
// weights[k]; 1 <= wci <= 8.
class Codebook {
 public:
  explicit Codebook(std::vector<Fxp> weights);
  static Codebook from_raws(std::vector<std::int64_t> raws, QFormat fmt);

  std::size_t size() const noexcept { return raws_.size(); }
  int wci() const noexcept { return wci_; }
  QFormat format() const noexcept { return fmt_; }

  Fxp weight(std::size_t k) const;
  std::span<const std::int64_t> raws() const noexcept { return raws_; }

  // Index of the nearest codeword by absolute difference; ties go to the
  // lower index.
  std::size_t nearest(std::int64_t raw) const noexcept;

  friend bool operator==(const Codebook&, const Codebook&) = default;

 private:
  Codebook(std::vector<std::int64_t> raws, QFormat fmt);

  std::vector<std::int64_t> raws_;
  QFormat fmt_{};
  int wci_ = 0;
};

// log2(b); throws Errc::invalid_argument unless b is a power of two in
// [2, 256].
int wci_for_bins(std::size_t b);

struct LloydTrace {
  // Total within-cluster squared error (raw units) after each assignment.
  std::vector<long double> sse;
  int iterations = 0;
  bool converged = false;
};

inline constexpr int kLloydMaxIterations = 100;

// Uniform-range: centers of b equal-width intervals over [min, max].
// Lloyd: k-means from the uniform-range initialisation until the
// assignment is a fixpoint or kLloydMaxIterations passes. Codewords are
// rounded half away from zero into the weights' format.
Codebook build_codebook(std::span<const Fxp> weights, std::size_t b,
                        BinningMethod method = BinningMethod::uniform_range,
                        LloydTrace* trace = nullptr);
Codebook build_codebook(std::span<const std::int64_t> raws, QFormat fmt,
                        std::size_t b,
                        BinningMethod method = BinningMethod::uniform_range,
                        LloydTrace* trace = nullptr);

struct EncodedKernels {
  KernelShape shape;
  std::vector<std::uint8_t> indices;  // row-major [O][K][K][I], each < b
  Codebook codebook;
};

EncodedKernels encode(const KernelSet& weights, const Codebook& cb);
KernelSet decode(const EncodedKernels& enc);

}  // namespace pasm

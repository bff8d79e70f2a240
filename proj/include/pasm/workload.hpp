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

#include <cstdint>
#include <random>

#include "pasm/codebook.hpp"
#include "pasm/fxp.hpp"
#include "pasm/tensor.hpp"

namespace pasm {

// Seeded generator for random workloads. The engine is std::mt19937_64,
// whose output sequence is fixed by the standard; ranges are mapped with a
// 64x64->128 multiply-shift so results do not depend on the standard
// library's distribution implementations.
class WorkloadRng {
 public:
  explicit WorkloadRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  // Uniform over the representable raws of fmt scaled by 1/4.
  std::int64_t headroom_raw(QFormat fmt);

 private:
  std::mt19937_64 engine_;
};

Tensor3 random_tensor(WorkloadRng& rng, std::size_t width, std::size_t height,
                      std::size_t channels, QFormat fmt);
Codebook random_codebook(WorkloadRng& rng, std::size_t b, QFormat fmt);
EncodedKernels random_encoded_kernels(WorkloadRng& rng, KernelShape shape,
                                      const Codebook& cb);

}  // namespace pasm

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

#include "pasm/workload.hpp"

#include "pasm/error.hpp"

namespace pasm {

std::uint64_t WorkloadRng::below(std::uint64_t bound) {
  return static_cast<std::uint64_t>((wide_uint{next()} * bound) >> 64);
}

std::int64_t WorkloadRng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) fail(Errc::invalid_argument, "empty random range");
  const wide_uint span = static_cast<wide_uint>(static_cast<wide_int>(hi) - lo) + 1;
  if (span > ~std::uint64_t{0}) {
    return static_cast<std::int64_t>(next());
  }
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(span)));
}

std::int64_t WorkloadRng::headroom_raw(QFormat fmt) {
  require_storage_format(fmt, "workload");
  const auto lo = static_cast<std::int64_t>(fmt.min_raw() / 4);
  const auto hi = static_cast<std::int64_t>(fmt.max_raw() / 4);
  return between(lo, hi);
}

Tensor3 random_tensor(WorkloadRng& rng, std::size_t width, std::size_t height,
                      std::size_t channels, QFormat fmt) {
  std::vector<std::int64_t> raws(width * height * channels);
  for (auto& r : raws) r = rng.headroom_raw(fmt);
  return Tensor3(width, height, channels, fmt, std::move(raws));
}

Codebook random_codebook(WorkloadRng& rng, std::size_t b, QFormat fmt) {
  wci_for_bins(b);
  std::vector<std::int64_t> raws(b);
  for (auto& r : raws) r = rng.headroom_raw(fmt);
  return Codebook::from_raws(std::move(raws), fmt);
}

EncodedKernels random_encoded_kernels(WorkloadRng& rng, KernelShape shape,
                                      const Codebook& cb) {
  EncodedKernels enc{shape, std::vector<std::uint8_t>(shape.size()), cb};
  for (auto& i : enc.indices) i = static_cast<std::uint8_t>(rng.below(cb.size()));
  return enc;
}

}  // namespace pasm

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

// Tensor binary layout (little-endian):
//   0  char[4]  magic "PASM"
//   4  u8       rank (1..4)
//   5  u8       element kind: 0 = fxp raw as i64, 1 = bin index as u8
//   6  u16      reserved (0)
//   8  u16[4]   dims; entries past rank are written as 1 and ignored
//  16  payload, row-major
//
// Codebook CSV: header "index,raw,value", one row per bin in ascending
// index order; value is the exact decimal of raw / 2^frac.

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pasm/codebook.hpp"
#include "pasm/tensor.hpp"

namespace pasm {

enum class ElementKind : std::uint8_t { fxp_raw_i64 = 0, index_u8 = 1 };

struct TensorFile {
  std::uint8_t rank = 1;
  ElementKind kind = ElementKind::fxp_raw_i64;
  std::array<std::uint16_t, 4> dims{1, 1, 1, 1};
  std::vector<std::int64_t> raws;       // kind == fxp_raw_i64
  std::vector<std::uint8_t> indices;    // kind == index_u8

  std::size_t element_count() const noexcept;
};

inline constexpr std::size_t kTensorHeaderBytes = 16;

void write_tensor(std::ostream& out, const TensorFile& file);
// Throws Errc::parse on a malformed header or short payload.
TensorFile read_tensor(std::istream& in);

void save_tensor_file(const std::string& path, const TensorFile& file);
TensorFile load_tensor_file(const std::string& path);

TensorFile to_file(const Tensor3& t);
TensorFile to_file(const KernelSet& k);
TensorFile to_file(const EncodedKernels& enc);

// The binary format does not record the Q format; the caller supplies it.
Tensor3 tensor3_from_file(const TensorFile& file, QFormat fmt);
KernelSet kernels_from_file(const TensorFile& file, QFormat fmt);
// Rank-4 index tensor [O][K][K][I]; the kernel's two spatial dims must match.
EncodedKernels encoded_from_file(const TensorFile& file, const Codebook& cb);

void write_codebook_csv(std::ostream& out, const Codebook& cb);
Codebook read_codebook_csv(std::istream& in, QFormat fmt);

}  // namespace pasm

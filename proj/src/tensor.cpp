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

#include "pasm/tensor.hpp"

#include <string>

#include "pasm/error.hpp"

namespace pasm {

void require_storage_format(QFormat fmt, const char* what) {
  if (!fmt.valid() || fmt.total_bits > QFormat::kMaxStorageBits) {
    fail(Errc::invalid_argument, std::string(what) + " format " +
                                     fmt.to_string() +
                                     " exceeds 64-bit storage");
  }
}

namespace {

void require_raws_fit(std::span<const std::int64_t> raws, QFormat fmt) {
  for (const auto r : raws) {
    if (!fmt.fits(r)) {
      fail(Errc::overflow, "raw " + std::to_string(r) +
                               " not representable in " + fmt.to_string());
    }
  }
}

void require_format(const Fxp& value, QFormat fmt) {
  if (value.format() != fmt) {
    fail(Errc::format_mismatch, "element format " +
                                    value.format().to_string() + " vs " +
                                    fmt.to_string());
  }
}

}  // namespace

Tensor3::Tensor3(std::size_t width, std::size_t height, std::size_t channels,
                 QFormat fmt)
    : width_(width),
      height_(height),
      channels_(channels),
      fmt_(fmt),
      raws_(width * height * channels, 0) {
  require_storage_format(fmt, "tensor");
}

Tensor3::Tensor3(std::size_t width, std::size_t height, std::size_t channels,
                 QFormat fmt, std::vector<std::int64_t> raws)
    : width_(width),
      height_(height),
      channels_(channels),
      fmt_(fmt),
      raws_(std::move(raws)) {
  require_storage_format(fmt, "tensor");
  if (raws_.size() != width * height * channels) {
    fail(Errc::shape_mismatch, "tensor data length " +
                                   std::to_string(raws_.size()) +
                                   " != width*height*channels");
  }
  require_raws_fit(raws_, fmt_);
}

Fxp Tensor3::at(std::size_t x, std::size_t y, std::size_t c) const {
  return Fxp::from_raw(raws_.at(offset(x, y, c)), fmt_);
}

void Tensor3::set(std::size_t x, std::size_t y, std::size_t c,
                  const Fxp& value) {
  require_format(value, fmt_);
  raws_.at(offset(x, y, c)) = static_cast<std::int64_t>(value.raw());
}

KernelSet::KernelSet(KernelShape shape, QFormat fmt)
    : shape_(shape), fmt_(fmt), raws_(shape.size(), 0) {
  require_storage_format(fmt, "kernel");
}

KernelSet::KernelSet(KernelShape shape, QFormat fmt,
                     std::vector<std::int64_t> raws)
    : shape_(shape), fmt_(fmt), raws_(std::move(raws)) {
  require_storage_format(fmt, "kernel");
  if (raws_.size() != shape_.size()) {
    fail(Errc::shape_mismatch, "kernel data length " +
                                   std::to_string(raws_.size()) +
                                   " != O*K*K*I");
  }
  require_raws_fit(raws_, fmt_);
}

Fxp KernelSet::at(std::size_t o, std::size_t x, std::size_t y,
                  std::size_t i) const {
  return Fxp::from_raw(raws_.at(shape_.offset(o, x, y, i)), fmt_);
}

void KernelSet::set(std::size_t o, std::size_t x, std::size_t y, std::size_t i,
                    const Fxp& value) {
  require_format(value, fmt_);
  raws_.at(shape_.offset(o, x, y, i)) = static_cast<std::int64_t>(value.raw());
}

}  // namespace pasm

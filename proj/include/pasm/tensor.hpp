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

namespace pasm {

// width x height x channels, row-major with channels innermost, matching
// input[width][height][channels].
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t width, std::size_t height, std::size_t channels,
          QFormat fmt);
  Tensor3(std::size_t width, std::size_t height, std::size_t channels,
          QFormat fmt, std::vector<std::int64_t> raws);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return raws_.size(); }
  QFormat format() const noexcept { return fmt_; }

  std::size_t offset(std::size_t x, std::size_t y, std::size_t c) const noexcept {
    return (x * height_ + y) * channels_ + c;
  }

  Fxp at(std::size_t x, std::size_t y, std::size_t c) const;
  // Stores value; its format must match the tensor's.
  void set(std::size_t x, std::size_t y, std::size_t c, const Fxp& value);

  std::span<const std::int64_t> raws() const noexcept { return raws_; }
  std::span<std::int64_t> raws() noexcept { return raws_; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 0;
  QFormat fmt_{16, 8};
  std::vector<std::int64_t> raws_;
};

struct KernelShape {
  std::size_t output_channels = 0;
  std::size_t k = 0;
  std::size_t input_channels = 0;

  std::size_t size() const noexcept {
    return output_channels * k * k * input_channels;
  }
  std::size_t offset(std::size_t o, std::size_t x, std::size_t y,
                     std::size_t i) const noexcept {
    return ((o * k + x) * k + y) * input_channels + i;
  }
  friend bool operator==(const KernelShape&, const KernelShape&) = default;
};

// kernels[output_channels][K][K][input_channels] of fixed-point weights.
class KernelSet {
 public:
  KernelSet() = default;
  KernelSet(KernelShape shape, QFormat fmt);
  KernelSet(KernelShape shape, QFormat fmt, std::vector<std::int64_t> raws);

  const KernelShape& shape() const noexcept { return shape_; }
  QFormat format() const noexcept { return fmt_; }

  Fxp at(std::size_t o, std::size_t x, std::size_t y, std::size_t i) const;
  void set(std::size_t o, std::size_t x, std::size_t y, std::size_t i,
           const Fxp& value);

  std::span<const std::int64_t> raws() const noexcept { return raws_; }
  std::span<std::int64_t> raws() noexcept { return raws_; }

  friend bool operator==(const KernelSet&, const KernelSet&) = default;

 private:
  KernelShape shape_{};
  QFormat fmt_{16, 8};
  std::vector<std::int64_t> raws_;
};

// Throws unless fmt fits int64 raw storage.
void require_storage_format(QFormat fmt, const char* what);

}  // namespace pasm

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
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pasm/codebook.hpp"
#include "pasm/pasm_core.hpp"
#include "pasm/tensor.hpp"

namespace pasm {

enum class AccelMode { direct_mac, pas_shared_mac };

std::string to_string(AccelMode mode);
AccelMode parse_accel_mode(std::string_view text);

// Each cycle the accelerator takes image_inputs_per_cycle image values and
// weight_inputs_per_cycle weights (or bin indices) and broadcasts them
// all-pairs onto an image x weight grid of units: unit (p, o) accumulates
// output position p of output channel o. In pas-shared-mac mode each MAC
// serves n_pas / n_mac PAS units, assigned round-robin (PAS u -> MAC
// u mod n_mac), and drains them serially at one bin per cycle.
struct AccelConfig {
  int n_pas_units = 0;
  int n_mac_units = 16;
  int image_inputs_per_cycle = 4;
  int weight_inputs_per_cycle = 4;
  int b = 16;
  int w = 32;
  AccelMode mode = AccelMode::direct_mac;
  bool overlap_postpass = false;

  static AccelConfig sixteen_mac(int w = 32, int b = 16);
  static AccelConfig sixteen_pas_four_mac(int w = 32, int b = 16);
  // "16-mac" or "16-pas-4-mac"; throws Errc::invalid_argument otherwise.
  static AccelConfig named(std::string_view name, int w, int b);

  // Throws Errc::infeasible_config when the unit counts violate the mode's
  // invariants or the input grid needs more units than exist.
  void validate() const;
  std::string label() const;
  int grid_units() const noexcept {
    return image_inputs_per_cycle * weight_inputs_per_cycle;
  }

  friend bool operator==(const AccelConfig&, const AccelConfig&) = default;
};

struct LayerShape {
  std::size_t width = 1;
  std::size_t height = 1;
  std::size_t k = 1;
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;

  std::size_t macs_per_output() const noexcept { return k * k * in_channels; }
  std::size_t positions() const noexcept {
    return (width - k + 1) * (height - k + 1);
  }
  std::size_t outputs() const noexcept { return positions() * out_channels; }
  void validate() const;

  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

struct CycleReport {
  std::uint64_t accumulate_cycles = 0;
  std::uint64_t postpass_cycles = 0;
  std::uint64_t total_cycles = 0;
  std::uint64_t ops_executed = 0;
  std::uint64_t batches = 0;
  double util_pas = 0.0;
  double util_mac = 0.0;
  bool overlap = false;
  // Bins are cleared in zero cycles between batches.
  std::uint64_t bin_reset_cycles = 0;

  friend bool operator==(const CycleReport&, const CycleReport&) = default;
};

// One dot product of length n on a single unit: n cycles on a MAC, n + b
// on a PAS followed by its post-pass MAC.
CycleReport simulate_dot(const AccelConfig& config, std::uint64_t n);

CycleReport simulate_layer(const AccelConfig& config, const LayerShape& layer);

struct Comparison {
  CycleReport a;
  CycleReport b;
  // (b.total - a.total) / a.total
  double overhead = 0.0;
};

Comparison compare_configs(const AccelConfig& a, const AccelConfig& b,
                           const LayerShape& layer);

struct CheckedRun {
  CycleReport report;
  Tensor3 output;  // input format, same layout as conv2d_ref
};

// Carries real data through the schedule of simulate_layer: PAS bins or
// MAC accumulators are stepped once per simulated cycle.
CheckedRun simulate_layer_checked(const AccelConfig& config,
                                  const Tensor3& input,
                                  const EncodedKernels& enc,
                                  const Codebook& cb,
                                  const AccumulatorFormats& formats);

// CSV: mode,w,b,n_pas,n_mac,K,c,out_ch,width,height,acc_cycles,post_cycles,
//      total_cycles,util_pas,util_mac
struct CycleRecord {
  std::string mode;
  std::int64_t w = 0;
  std::int64_t b = 0;
  std::int64_t n_pas = 0;
  std::int64_t n_mac = 0;
  std::int64_t k = 0;
  std::int64_t c = 0;
  std::int64_t out_ch = 0;
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::int64_t acc_cycles = 0;
  std::int64_t post_cycles = 0;
  std::int64_t total_cycles = 0;
  double util_pas = 0.0;
  double util_mac = 0.0;

  friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
};

CycleRecord make_cycle_record(const AccelConfig& config, const LayerShape& layer,
                              const CycleReport& report);
const std::vector<std::string>& cycle_csv_header();
void write_cycle_csv(std::ostream& out, const std::vector<CycleRecord>& rows);
std::vector<CycleRecord> read_cycle_csv(std::istream& in);

}  // namespace pasm

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
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pasm/accelsim.hpp"

namespace pasm {

// Gate-equivalents normalized to a two-input NAND.
struct GateConstants {
  double adder_per_bit = 6.0;
  double mult_per_bit_sq = 7.0;
  double register_per_bit = 5.0;
  double regfile_port_per_bit_entry = 1.5;

  // Throws Errc::invalid_argument unless every constant is finite and > 0.
  void validate() const;

  friend bool operator==(const GateConstants&, const GateConstants&) = default;
};

enum class UnitKind { simple_mac, ws_mac, pas };

std::string to_string(UnitKind kind);

// Component counts per unit. A register holds one w-bit word; a register
// file port selects among b entries.
struct UnitCounts {
  double adders = 0;
  double multipliers = 0;
  double registers = 0;
  double regfile_ports = 0;
};

UnitCounts unit_counts(UnitKind kind, int b);

struct CostReport {
  std::string unit;  // simple-mac, ws-mac, pas, or a config label
  int w = 0;
  int b = 0;
  double adder = 0;
  double mult = 0;
  double reg = 0;
  double regfile_port = 0;
  double total = 0;

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

// b must be a power of two in [2, 256] except for simple-mac, where it is
// only recorded.
CostReport unit_gates(UnitKind kind, int w, int b, const GateConstants& k = {});

// n_mac weight-shared MACs, plus n_pas PAS units in pas-shared-mac mode.
CostReport config_gates(const AccelConfig& config, const GateConstants& k = {});

std::uint64_t macs_per_output(std::uint64_t k, std::uint64_t c);

// For every (w, b) in the cross product, sorted by w then b: the three unit
// reports followed by the 16-mac and 16-pas-4-mac config reports.
std::vector<CostReport> sweep(std::span<const int> w_values,
                              std::span<const int> b_values,
                              const GateConstants& k = {});

struct SweepPoint {
  int w = 0;
  int b = 0;
  CostReport mac;
  CostReport pasm;
  double ratio = 0;  // pasm.total / mac.total
};

std::vector<SweepPoint> sweep_configs(std::span<const int> w_values,
                                      std::span<const int> b_values,
                                      const GateConstants& k = {});

// w,b,mac_adder,mac_mult,mac_register,mac_regfile_port,mac_total,
// pasm_adder,pasm_mult,pasm_register,pasm_regfile_port,pasm_total,ratio
const std::vector<std::string>& sweep_csv_header();
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);
std::vector<SweepPoint> read_sweep_csv(std::istream& in);

// Smallest power of two b in [2, max_b] such that the 16-pas-4-mac total
// exceeds the 16-mac total for every power of two from b up to max_b.
// Unlike unit_gates, b is not capped at 256 here.
std::optional<int> find_crossover(int w, int max_b, const GateConstants& k = {});

// name,value with the four constant names; missing names keep defaults.
GateConstants read_constants_csv(std::istream& in);
GateConstants load_constants_file(const std::string& path);
void write_constants_csv(std::ostream& out, const GateConstants& k);

// unit,w,b,adder,mult,register,regfile_port,total
void write_cost_csv(std::ostream& out, const std::vector<CostReport>& rows);
std::vector<CostReport> read_cost_csv(std::istream& in);

// One synthesized design: its component counts at (w, b) and measured gates.
struct CalibrationSample {
  UnitCounts counts;
  int w = 0;
  int b = 0;
  double gates = 0;
};

// Least-squares fit of the four constants. Needs at least four samples
// spanning all categories; throws Errc::invalid_argument if the system is
// rank deficient or a fitted constant is not positive.
GateConstants fit_constants(std::span<const CalibrationSample> samples);

}  // namespace pasm

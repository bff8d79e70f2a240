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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pasm::cli {

struct QuantizeArgs {
  std::string input;
  std::string format = "Q24.8";
  int bins = 16;
  std::string method = "uniform";
  std::string out;      // codebook CSV; stdout when empty
  std::string indices;  // index tensor; derived from out when empty
};

struct CheckArgs {
  std::size_t width = 8;
  std::size_t height = 8;
  std::size_t channels = 4;
  std::size_t kernel = 3;
  std::size_t out_channels = 4;
  int bins = 16;
  std::uint64_t seed = 42;
  std::string format = "Q16.8";
  unsigned threads = 1;
  std::string isa;  // empty keeps the runtime choice
};

struct SimulateArgs {
  std::string config = "16-mac";
  std::string mode = "pas-shared-mac";  // custom only
  int n_pas = 16;                       // custom only
  int n_mac = 4;                        // custom only
  int image_inputs = 4;
  int weight_inputs = 4;
  int bins = 16;
  int bits = 32;
  std::size_t width = 6;
  std::size_t height = 6;
  std::size_t kernel = 5;
  std::size_t channels = 4;
  std::size_t out_channels = 4;
  std::optional<std::uint64_t> dot;
  bool overlap = false;
  std::string out;
};

struct SweepArgs {
  std::string axis = "width";
  std::vector<int> values;
  int bits = 32;
  int bins = 16;
  std::string constants;
  std::string out;
  std::string report;  // optional long-form cost CSV
};

// Each returns a process exit code and throws pasm::Error on failure.
int cmd_quantize(const QuantizeArgs& a, std::ostream& out, std::ostream& err);
int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err);

}  // namespace pasm::cli

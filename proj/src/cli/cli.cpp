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

#include "pasm/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>

#include "commands.hpp"
#include "pasm/error.hpp"

namespace pasm::cli {

namespace {

int exit_code(Errc code) {
  switch (code) {
    case Errc::parse:
    case Errc::io:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel-accumulate shared-MAC convolution toolkit", "pasm"};
  app.require_subcommand(1);

  QuantizeArgs q;
  auto* quantize = app.add_subcommand(
      "quantize", "Build a weight codebook and bin-index tensor from a weights file");
  quantize->add_option("input", q.input, "Tensor binary or CSV of real weights")->required();
  quantize->add_option("--format", q.format, "Fixed-point format Qw.f")->capture_default_str();
  quantize->add_option("--bins,-b", q.bins, "Number of bins (power of two)")->capture_default_str();
  quantize->add_option("--method", q.method, "uniform or kmeans")->capture_default_str();
  quantize->add_option("--out,-o", q.out, "Codebook CSV (stdout if omitted)");
  quantize->add_option("--indices", q.indices,
                       "Index tensor path (default: codebook path with .indices.bin)");

  CheckArgs c;
  auto* check = app.add_subcommand(
      "check", "Compare the PASM and reference convolutions on a seeded random layer");
  check->add_option("--width", c.width)->capture_default_str();
  check->add_option("--height", c.height)->capture_default_str();
  check->add_option("--channels", c.channels)->capture_default_str();
  check->add_option("--kernel,-K", c.kernel)->capture_default_str();
  check->add_option("--out-channels", c.out_channels)->capture_default_str();
  check->add_option("--bins,-b", c.bins)->capture_default_str();
  check->add_option("--seed", c.seed)->capture_default_str();
  check->add_option("--format", c.format, "Fixed-point format Qw.f")->capture_default_str();
  check->add_option("--threads", c.threads)->capture_default_str();
  check->add_option("--isa", c.isa, "Pin the kernel variant: scalar or avx2");

  SimulateArgs s;
  auto* simulate = app.add_subcommand("simulate", "Cycle counts for one accelerator run");
  simulate->add_option("--config", s.config, "16-mac, 16-pas-4-mac or custom")
      ->capture_default_str();
  simulate->add_option("--mode", s.mode, "custom: direct-mac or pas-shared-mac")
      ->capture_default_str();
  simulate->add_option("--n-pas", s.n_pas, "custom: PAS units")->capture_default_str();
  simulate->add_option("--n-mac", s.n_mac, "custom: MAC units")->capture_default_str();
  simulate->add_option("--image-inputs", s.image_inputs)->capture_default_str();
  simulate->add_option("--weight-inputs", s.weight_inputs)->capture_default_str();
  simulate->add_option("--bins,-b", s.bins)->capture_default_str();
  simulate->add_option("--bits,-w", s.bits)->capture_default_str();
  simulate->add_option("--width", s.width)->capture_default_str();
  simulate->add_option("--height", s.height)->capture_default_str();
  simulate->add_option("--kernel,-K", s.kernel)->capture_default_str();
  simulate->add_option("--channels", s.channels)->capture_default_str();
  simulate->add_option("--out-channels", s.out_channels)->capture_default_str();
  simulate->add_option("--dot", s.dot, "Single dot product of this length instead of a layer");
  simulate->add_flag("--overlap", s.overlap, "Double-buffer bins to overlap the post-pass");
  simulate->add_option("--out,-o", s.out, "CSV path (stdout if omitted)");

  SweepArgs w;
  auto* sweep = app.add_subcommand("sweep", "Gate counts of 16-mac vs 16-pas-4-mac");
  sweep->add_option("--axis", w.axis, "width or bins")->capture_default_str();
  sweep->add_option("--values", w.values, "Comma-separated axis values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--bits,-w", w.bits, "Fixed width for the bins axis")->capture_default_str();
  sweep->add_option("--bins,-b", w.bins, "Fixed bins for the width axis")->capture_default_str();
  sweep->add_option("--constants", w.constants, "Gate constants CSV (name,value)");
  sweep->add_option("--out,-o", w.out, "Sweep CSV path (stdout if omitted)");
  sweep->add_option("--report", w.report, "Also write per-unit cost CSV here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*quantize) return cmd_quantize(q, out, err);
    if (*check) return cmd_check(c, out, err);
    if (*simulate) return cmd_simulate(s, out, err);
    return cmd_sweep(w, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitUsage;
  }
}

}  // namespace pasm::cli

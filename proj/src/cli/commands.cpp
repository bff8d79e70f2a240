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

#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "pasm/accelsim.hpp"
#include "pasm/cli.hpp"
#include "pasm/codebook.hpp"
#include "pasm/convref.hpp"
#include "pasm/costmodel.hpp"
#include "pasm/csv.hpp"
#include "pasm/error.hpp"
#include "pasm/pasm_core.hpp"
#include "pasm/simd/kernels.hpp"
#include "pasm/tensor_io.hpp"
#include "pasm/workload.hpp"

namespace pasm::cli {

namespace {

constexpr std::size_t kCheckMaxOps = 1'000'000;

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  return out;
}

bool is_separator(char ch) {
  return ch == ',' || ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r';
}

std::vector<std::string> tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_separator(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_separator(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_number(std::string_view token) {
  double v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  return res.ec == std::errc{} && res.ptr == token.data() + token.size();
}

// Real-valued weights: numbers separated by commas or whitespace. A first
// line holding anything other than numbers is taken as a header.
std::vector<double> parse_real_list(const std::string& text) {
  std::string_view body = text;
  const auto eol = body.find('\n');
  const std::string_view first = body.substr(0, eol);
  for (const auto& t : tokens(first)) {
    if (!is_number(t)) {
      body = eol == std::string_view::npos ? std::string_view{} : body.substr(eol + 1);
      break;
    }
  }
  std::vector<double> values;
  for (const auto& t : tokens(body)) values.push_back(csv::parse_double(t));
  if (values.empty()) fail(Errc::parse, "no weights found");
  return values;
}

std::string derived_indices_path(const std::string& codebook_path) {
  const auto slash = codebook_path.find_last_of('/');
  const auto dot = codebook_path.find_last_of('.');
  const bool has_ext = dot != std::string::npos &&
                       (slash == std::string::npos || dot > slash);
  return (has_ext ? codebook_path.substr(0, dot) : codebook_path) + ".indices.bin";
}

std::string coords(const Tensor3& t, std::size_t flat) {
  const std::size_t c = flat % t.channels();
  const std::size_t y = (flat / t.channels()) % t.height();
  const std::size_t x = flat / (t.channels() * t.height());
  return "(" + std::to_string(x) + ", " + std::to_string(y) + ", " + std::to_string(c) + ")";
}

// Empty when equal, else a description of the first differing element.
std::optional<std::string> first_mismatch(const Tensor3& expected, const Tensor3& got) {
  if (expected.width() != got.width() || expected.height() != got.height() ||
      expected.channels() != got.channels()) {
    return "shape differs";
  }
  const auto e = expected.raws();
  const auto g = got.raws();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] != g[i]) {
      return "first mismatch at " + coords(expected, i) + ": expected raw " +
             std::to_string(e[i]) + ", got raw " + std::to_string(g[i]);
    }
  }
  return std::nullopt;
}

}  // namespace

int cmd_quantize(const QuantizeArgs& a, std::ostream& out, std::ostream& err) {
  const std::size_t b = static_cast<std::size_t>(std::max(a.bins, 0));
  wci_for_bins(b);
  const QFormat fmt = QFormat::parse(a.format);
  require_storage_format(fmt, "weight format");
  BinningMethod method = BinningMethod::uniform_range;
  if (a.method == "kmeans") {
    method = BinningMethod::lloyd_kmeans;
  } else if (a.method != "uniform") {
    fail(Errc::invalid_argument, "--method must be uniform or kmeans");
  }

  const std::string bytes = read_bytes(a.input);
  TensorFile index_file;
  index_file.kind = ElementKind::index_u8;
  std::vector<std::int64_t> raws;
  if (bytes.size() >= 4 && bytes.compare(0, 4, "PASM") == 0) {
    std::istringstream in(bytes);
    TensorFile f = read_tensor(in);
    if (f.kind != ElementKind::fxp_raw_i64) {
      fail(Errc::parse, "quantize expects a tensor of fixed-point raws");
    }
    for (const auto r : f.raws) {
      if (!fmt.fits(r)) fail(Errc::parse, "raw " + std::to_string(r) + " outside " + fmt.to_string());
    }
    raws = std::move(f.raws);
    index_file.rank = f.rank;
    index_file.dims = f.dims;
  } else {
    for (const double v : parse_real_list(bytes)) {
      raws.push_back(static_cast<std::int64_t>(Fxp::from_real(v, fmt).raw()));
    }
    if (raws.size() > 65535) {
      fail(Errc::invalid_argument, "at most 65535 weights fit a rank-1 index tensor");
    }
    index_file.rank = 1;
    index_file.dims = {static_cast<std::uint16_t>(raws.size()), 1, 1, 1};
  }

  const Codebook cb = build_codebook(raws, fmt, b, method);
  std::int64_t lo = raws.front();
  std::int64_t hi = raws.front();
  long double max_err = 0;
  long double sum_err = 0;
  for (const auto r : raws) {
    const std::size_t k = cb.nearest(r);
    index_file.indices.push_back(static_cast<std::uint8_t>(k));
    const long double e = std::fabs(static_cast<long double>(r) -
                                    static_cast<long double>(cb.raws()[k]));
    max_err = std::max(max_err, e);
    sum_err += e;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }

  std::ostream* summary = &out;
  if (a.out.empty()) {
    write_codebook_csv(out, cb);
    summary = &err;
  } else {
    auto f = open_out(a.out);
    write_codebook_csv(f, cb);
    if (!f) fail(Errc::io, "failed writing '" + a.out + "'");
  }
  const std::string indices_path =
      !a.indices.empty() ? a.indices : (a.out.empty() ? "" : derived_indices_path(a.out));
  if (!indices_path.empty()) save_tensor_file(indices_path, index_file);

  const long double scale = std::ldexp(1.0L, -fmt.frac_bits);
  auto real = [&](long double raw_units) {
    return csv::format_double(static_cast<double>(raw_units * scale));
  };
  *summary << "quantized " << raws.size() << " weights into " << b << " bins ("
           << a.method << ", " << fmt.to_string() << ")\n";
  *summary << "max_abs_error=" << real(max_err)
           << " mean_abs_error=" << real(sum_err / static_cast<long double>(raws.size()))
           << "\n";
  if (!indices_path.empty()) *summary << "indices written to " << indices_path << "\n";
  if (method == BinningMethod::uniform_range) {
    // (max - min) / 2b plus one step for rounding the centers into fmt.
    const long double bound =
        (static_cast<long double>(hi) - static_cast<long double>(lo)) / (2.0L * b) + 1.0L;
    const bool ok = max_err <= bound;
    *summary << "uniform_bound=" << real(bound) << (ok ? " ok" : " VIOLATED") << "\n";
    if (!ok) return kExitUsage;
  }
  return kExitOk;
}

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream&) {
  const QFormat fmt = QFormat::parse(a.format);
  require_storage_format(fmt, "check format");
  const std::size_t b = static_cast<std::size_t>(std::max(a.bins, 0));
  wci_for_bins(b);
  const LayerShape layer{a.width, a.height, a.kernel, a.channels, a.out_channels};
  layer.validate();
  if (layer.outputs() * layer.macs_per_output() > kCheckMaxOps) {
    fail(Errc::invalid_argument, "check is limited to " + std::to_string(kCheckMaxOps) +
                                     " multiply-accumulates");
  }
  std::optional<simd::ScopedIsa> isa;
  if (a.isa == "scalar") {
    isa.emplace(simd::Isa::scalar);
  } else if (a.isa == "avx2") {
    isa.emplace(simd::Isa::avx2);
  } else if (!a.isa.empty()) {
    fail(Errc::invalid_argument, "--isa must be scalar or avx2");
  }

  WorkloadRng rng(a.seed);
  const Tensor3 input = random_tensor(rng, a.width, a.height, a.channels, fmt);
  const Codebook cb = random_codebook(rng, b, fmt);
  const EncodedKernels enc =
      random_encoded_kernels(rng, KernelShape{a.out_channels, a.kernel, a.channels}, cb);
  const std::size_t n = layer.macs_per_output();
  const AccumulatorFormats acc = guarded_formats(fmt, fmt, n, b);
  const ConvOptions options{std::max(a.threads, 1u)};

  out << "check " << a.width << "x" << a.height << "x" << a.channels << " K=" << a.kernel
      << " out_channels=" << a.out_channels << " b=" << b << " seed=" << a.seed
      << " format=" << fmt.to_string() << "\n";
  out << "accumulators bins=" << acc.bins.to_string() << " post=" << acc.post.to_string()
      << " mac=" << acc.mac.to_string() << "\n";
  out << "outputs=" << layer.outputs() << " macs_per_output=" << n << "\n";

  const Tensor3 ref = conv2d_ref(input, decode(enc), acc.mac, options);
  struct Candidate {
    std::string name;
    Tensor3 result;
  };
  std::vector<Candidate> candidates;
  candidates.push_back({"pasm_conv2d", pasm_conv2d(input, enc, cb, acc.bins, acc.post, options)});
  for (const auto& cfg : {AccelConfig::sixteen_mac(fmt.total_bits, static_cast<int>(b)),
                          AccelConfig::sixteen_pas_four_mac(fmt.total_bits,
                                                            static_cast<int>(b))}) {
    candidates.push_back({cfg.label() + " schedule",
                          simulate_layer_checked(cfg, input, enc, cb, acc).output});
  }

  for (const auto& c : candidates) {
    if (const auto bad = first_mismatch(ref, c.result)) {
      out << c.name << " vs conv2d_ref: MISMATCH " << *bad << "\n";
      return kExitMismatch;
    }
    out << c.name << " vs conv2d_ref: BITEXACT\n";
  }
  out << "BITEXACT\n";
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  AccelConfig cfg;
  if (a.config == "custom") {
    cfg.mode = parse_accel_mode(a.mode);
    cfg.n_pas_units = cfg.mode == AccelMode::direct_mac ? 0 : a.n_pas;
    cfg.n_mac_units = a.n_mac;
    cfg.b = a.bins;
    cfg.w = a.bits;
  } else {
    cfg = AccelConfig::named(a.config, a.bits, a.bins);
  }
  cfg.image_inputs_per_cycle = a.image_inputs;
  cfg.weight_inputs_per_cycle = a.weight_inputs;
  cfg.overlap_postpass = a.overlap;

  LayerShape layer{a.width, a.height, a.kernel, a.channels, a.out_channels};
  CycleReport report;
  if (a.dot) {
    if (*a.dot == 0) fail(Errc::invalid_argument, "--dot length must be positive");
    layer = LayerShape{1, 1, 1, static_cast<std::size_t>(*a.dot), 1};
    report = simulate_dot(cfg, *a.dot);
  } else {
    report = simulate_layer(cfg, layer);
  }

  const std::vector<CycleRecord> rows{make_cycle_record(cfg, layer, report)};
  std::ostream* summary = &err;
  if (a.out.empty()) {
    write_cycle_csv(out, rows);
  } else {
    auto f = open_out(a.out);
    write_cycle_csv(f, rows);
    if (!f) fail(Errc::io, "failed writing '" + a.out + "'");
    summary = &out;
  }
  *summary << "config=" << cfg.label() << " mode=" << to_string(cfg.mode)
           << (a.dot ? " dot n=" + std::to_string(*a.dot)
                     : " layer " + std::to_string(layer.width) + "x" +
                           std::to_string(layer.height) + "x" +
                           std::to_string(layer.in_channels) + " K=" +
                           std::to_string(layer.k) + " out_channels=" +
                           std::to_string(layer.out_channels))
           << "\n";
  *summary << "total_cycles=" << report.total_cycles
           << " acc_cycles=" << report.accumulate_cycles
           << " post_cycles=" << report.postpass_cycles << " batches=" << report.batches
           << " ops=" << report.ops_executed << "\n";
  *summary << "util_pas=" << csv::format_double(report.util_pas)
           << " util_mac=" << csv::format_double(report.util_mac)
           << " overlap=" << (report.overlap ? 1 : 0) << "\n";
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (a.values.empty()) fail(Errc::invalid_argument, "--values needs at least one value");
  for (const int v : a.values) {
    if (v <= 0) fail(Errc::invalid_argument, "--values must be positive integers");
  }
  const GateConstants k = a.constants.empty() ? GateConstants{}
                                              : load_constants_file(a.constants);
  std::vector<int> ws{a.bits};
  std::vector<int> bs{a.bins};
  if (a.axis == "width") {
    ws = a.values;
  } else if (a.axis == "bins") {
    bs = a.values;
  } else {
    fail(Errc::invalid_argument, "--axis must be width or bins");
  }
  const auto points = sweep_configs(ws, bs, k);

  if (a.out.empty()) {
    write_sweep_csv(out, points);
  } else {
    auto f = open_out(a.out);
    write_sweep_csv(f, points);
    if (!f) fail(Errc::io, "failed writing '" + a.out + "'");
  }
  if (!a.report.empty()) {
    auto f = open_out(a.report);
    write_cost_csv(f, sweep(ws, bs, k));
    if (!f) fail(Errc::io, "failed writing '" + a.report + "'");
  }
  std::ostream& summary = a.out.empty() ? err : out;
  for (const auto& p : points) {
    summary << "w=" << p.w << " b=" << p.b << " mac_total=" << csv::format_double(p.mac.total)
            << " pasm_total=" << csv::format_double(p.pasm.total)
            << " ratio=" << csv::format_double(p.ratio) << "\n";
  }
  return kExitOk;
}

}  // namespace pasm::cli

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

#include "pasm/accelsim.hpp"

#include <algorithm>
#include <map>

#include "pasm/csv.hpp"
#include "pasm/error.hpp"

namespace pasm {

std::string to_string(AccelMode mode) {
  return mode == AccelMode::direct_mac ? "direct-mac" : "pas-shared-mac";
}

AccelMode parse_accel_mode(std::string_view text) {
  if (text == "direct-mac") return AccelMode::direct_mac;
  if (text == "pas-shared-mac") return AccelMode::pas_shared_mac;
  fail(Errc::parse, "unknown accelerator mode '" + std::string(text) + "'");
}

AccelConfig AccelConfig::sixteen_mac(int w, int b) {
  AccelConfig c;
  c.n_pas_units = 0;
  c.n_mac_units = 16;
  c.b = b;
  c.w = w;
  c.mode = AccelMode::direct_mac;
  return c;
}

AccelConfig AccelConfig::sixteen_pas_four_mac(int w, int b) {
  AccelConfig c;
  c.n_pas_units = 16;
  c.n_mac_units = 4;
  c.b = b;
  c.w = w;
  c.mode = AccelMode::pas_shared_mac;
  return c;
}

AccelConfig AccelConfig::named(std::string_view name, int w, int b) {
  if (name == "16-mac") return sixteen_mac(w, b);
  if (name == "16-pas-4-mac") return sixteen_pas_four_mac(w, b);
  fail(Errc::invalid_argument, "unknown configuration '" + std::string(name) +
                                   "' (expected 16-mac or 16-pas-4-mac)");
}

void AccelConfig::validate() const {
  wci_for_bins(static_cast<std::size_t>(std::max(b, 0)));
  if (w < 2) fail(Errc::infeasible_config, "bit width must be at least 2");
  if (image_inputs_per_cycle < 1 || weight_inputs_per_cycle < 1) {
    fail(Errc::infeasible_config, "input bandwidth must be positive");
  }
  if (mode == AccelMode::direct_mac) {
    if (n_pas_units != 0) {
      fail(Errc::infeasible_config, "direct-mac configurations have no PAS units");
    }
    if (n_mac_units < 1) fail(Errc::infeasible_config, "need at least one MAC unit");
    if (grid_units() > n_mac_units) {
      fail(Errc::infeasible_config,
           std::to_string(grid_units()) + " ops per cycle demanded, only " +
               std::to_string(n_mac_units) + " MAC units");
    }
  } else {
    if (n_mac_units < 1 || n_pas_units < n_mac_units) {
      fail(Errc::infeasible_config, "pas-shared-mac needs n_pas >= n_mac >= 1");
    }
    if (n_pas_units % n_mac_units != 0) {
      fail(Errc::infeasible_config, "n_pas must be divisible by n_mac");
    }
    if (grid_units() > n_pas_units) {
      fail(Errc::infeasible_config,
           std::to_string(grid_units()) + " ops per cycle demanded, only " +
               std::to_string(n_pas_units) + " PAS units");
    }
  }
}

std::string AccelConfig::label() const {
  if (mode == AccelMode::direct_mac) return std::to_string(n_mac_units) + "-mac";
  return std::to_string(n_pas_units) + "-pas-" + std::to_string(n_mac_units) + "-mac";
}

void LayerShape::validate() const {
  if (width == 0 || height == 0 || k == 0 || in_channels == 0 || out_channels == 0) {
    fail(Errc::invalid_argument, "layer dimensions must be positive");
  }
  if (k > width || k > height) {
    fail(Errc::invalid_argument, "kernel size " + std::to_string(k) +
                                     " exceeds layer " + std::to_string(width) +
                                     "x" + std::to_string(height));
  }
}

namespace {

// Active PAS units assigned to each MAC for a batch that fills `ap` image
// rows and `ao` weight columns of the unit grid.
std::vector<std::vector<int>> drain_lists(const AccelConfig& cfg, int ap, int ao) {
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(cfg.n_mac_units));
  for (int pi = 0; pi < ap; ++pi) {
    for (int oi = 0; oi < ao; ++oi) {
      const int u = pi * cfg.weight_inputs_per_cycle + oi;
      lists[static_cast<std::size_t>(u % cfg.n_mac_units)].push_back(u);
    }
  }
  return lists;
}

// Two-stage timeline: accumulate (n cycles) then drain. With overlap the
// bins are double-buffered, so batch j may accumulate once batch j-1 has
// finished accumulating and batch j-2 has finished draining.
class Timeline {
 public:
  Timeline(const AccelConfig& cfg, std::uint64_t n) : cfg_(cfg), n_(n) {}

  void batch(std::uint64_t active_units, std::uint64_t drain_cycles,
             std::uint64_t mac_busy) {
    std::uint64_t acc_start = 0;
    if (cfg_.overlap_postpass && cfg_.mode == AccelMode::pas_shared_mac) {
      acc_start = std::max(acc_end_, drain_end_prev_);
    } else {
      acc_start = std::max(acc_end_, drain_end_);
    }
    const std::uint64_t acc_end = acc_start + n_;
    const std::uint64_t drain_end = std::max(acc_end, drain_end_) + drain_cycles;
    drain_end_prev_ = drain_end_;
    drain_end_ = drain_end;
    acc_end_ = acc_end;

    r_.accumulate_cycles += n_;
    r_.postpass_cycles += drain_cycles;
    r_.ops_executed += active_units * n_;
    ++r_.batches;
    unit_busy_ += active_units * n_;
    mac_busy_ += mac_busy;
  }

  CycleReport finish() {
    r_.total_cycles = std::max(acc_end_, drain_end_);
    r_.overlap = cfg_.overlap_postpass && cfg_.mode == AccelMode::pas_shared_mac;
    if (r_.total_cycles > 0) {
      const double total = static_cast<double>(r_.total_cycles);
      if (cfg_.mode == AccelMode::direct_mac) {
        r_.util_mac = static_cast<double>(unit_busy_) / (cfg_.n_mac_units * total);
      } else {
        r_.util_pas = static_cast<double>(unit_busy_) / (cfg_.n_pas_units * total);
        r_.util_mac = static_cast<double>(mac_busy_) / (cfg_.n_mac_units * total);
      }
    }
    return r_;
  }

 private:
  const AccelConfig& cfg_;
  std::uint64_t n_;
  std::uint64_t acc_end_ = 0;
  std::uint64_t drain_end_ = 0;
  std::uint64_t drain_end_prev_ = 0;
  std::uint64_t unit_busy_ = 0;
  std::uint64_t mac_busy_ = 0;
  CycleReport r_;
};

struct BatchCost {
  std::uint64_t drain = 0;
  std::uint64_t mac_busy = 0;
};

BatchCost batch_cost(const AccelConfig& cfg, int ap, int ao) {
  if (cfg.mode == AccelMode::direct_mac) return {};
  BatchCost cost;
  for (const auto& list : drain_lists(cfg, ap, ao)) {
    cost.drain = std::max<std::uint64_t>(cost.drain, list.size() * cfg.b);
    cost.mac_busy += list.size() * cfg.b;
  }
  return cost;
}

// Visits batches in schedule order: position groups outer, channel groups
// inner.
template <typename Visit>
void for_each_batch(const AccelConfig& cfg, const LayerShape& layer, Visit&& visit) {
  const std::size_t gi = static_cast<std::size_t>(cfg.image_inputs_per_cycle);
  const std::size_t gw = static_cast<std::size_t>(cfg.weight_inputs_per_cycle);
  const std::size_t positions = layer.positions();
  for (std::size_t p0 = 0; p0 < positions; p0 += gi) {
    const int ap = static_cast<int>(std::min(gi, positions - p0));
    for (std::size_t o0 = 0; o0 < layer.out_channels; o0 += gw) {
      const int ao = static_cast<int>(std::min(gw, layer.out_channels - o0));
      visit(p0, o0, ap, ao);
    }
  }
}

}  // namespace

CycleReport simulate_dot(const AccelConfig& config, std::uint64_t n) {
  config.validate();
  CycleReport r;
  r.accumulate_cycles = n;
  r.ops_executed = n;
  r.batches = 1;
  if (config.mode == AccelMode::direct_mac) {
    r.total_cycles = n;
    r.util_mac = n > 0 ? 1.0 : 0.0;
  } else {
    const auto b = static_cast<std::uint64_t>(config.b);
    r.postpass_cycles = b;
    r.total_cycles = n + b;
    r.util_pas = static_cast<double>(n) / static_cast<double>(n + b);
    r.util_mac = static_cast<double>(b) / static_cast<double>(n + b);
  }
  return r;
}

CycleReport simulate_layer(const AccelConfig& config, const LayerShape& layer) {
  config.validate();
  layer.validate();
  Timeline timeline(config, layer.macs_per_output());
  std::map<std::pair<int, int>, BatchCost> kinds;
  for_each_batch(config, layer, [&](std::size_t, std::size_t, int ap, int ao) {
    auto it = kinds.find({ap, ao});
    if (it == kinds.end()) it = kinds.emplace(std::pair{ap, ao}, batch_cost(config, ap, ao)).first;
    timeline.batch(static_cast<std::uint64_t>(ap) * ao, it->second.drain,
                   it->second.mac_busy);
  });
  return timeline.finish();
}

Comparison compare_configs(const AccelConfig& a, const AccelConfig& b,
                           const LayerShape& layer) {
  Comparison c{simulate_layer(a, layer), simulate_layer(b, layer), 0.0};
  if (c.a.total_cycles > 0) {
    c.overhead = (static_cast<double>(c.b.total_cycles) -
                  static_cast<double>(c.a.total_cycles)) /
                 static_cast<double>(c.a.total_cycles);
  }
  return c;
}

CheckedRun simulate_layer_checked(const AccelConfig& config,
                                  const Tensor3& input,
                                  const EncodedKernels& enc,
                                  const Codebook& cb,
                                  const AccumulatorFormats& formats) {
  config.validate();
  const KernelShape& ks = enc.shape;
  const LayerShape layer{input.width(), input.height(), ks.k, ks.input_channels,
                         ks.output_channels};
  layer.validate();
  if (input.channels() != ks.input_channels) {
    fail(Errc::shape_mismatch, "input channels do not match kernels");
  }
  if (cb.size() != static_cast<std::size_t>(config.b)) {
    fail(Errc::shape_mismatch, "codebook size differs from configured b");
  }

  const std::size_t n = layer.macs_per_output();
  const std::size_t out_h = input.height() - ks.k + 1;
  Tensor3 out(input.width() - ks.k + 1, out_h, ks.output_channels, input.format());
  const int gw = config.weight_inputs_per_cycle;

  Timeline timeline(config, n);
  std::vector<PasState> pas;
  std::vector<WsMacState> macs;

  for_each_batch(config, layer, [&](std::size_t p0, std::size_t o0, int ap, int ao) {
    auto target = [&](int u) {
      const std::size_t p = p0 + static_cast<std::size_t>(u / gw);
      const std::size_t o = o0 + static_cast<std::size_t>(u % gw);
      return std::tuple{p / out_h, p % out_h, o};
    };
    std::vector<int> active;
    for (int pi = 0; pi < ap; ++pi) {
      for (int oi = 0; oi < ao; ++oi) active.push_back(pi * gw + oi);
    }

    pas.clear();
    macs.clear();
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (config.mode == AccelMode::pas_shared_mac) {
        pas.push_back(PasState::reset(cb.size(), formats.bins));
      } else {
        macs.emplace_back(cb, formats.mac);
      }
    }

    // Accumulate phase: one window element per cycle on every active unit.
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t x = t / (ks.k * ks.input_channels);
      const std::size_t y = (t / ks.input_channels) % ks.k;
      const std::size_t i = t % ks.input_channels;
      for (std::size_t j = 0; j < active.size(); ++j) {
        const auto [w, h, o] = target(active[j]);
        const Fxp image = input.at(w + x, h + y, i);
        const std::size_t bin = enc.indices[ks.offset(o, x, y, i)];
        if (config.mode == AccelMode::pas_shared_mac) {
          pas[j].accumulate(image, bin);
        } else {
          macs[j].step(image, bin);
        }
      }
    }

    if (config.mode == AccelMode::direct_mac) {
      for (std::size_t j = 0; j < active.size(); ++j) {
        const auto [w, h, o] = target(active[j]);
        out.set(w, h, o, macs[j].result(input.format()));
      }
      timeline.batch(active.size(), 0, 0);
      return;
    }

    // Post-pass: each MAC drains its PAS units in ascending order, one bin
    // per cycle.
    std::uint64_t drain = 0;
    std::uint64_t mac_busy = 0;
    for (const auto& list : drain_lists(config, ap, ao)) {
      std::uint64_t cycles = 0;
      for (const int u : list) {
        const std::size_t j = static_cast<std::size_t>(
            std::find(active.begin(), active.end(), u) - active.begin());
        Fxp acc = Fxp::zero(formats.post);
        for (std::size_t k = 0; k < cb.size(); ++k, ++cycles) {
          acc = add(acc, resize(mul_full(pas[j].bin(k), cb.weight(k)), formats.post));
        }
        const auto [w, h, o] = target(u);
        out.set(w, h, o, resize(acc, input.format()));
      }
      drain = std::max(drain, cycles);
      mac_busy += cycles;
    }
    timeline.batch(active.size(), drain, mac_busy);
  });

  return CheckedRun{timeline.finish(), std::move(out)};
}

CycleRecord make_cycle_record(const AccelConfig& config, const LayerShape& layer,
                              const CycleReport& report) {
  CycleRecord r;
  r.mode = to_string(config.mode);
  r.w = config.w;
  r.b = config.b;
  r.n_pas = config.n_pas_units;
  r.n_mac = config.n_mac_units;
  r.k = static_cast<std::int64_t>(layer.k);
  r.c = static_cast<std::int64_t>(layer.in_channels);
  r.out_ch = static_cast<std::int64_t>(layer.out_channels);
  r.width = static_cast<std::int64_t>(layer.width);
  r.height = static_cast<std::int64_t>(layer.height);
  r.acc_cycles = static_cast<std::int64_t>(report.accumulate_cycles);
  r.post_cycles = static_cast<std::int64_t>(report.postpass_cycles);
  r.total_cycles = static_cast<std::int64_t>(report.total_cycles);
  r.util_pas = report.util_pas;
  r.util_mac = report.util_mac;
  return r;
}

const std::vector<std::string>& cycle_csv_header() {
  static const std::vector<std::string> header{
      "mode",   "w",          "b",           "n_pas",        "n_mac",
      "K",      "c",          "out_ch",      "width",        "height",
      "acc_cycles", "post_cycles", "total_cycles", "util_pas", "util_mac"};
  return header;
}

void write_cycle_csv(std::ostream& out, const std::vector<CycleRecord>& rows) {
  csv::write_row(out, cycle_csv_header());
  for (const auto& r : rows) {
    csv::write_row(out, {r.mode, std::to_string(r.w), std::to_string(r.b),
                         std::to_string(r.n_pas), std::to_string(r.n_mac),
                         std::to_string(r.k), std::to_string(r.c),
                         std::to_string(r.out_ch), std::to_string(r.width),
                         std::to_string(r.height), std::to_string(r.acc_cycles),
                         std::to_string(r.post_cycles),
                         std::to_string(r.total_cycles),
                         csv::format_double(r.util_pas),
                         csv::format_double(r.util_mac)});
  }
}

std::vector<CycleRecord> read_cycle_csv(std::istream& in) {
  const csv::Table t = csv::read(in);
  if (t.header != cycle_csv_header()) fail(Errc::parse, "unexpected cycle CSV header");
  std::vector<CycleRecord> rows;
  for (const auto& f : t.rows) {
    CycleRecord r;
    r.mode = to_string(parse_accel_mode(f[0]));
    r.w = csv::parse_int(f[1]);
    r.b = csv::parse_int(f[2]);
    r.n_pas = csv::parse_int(f[3]);
    r.n_mac = csv::parse_int(f[4]);
    r.k = csv::parse_int(f[5]);
    r.c = csv::parse_int(f[6]);
    r.out_ch = csv::parse_int(f[7]);
    r.width = csv::parse_int(f[8]);
    r.height = csv::parse_int(f[9]);
    r.acc_cycles = csv::parse_int(f[10]);
    r.post_cycles = csv::parse_int(f[11]);
    r.total_cycles = csv::parse_int(f[12]);
    r.util_pas = csv::parse_double(f[13]);
    r.util_mac = csv::parse_double(f[14]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace pasm

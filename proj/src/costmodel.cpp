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

#include "pasm/costmodel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>

#include "pasm/csv.hpp"
#include "pasm/error.hpp"

namespace pasm {

namespace {

constexpr const char* kConstantNames[4] = {"adder_per_bit", "mult_per_bit_sq",
                                           "register_per_bit",
                                           "regfile_port_per_bit_entry"};

double* constant_slot(GateConstants& k, std::string_view name) {
  if (name == kConstantNames[0]) return &k.adder_per_bit;
  if (name == kConstantNames[1]) return &k.mult_per_bit_sq;
  if (name == kConstantNames[2]) return &k.register_per_bit;
  if (name == kConstantNames[3]) return &k.regfile_port_per_bit_entry;
  return nullptr;
}

CostReport price(std::string unit, const UnitCounts& n, int w, int b,
                 const GateConstants& k) {
  const double wd = w;
  CostReport r;
  r.unit = std::move(unit);
  r.w = w;
  r.b = b;
  r.adder = n.adders * k.adder_per_bit * wd;
  r.mult = n.multipliers * k.mult_per_bit_sq * wd * wd;
  r.reg = n.registers * k.register_per_bit * wd;
  r.regfile_port = n.regfile_ports * k.regfile_port_per_bit_entry * wd * b;
  r.total = r.adder + r.mult + r.reg + r.regfile_port;
  return r;
}

UnitCounts scaled(UnitCounts n, double by) {
  return {n.adders * by, n.multipliers * by, n.registers * by, n.regfile_ports * by};
}

UnitCounts plus(UnitCounts a, UnitCounts b) {
  return {a.adders + b.adders, a.multipliers + b.multipliers,
          a.registers + b.registers, a.regfile_ports + b.regfile_ports};
}

void check_width(int w) {
  if (w < 2) fail(Errc::invalid_argument, "bit width must be at least 2");
}

}  // namespace

void GateConstants::validate() const {
  for (const double v : {adder_per_bit, mult_per_bit_sq, register_per_bit,
                         regfile_port_per_bit_entry}) {
    if (!std::isfinite(v) || v <= 0) {
      fail(Errc::invalid_argument, "gate constants must be positive");
    }
  }
}

std::string to_string(UnitKind kind) {
  switch (kind) {
    case UnitKind::simple_mac: return "simple-mac";
    case UnitKind::ws_mac: return "ws-mac";
    case UnitKind::pas: return "pas";
  }
  return "?";
}

UnitCounts unit_counts(UnitKind kind, int b) {
  switch (kind) {
    case UnitKind::simple_mac: return {1, 1, 1, 0};
    case UnitKind::ws_mac: return {1, 1, static_cast<double>(b), 1};
    case UnitKind::pas: return {1, 0, static_cast<double>(b), 2};
  }
  return {};
}

CostReport unit_gates(UnitKind kind, int w, int b, const GateConstants& k) {
  k.validate();
  check_width(w);
  if (kind != UnitKind::simple_mac) wci_for_bins(static_cast<std::size_t>(std::max(b, 0)));
  return price(to_string(kind), unit_counts(kind, b), w, b, k);
}

CostReport config_gates(const AccelConfig& config, const GateConstants& k) {
  config.validate();
  k.validate();
  UnitCounts n = scaled(unit_counts(UnitKind::ws_mac, config.b), config.n_mac_units);
  if (config.mode == AccelMode::pas_shared_mac) {
    n = plus(n, scaled(unit_counts(UnitKind::pas, config.b), config.n_pas_units));
  }
  return price(config.label(), n, config.w, config.b, k);
}

std::uint64_t macs_per_output(std::uint64_t k, std::uint64_t c) {
  if (k == 0 || c == 0) fail(Errc::invalid_argument, "K and c must be positive");
  return k * k * c;
}

std::vector<SweepPoint> sweep_configs(std::span<const int> w_values,
                                      std::span<const int> b_values,
                                      const GateConstants& k) {
  if (w_values.empty() || b_values.empty()) {
    fail(Errc::invalid_argument, "sweep needs at least one w and one b");
  }
  std::vector<int> ws(w_values.begin(), w_values.end());
  std::vector<int> bs(b_values.begin(), b_values.end());
  std::sort(ws.begin(), ws.end());
  std::sort(bs.begin(), bs.end());
  std::vector<SweepPoint> points;
  for (const int w : ws) {
    for (const int b : bs) {
      SweepPoint p;
      p.w = w;
      p.b = b;
      p.mac = config_gates(AccelConfig::sixteen_mac(w, b), k);
      p.pasm = config_gates(AccelConfig::sixteen_pas_four_mac(w, b), k);
      p.ratio = p.pasm.total / p.mac.total;
      points.push_back(std::move(p));
    }
  }
  return points;
}

std::vector<CostReport> sweep(std::span<const int> w_values,
                              std::span<const int> b_values,
                              const GateConstants& k) {
  std::vector<CostReport> rows;
  for (const auto& p : sweep_configs(w_values, b_values, k)) {
    for (const auto kind : {UnitKind::simple_mac, UnitKind::ws_mac, UnitKind::pas}) {
      rows.push_back(unit_gates(kind, p.w, p.b, k));
    }
    rows.push_back(p.mac);
    rows.push_back(p.pasm);
  }
  return rows;
}

std::optional<int> find_crossover(int w, int max_b, const GateConstants& k) {
  k.validate();
  check_width(w);
  std::optional<int> crossover;
  for (int b = 2; b <= max_b; b *= 2) {
    const double mac = price("", scaled(unit_counts(UnitKind::ws_mac, b), 16), w, b, k).total;
    const double pasm =
        price("", plus(scaled(unit_counts(UnitKind::pas, b), 16),
                       scaled(unit_counts(UnitKind::ws_mac, b), 4)),
              w, b, k)
            .total;
    if (pasm > mac) {
      if (!crossover) crossover = b;
    } else {
      crossover.reset();
    }
  }
  return crossover;
}

GateConstants read_constants_csv(std::istream& in) {
  const csv::Table t = csv::read(in);
  const std::size_t cn = t.column("name");
  const std::size_t cv = t.column("value");
  GateConstants k;
  for (const auto& row : t.rows) {
    double* slot = constant_slot(k, row[cn]);
    if (!slot) fail(Errc::parse, "unknown gate constant '" + row[cn] + "'");
    *slot = csv::parse_double(row[cv]);
  }
  try {
    k.validate();
  } catch (const Error& e) {
    fail(Errc::parse, e.what());
  }
  return k;
}

GateConstants load_constants_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open '" + path + "'");
  return read_constants_csv(in);
}

void write_constants_csv(std::ostream& out, const GateConstants& k) {
  csv::write_row(out, {"name", "value"});
  csv::write_row(out, {kConstantNames[0], csv::format_double(k.adder_per_bit)});
  csv::write_row(out, {kConstantNames[1], csv::format_double(k.mult_per_bit_sq)});
  csv::write_row(out, {kConstantNames[2], csv::format_double(k.register_per_bit)});
  csv::write_row(out,
                 {kConstantNames[3], csv::format_double(k.regfile_port_per_bit_entry)});
}

void write_cost_csv(std::ostream& out, const std::vector<CostReport>& rows) {
  csv::write_row(out, {"unit", "w", "b", "adder", "mult", "register", "regfile_port",
                       "total"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.unit, std::to_string(r.w), std::to_string(r.b),
                         csv::format_double(r.adder), csv::format_double(r.mult),
                         csv::format_double(r.reg), csv::format_double(r.regfile_port),
                         csv::format_double(r.total)});
  }
}

std::vector<CostReport> read_cost_csv(std::istream& in) {
  const csv::Table t = csv::read(in);
  const std::vector<std::string> expected{"unit",     "w",            "b",
                                          "adder",    "mult",         "register",
                                          "regfile_port", "total"};
  if (t.header != expected) fail(Errc::parse, "unexpected cost CSV header");
  std::vector<CostReport> rows;
  for (const auto& f : t.rows) {
    CostReport r;
    r.unit = f[0];
    r.w = static_cast<int>(csv::parse_int(f[1]));
    r.b = static_cast<int>(csv::parse_int(f[2]));
    r.adder = csv::parse_double(f[3]);
    r.mult = csv::parse_double(f[4]);
    r.reg = csv::parse_double(f[5]);
    r.regfile_port = csv::parse_double(f[6]);
    r.total = csv::parse_double(f[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

const std::vector<std::string>& sweep_csv_header() {
  static const std::vector<std::string> header{
      "w",          "b",          "mac_adder",        "mac_mult",   "mac_register",
      "mac_regfile_port", "mac_total", "pasm_adder", "pasm_mult", "pasm_register",
      "pasm_regfile_port", "pasm_total", "ratio"};
  return header;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  csv::write_row(out, sweep_csv_header());
  for (const auto& p : points) {
    std::vector<std::string> row{std::to_string(p.w), std::to_string(p.b)};
    for (const CostReport* r : {&p.mac, &p.pasm}) {
      for (const double v : {r->adder, r->mult, r->reg, r->regfile_port, r->total}) {
        row.push_back(csv::format_double(v));
      }
    }
    row.push_back(csv::format_double(p.ratio));
    csv::write_row(out, row);
  }
}

std::vector<SweepPoint> read_sweep_csv(std::istream& in) {
  const csv::Table t = csv::read(in);
  if (t.header != sweep_csv_header()) fail(Errc::parse, "unexpected sweep CSV header");
  std::vector<SweepPoint> points;
  for (const auto& f : t.rows) {
    SweepPoint p;
    p.w = static_cast<int>(csv::parse_int(f[0]));
    p.b = static_cast<int>(csv::parse_int(f[1]));
    std::size_t col = 2;
    for (CostReport* r : {&p.mac, &p.pasm}) {
      r->unit = r == &p.mac ? "16-mac" : "16-pas-4-mac";
      r->w = p.w;
      r->b = p.b;
      for (double* v : {&r->adder, &r->mult, &r->reg, &r->regfile_port, &r->total}) {
        *v = csv::parse_double(f[col++]);
      }
    }
    p.ratio = csv::parse_double(f[col]);
    points.push_back(std::move(p));
  }
  return points;
}

GateConstants fit_constants(std::span<const CalibrationSample> samples) {
  if (samples.size() < 4) {
    fail(Errc::invalid_argument, "calibration needs at least four samples");
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(samples.size()), 4);
  Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double w = s.w;
    const auto row = static_cast<Eigen::Index>(i);
    a(row, 0) = s.counts.adders * w;
    a(row, 1) = s.counts.multipliers * w * w;
    a(row, 2) = s.counts.registers * w;
    a(row, 3) = s.counts.regfile_ports * w * s.b;
    y(row) = s.gates;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < 4) {
    fail(Errc::invalid_argument, "calibration samples do not separate all four categories");
  }
  const Eigen::VectorXd x = qr.solve(y);
  GateConstants k{x(0), x(1), x(2), x(3)};
  k.validate();
  return k;
}

}  // namespace pasm

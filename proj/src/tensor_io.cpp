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

#include "pasm/tensor_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "pasm/csv.hpp"
#include "pasm/error.hpp"

namespace pasm {

namespace {

constexpr char kMagic[4] = {'P', 'A', 'S', 'M'};

void put_u16(std::ostream& out, std::uint16_t v) {
  const char bytes[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.write(bytes, 2);
}

void put_i64(std::ostream& out, std::int64_t v) {
  const auto u = static_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::int64_t get_i64(const unsigned char* p) {
  std::uint64_t u = 0;
  for (int i = 7; i >= 0; --i) u = (u << 8) | p[i];
  return static_cast<std::int64_t>(u);
}

std::uint16_t checked_dim(std::size_t d) {
  if (d == 0 || d > std::numeric_limits<std::uint16_t>::max()) {
    fail(Errc::invalid_argument,
         "tensor dimension " + std::to_string(d) + " outside [1, 65535]");
  }
  return static_cast<std::uint16_t>(d);
}

void require(const TensorFile& f, std::uint8_t rank, ElementKind kind) {
  if (f.rank != rank || f.kind != kind) {
    fail(Errc::parse, "expected a rank-" + std::to_string(rank) + " " +
                          (kind == ElementKind::index_u8 ? "index" : "fxp") +
                          " tensor");
  }
}

}  // namespace

std::size_t TensorFile::element_count() const noexcept {
  std::size_t n = 1;
  for (std::size_t i = 0; i < rank; ++i) n *= dims[i];
  return n;
}

void write_tensor(std::ostream& out, const TensorFile& file) {
  if (file.rank < 1 || file.rank > 4) {
    fail(Errc::invalid_argument, "tensor rank must be 1..4");
  }
  const std::size_t n = file.element_count();
  const bool fxp = file.kind == ElementKind::fxp_raw_i64;
  if ((fxp ? file.raws.size() : file.indices.size()) != n) {
    fail(Errc::shape_mismatch, "tensor payload does not match its dims");
  }
  out.write(kMagic, 4);
  out.put(static_cast<char>(file.rank));
  out.put(static_cast<char>(file.kind));
  put_u16(out, 0);
  for (std::size_t i = 0; i < 4; ++i) put_u16(out, i < file.rank ? file.dims[i] : 1);
  if (fxp) {
    for (const auto r : file.raws) put_i64(out, r);
  } else {
    out.write(reinterpret_cast<const char*>(file.indices.data()),
              static_cast<std::streamsize>(file.indices.size()));
  }
  if (!out) fail(Errc::io, "failed writing tensor");
}

TensorFile read_tensor(std::istream& in) {
  unsigned char header[kTensorHeaderBytes];
  if (!in.read(reinterpret_cast<char*>(header), sizeof(header))) {
    fail(Errc::parse, "tensor file shorter than its 16-byte header");
  }
  if (std::memcmp(header, kMagic, 4) != 0) fail(Errc::parse, "bad tensor magic");
  TensorFile f;
  f.rank = header[4];
  if (f.rank < 1 || f.rank > 4) fail(Errc::parse, "tensor rank must be 1..4");
  if (header[5] > 1) fail(Errc::parse, "unknown tensor element kind");
  f.kind = static_cast<ElementKind>(header[5]);
  for (std::size_t i = 0; i < 4; ++i) f.dims[i] = get_u16(header + 8 + 2 * i);
  for (std::size_t i = f.rank; i < 4; ++i) f.dims[i] = 1;
  const std::size_t n = f.element_count();
  if (f.kind == ElementKind::fxp_raw_i64) {
    std::vector<unsigned char> bytes(n * 8);
    if (!in.read(reinterpret_cast<char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()))) {
      fail(Errc::parse, "tensor payload truncated");
    }
    f.raws.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.raws[i] = get_i64(bytes.data() + 8 * i);
  } else {
    f.indices.resize(n);
    if (!in.read(reinterpret_cast<char*>(f.indices.data()),
                 static_cast<std::streamsize>(n))) {
      fail(Errc::parse, "tensor payload truncated");
    }
  }
  return f;
}

void save_tensor_file(const std::string& path, const TensorFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  write_tensor(out, file);
}

TensorFile load_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open '" + path + "'");
  return read_tensor(in);
}

TensorFile to_file(const Tensor3& t) {
  TensorFile f;
  f.rank = 3;
  f.kind = ElementKind::fxp_raw_i64;
  f.dims = {checked_dim(t.width()), checked_dim(t.height()),
            checked_dim(t.channels()), 1};
  f.raws.assign(t.raws().begin(), t.raws().end());
  return f;
}

TensorFile to_file(const KernelSet& k) {
  const auto& s = k.shape();
  TensorFile f;
  f.rank = 4;
  f.kind = ElementKind::fxp_raw_i64;
  f.dims = {checked_dim(s.output_channels), checked_dim(s.k), checked_dim(s.k),
            checked_dim(s.input_channels)};
  f.raws.assign(k.raws().begin(), k.raws().end());
  return f;
}

TensorFile to_file(const EncodedKernels& enc) {
  const auto& s = enc.shape;
  TensorFile f;
  f.rank = 4;
  f.kind = ElementKind::index_u8;
  f.dims = {checked_dim(s.output_channels), checked_dim(s.k), checked_dim(s.k),
            checked_dim(s.input_channels)};
  f.indices = enc.indices;
  return f;
}

Tensor3 tensor3_from_file(const TensorFile& file, QFormat fmt) {
  require(file, 3, ElementKind::fxp_raw_i64);
  return Tensor3(file.dims[0], file.dims[1], file.dims[2], fmt, file.raws);
}

KernelSet kernels_from_file(const TensorFile& file, QFormat fmt) {
  require(file, 4, ElementKind::fxp_raw_i64);
  if (file.dims[1] != file.dims[2]) fail(Errc::parse, "kernel must be K x K");
  return KernelSet(KernelShape{file.dims[0], file.dims[1], file.dims[3]}, fmt,
                   file.raws);
}

EncodedKernels encoded_from_file(const TensorFile& file, const Codebook& cb) {
  require(file, 4, ElementKind::index_u8);
  if (file.dims[1] != file.dims[2]) fail(Errc::parse, "kernel must be K x K");
  for (const auto i : file.indices) {
    if (i >= cb.size()) fail(Errc::parse, "bin index exceeds codebook size");
  }
  return EncodedKernels{KernelShape{file.dims[0], file.dims[1], file.dims[3]},
                        file.indices, cb};
}

void write_codebook_csv(std::ostream& out, const Codebook& cb) {
  csv::write_row(out, {"index", "raw", "value"});
  for (std::size_t k = 0; k < cb.size(); ++k) {
    csv::write_row(out, {std::to_string(k), std::to_string(cb.raws()[k]),
                         cb.weight(k).to_decimal_string()});
  }
}

Codebook read_codebook_csv(std::istream& in, QFormat fmt) {
  const csv::Table table = csv::read(in);
  const std::size_t ci = table.column("index");
  const std::size_t cr = table.column("raw");
  const std::size_t cv = table.column("value");
  std::vector<std::int64_t> raws;
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& r = table.rows[row];
    if (csv::parse_int(r[ci]) != static_cast<std::int64_t>(row)) {
      fail(Errc::parse, "codebook indices must ascend from 0");
    }
    const std::int64_t raw = csv::parse_int(r[cr]);
    if (!fmt.fits(raw)) fail(Errc::parse, "codebook raw out of range for " + fmt.to_string());
    if (Fxp::from_raw(raw, fmt).to_decimal_string() != r[cv] &&
        std::abs(csv::parse_double(r[cv]) - Fxp::from_raw(raw, fmt).to_double()) >
            std::ldexp(1.0, -fmt.frac_bits - 1)) {
      fail(Errc::parse, "codebook row " + std::to_string(row) +
                            ": value disagrees with raw under " + fmt.to_string());
    }
    raws.push_back(raw);
  }
  return Codebook::from_raws(std::move(raws), fmt);
}

}  // namespace pasm

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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "pasm/csv.hpp"
#include "support/oracles.hpp"

namespace pasm {
namespace {

using testing::errc_of;

std::string bytes_of(const TensorFile& f) {
  std::ostringstream out(std::ios::binary);
  write_tensor(out, f);
  return out.str();
}

TEST(TensorIoTest, HeaderLayoutIsLittleEndian) {
  TensorFile f;
  f.rank = 2;
  f.kind = ElementKind::fxp_raw_i64;
  f.dims = {2, 1, 7, 7};
  f.raws = {1, -2};
  const std::string b = bytes_of(f);
  ASSERT_EQ(b.size(), kTensorHeaderBytes + 16);
  const std::string expected_header("PASM\x02\x00\x00\x00\x02\x00\x01\x00\x01\x00\x01\x00", 16);
  EXPECT_EQ(b.substr(0, 16), expected_header);
  EXPECT_EQ(b.substr(16, 8), std::string("\x01\0\0\0\0\0\0\0", 8));
  EXPECT_EQ(b.substr(24, 8), std::string("\xfe\xff\xff\xff\xff\xff\xff\xff", 8));
}

TEST(TensorIoTest, Tensor3RoundTrip) {
  std::mt19937_64 rng(21);
  const QFormat fmt = QFormat::make(64, 10);
  const Tensor3 t = testing::tensor_of(rng, 5, 3, 4, fmt);
  std::stringstream s(std::ios::in | std::ios::out | std::ios::binary);
  write_tensor(s, to_file(t));
  const TensorFile f = read_tensor(s);
  EXPECT_EQ(f.rank, 3);
  EXPECT_EQ(tensor3_from_file(f, fmt), t);
}

TEST(TensorIoTest, EncodedKernelRoundTrip) {
  std::mt19937_64 rng(22);
  const QFormat fmt = QFormat::make(16, 8);
  const Codebook cb = testing::codebook_of(rng, fmt, 16);
  const KernelShape shape{4, 3, 2};
  const EncodedKernels enc{shape, testing::indices_of(rng, 16, shape.size()), cb};
  std::stringstream s(std::ios::in | std::ios::out | std::ios::binary);
  write_tensor(s, to_file(enc));
  const EncodedKernels back = encoded_from_file(read_tensor(s), cb);
  EXPECT_EQ(back.shape, shape);
  EXPECT_EQ(back.indices, enc.indices);
}

TEST(TensorIoTest, KernelSetRoundTrip) {
  std::mt19937_64 rng(23);
  const QFormat fmt = QFormat::make(12, 3);
  const KernelShape shape{2, 5, 3};
  const KernelSet k(shape, fmt, testing::raws_of(rng, fmt, shape.size()));
  std::stringstream s(std::ios::in | std::ios::out | std::ios::binary);
  write_tensor(s, to_file(k));
  EXPECT_EQ(kernels_from_file(read_tensor(s), fmt), k);
}

TEST(TensorIoTest, MalformedInputsAreParseErrors) {
  TensorFile f;
  f.rank = 1;
  f.dims = {3, 1, 1, 1};
  f.raws = {1, 2, 3};
  const std::string good = bytes_of(f);
  auto parse = [](std::string b) {
    std::istringstream in(b);
    return errc_of([&] { read_tensor(in); });
  };
  EXPECT_EQ(parse(good), std::nullopt);
  EXPECT_EQ(parse(good.substr(0, 10)), Errc::parse);
  EXPECT_EQ(parse(good.substr(0, good.size() - 1)), Errc::parse);
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(parse(bad_magic), Errc::parse);
  std::string bad_rank = good;
  bad_rank[4] = 5;
  EXPECT_EQ(parse(bad_rank), Errc::parse);
  std::string bad_kind = good;
  bad_kind[5] = 2;
  EXPECT_EQ(parse(bad_kind), Errc::parse);
}

TEST(TensorIoTest, WrongKindOrRankRejected) {
  TensorFile f;
  f.rank = 1;
  f.dims = {2, 1, 1, 1};
  f.raws = {1, 2};
  EXPECT_EQ(errc_of([&] { tensor3_from_file(f, QFormat::make(8, 0)); }), Errc::parse);
  const Codebook cb = Codebook::from_raws({0, 1}, QFormat::make(8, 0));
  EXPECT_EQ(errc_of([&] { encoded_from_file(f, cb); }), Errc::parse);
}

TEST(TensorIoTest, IndexBeyondCodebookRejected) {
  TensorFile f;
  f.rank = 4;
  f.kind = ElementKind::index_u8;
  f.dims = {1, 1, 1, 2};
  f.indices = {0, 2};
  const Codebook cb = Codebook::from_raws({0, 1}, QFormat::make(8, 0));
  EXPECT_EQ(errc_of([&] { encoded_from_file(f, cb); }), Errc::parse);
}

TEST(TensorIoTest, PayloadMustMatchDims) {
  TensorFile f;
  f.rank = 2;
  f.dims = {2, 2, 1, 1};
  f.raws = {1, 2, 3};
  std::ostringstream out;
  EXPECT_EQ(errc_of([&] { write_tensor(out, f); }), Errc::shape_mismatch);
}

TEST(CodebookCsvTest, RoundTripsExactly) {
  std::mt19937_64 rng(24);
  for (const QFormat fmt : {QFormat::make(24, 8), QFormat::make(64, 40), QFormat::make(8, 7)}) {
    const Codebook cb = testing::codebook_of(rng, fmt, 32);
    std::stringstream s;
    write_codebook_csv(s, cb);
    EXPECT_EQ(read_codebook_csv(s, fmt), cb);
  }
}

TEST(CodebookCsvTest, ExactDecimalValues) {
  const QFormat fmt = QFormat::make(24, 8);
  std::stringstream s;
  write_codebook_csv(s, Codebook::from_raws({256, -435}, fmt));
  EXPECT_EQ(s.str(), "index,raw,value\n0,256,1\n1,-435,-1.69921875\n");
}

TEST(CodebookCsvTest, InconsistentRowsRejected) {
  const QFormat fmt = QFormat::make(24, 8);
  std::istringstream wrong_value("index,raw,value\n0,256,1\n1,512,3\n");
  EXPECT_EQ(errc_of([&] { read_codebook_csv(wrong_value, fmt); }), Errc::parse);
  std::istringstream wrong_order("index,raw,value\n1,256,1\n0,512,2\n");
  EXPECT_EQ(errc_of([&] { read_codebook_csv(wrong_order, fmt); }), Errc::parse);
  std::istringstream ragged("index,raw,value\n0,256\n");
  EXPECT_EQ(errc_of([&] { read_codebook_csv(ragged, fmt); }), Errc::parse);
}

TEST(CsvTest, DoublesRoundTrip) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(static_cast<double>(rng() >> 11), -static_cast<int>(rng() % 80));
    EXPECT_EQ(csv::parse_double(csv::format_double(v)), v);
  }
  EXPECT_EQ(errc_of([] { csv::parse_double("1.5x"); }), Errc::parse);
  EXPECT_EQ(errc_of([] { csv::parse_int("12.0"); }), Errc::parse);
}

}  // namespace
}  // namespace pasm

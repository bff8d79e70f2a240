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

#include "pasm/codebook.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support/oracles.hpp"

namespace pasm {
namespace {

using testing::errc_of;

const QFormat kQ16 = QFormat::make(16, 0);

std::vector<std::int64_t> ints(std::initializer_list<std::int64_t> v) { return v; }

TEST(CodebookTest, BinsMustBePowersOfTwoUpTo256) {
  for (std::size_t b : {2u, 4u, 8u, 16u, 32u, 64u, 128u, 256u}) {
    EXPECT_EQ(std::size_t{1} << wci_for_bins(b), b);
  }
  for (std::size_t b : {0u, 1u, 3u, 12u, 255u, 512u}) {
    EXPECT_EQ(errc_of([&] { wci_for_bins(b); }), Errc::invalid_argument) << b;
  }
  EXPECT_EQ(errc_of([] { Codebook::from_raws({1, 2, 3}, QFormat::make(16, 0)); }),
            Errc::invalid_argument);
}

TEST(CodebookTest, CodewordsMustFitTheFormat) {
  EXPECT_EQ(errc_of([] { Codebook::from_raws({0, 128}, QFormat::make(8, 0)); }),
            Errc::overflow);
}

TEST(CodebookTest, UniformRangeUsesIntervalCenters) {
  const auto raws = ints({0, 100});
  const Codebook cb = build_codebook(raws, kQ16, 4);
  // Intervals of width 25 over [0, 100]; centers round half away from zero.
  EXPECT_EQ(std::vector<std::int64_t>(cb.raws().begin(), cb.raws().end()),
            ints({13, 38, 63, 88}));
}

TEST(CodebookTest, DegenerateRangeGivesRepeatedCodeword) {
  const auto raws = ints({7, 7, 7});
  for (auto method : {BinningMethod::uniform_range, BinningMethod::lloyd_kmeans}) {
    const Codebook cb = build_codebook(raws, kQ16, 4, method);
    for (const auto r : cb.raws()) {
      if (method == BinningMethod::uniform_range) EXPECT_EQ(r, 7);
    }
    EXPECT_EQ(cb.raws()[cb.nearest(7)], 7);
  }
}

TEST(CodebookTest, NearestBreaksTiesTowardLowerIndex) {
  const Codebook cb = Codebook::from_raws({10, 20, 20, 30}, kQ16);
  EXPECT_EQ(cb.nearest(15), 0u);
  EXPECT_EQ(cb.nearest(20), 1u);
  EXPECT_EQ(cb.nearest(25), 1u);
  EXPECT_EQ(cb.nearest(-100), 0u);
  EXPECT_EQ(cb.nearest(1000), 3u);
}

TEST(CodebookTest, LloydSeparatesOutlierCluster) {
  const auto raws = ints({0, 1, 2, 9});
  LloydTrace trace;
  const Codebook cb = build_codebook(raws, kQ16, 2, BinningMethod::lloyd_kmeans, &trace);
  EXPECT_EQ(std::vector<std::int64_t>(cb.raws().begin(), cb.raws().end()), ints({1, 9}));
  EXPECT_TRUE(trace.converged);
  std::vector<std::size_t> idx;
  for (const auto r : raws) idx.push_back(cb.nearest(r));
  EXPECT_EQ(idx, (std::vector<std::size_t>{0, 0, 0, 1}));
}

TEST(CodebookTest, LloydRecoversTwoValues) {
  const auto raws = ints({256, 256, 512, 512});
  const Codebook cb =
      build_codebook(raws, QFormat::make(24, 8), 2, BinningMethod::lloyd_kmeans);
  EXPECT_EQ(std::vector<std::int64_t>(cb.raws().begin(), cb.raws().end()), ints({256, 512}));
}

TEST(CodebookTest, LloydErrorNeverIncreases) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 60; ++iter) {
    const QFormat fmt = QFormat::make(8 + static_cast<int>(rng() % 40), 4);
    const std::size_t b = std::size_t{1} << (1 + rng() % 6);
    const auto raws = testing::raws_of(rng, fmt, 1 + rng() % 400, iter % 2 == 0);
    LloydTrace trace;
    build_codebook(raws, fmt, b, BinningMethod::lloyd_kmeans, &trace);
    ASSERT_GE(trace.sse.size(), 2u);
    ASSERT_LE(trace.iterations, kLloydMaxIterations);
    for (std::size_t i = 1; i < trace.sse.size(); ++i) {
      ASSERT_LE(trace.sse[i], trace.sse[i - 1]) << "iteration " << i;
    }
  }
}

TEST(CodebookTest, LloydNeverWorseThanUniformStart) {
  std::mt19937_64 rng(12);
  for (int iter = 0; iter < 40; ++iter) {
    const auto raws = testing::raws_of(rng, kQ16, 300);
    const Codebook u = build_codebook(raws, kQ16, 8);
    const Codebook l = build_codebook(raws, kQ16, 8, BinningMethod::lloyd_kmeans);
    long double su = 0;
    long double sl = 0;
    for (const auto r : raws) {
      const long double du = r - u.raws()[u.nearest(r)];
      const long double dl = r - l.raws()[l.nearest(r)];
      su += du * du;
      sl += dl * dl;
    }
    ASSERT_LE(sl, su);
  }
}

TEST(CodebookTest, UniformErrorBound) {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 300; ++iter) {
    const QFormat fmt = QFormat::make(4 + static_cast<int>(rng() % 61), 0);
    const std::size_t b = std::size_t{1} << (1 + rng() % 8);
    const auto raws = testing::raws_of(rng, fmt, 1 + rng() % 200, iter % 3 == 0);
    const Codebook cb = build_codebook(raws, fmt, b);
    const auto [lo, hi] = std::minmax_element(raws.begin(), raws.end());
    const long double bound =
        (static_cast<long double>(*hi) - static_cast<long double>(*lo)) / (2.0L * b) + 1;
    for (const auto r : raws) {
      const long double e = std::fabs(static_cast<long double>(r) -
                                      static_cast<long double>(cb.raws()[cb.nearest(r)]));
      ASSERT_LE(e, bound) << fmt.to_string() << " b=" << b;
    }
  }
}

TEST(CodebookTest, EncodeDecodeRoundTrip) {
  std::mt19937_64 rng(14);
  const QFormat fmt = QFormat::make(16, 8);
  const KernelShape shape{3, 3, 5};
  KernelSet k(shape, fmt, testing::raws_of(rng, fmt, shape.size()));
  const Codebook cb = build_codebook(k.raws(), fmt, 16);
  const EncodedKernels enc = encode(k, cb);
  ASSERT_EQ(enc.indices.size(), shape.size());
  const KernelSet back = decode(enc);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    EXPECT_EQ(back.raws()[i], cb.raws()[enc.indices[i]]);
    EXPECT_EQ(enc.indices[i], cb.nearest(k.raws()[i]));
  }
  // Decoding already-quantized weights is a fixpoint.
  EXPECT_EQ(decode(encode(back, cb)), back);
}

TEST(CodebookTest, EncodeRejectsFormatMismatch) {
  KernelSet k(KernelShape{1, 1, 1}, QFormat::make(16, 8));
  const Codebook cb = Codebook::from_raws({0, 1}, QFormat::make(16, 4));
  EXPECT_EQ(errc_of([&] { encode(k, cb); }), Errc::format_mismatch);
}

TEST(CodebookTest, DecodeRejectsOutOfRangeIndex) {
  const Codebook cb = Codebook::from_raws({0, 1}, kQ16);
  const EncodedKernels enc{KernelShape{1, 1, 1}, {2}, cb};
  EXPECT_EQ(errc_of([&] { decode(enc); }), Errc::out_of_range);
}

TEST(CodebookTest, EmptyInputRejected) {
  EXPECT_EQ(errc_of([] { build_codebook(std::span<const std::int64_t>{}, kQ16, 2); }),
            Errc::invalid_argument);
}

}  // namespace
}  // namespace pasm

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

#include <algorithm>
#include <cmath>
#include <string>

#include "pasm/error.hpp"

namespace pasm {

int wci_for_bins(std::size_t b) {
  for (int wci = 1; wci <= 8; ++wci) {
    if (b == (std::size_t{1} << wci)) return wci;
  }
  fail(Errc::invalid_argument,
       "b must be a power of two in [2, 256], got " + std::to_string(b));
}

Codebook::Codebook(std::vector<std::int64_t> raws, QFormat fmt)
    : raws_(std::move(raws)), fmt_(fmt), wci_(wci_for_bins(raws_.size())) {
  require_storage_format(fmt_, "codebook");
  for (const auto r : raws_) {
    if (!fmt_.fits(r)) {
      fail(Errc::overflow, "codeword " + std::to_string(r) +
                               " not representable in " + fmt_.to_string());
    }
  }
}

Codebook::Codebook(std::vector<Fxp> weights)
    : Codebook(
          [&] {
            std::vector<std::int64_t> raws;
            raws.reserve(weights.size());
            for (const auto& w : weights) {
              if (w.format() != weights.front().format()) {
                fail(Errc::format_mismatch,
                     "codebook weights must share one format");
              }
              raws.push_back(static_cast<std::int64_t>(w.raw()));
            }
            return raws;
          }(),
          weights.empty() ? QFormat{} : weights.front().format()) {}

Codebook Codebook::from_raws(std::vector<std::int64_t> raws, QFormat fmt) {
  return Codebook(std::move(raws), fmt);
}

Fxp Codebook::weight(std::size_t k) const {
  if (k >= raws_.size()) {
    fail(Errc::out_of_range, "codebook index " + std::to_string(k) +
                                 " >= b=" + std::to_string(raws_.size()));
  }
  return Fxp::from_raw(raws_[k], fmt_);
}

std::size_t Codebook::nearest(std::int64_t raw) const noexcept {
  std::size_t best = 0;
  wide_int best_dist = -1;
  for (std::size_t k = 0; k < raws_.size(); ++k) {
    wide_int d = static_cast<wide_int>(raw) - raws_[k];
    if (d < 0) d = -d;
    if (best_dist < 0 || d < best_dist) {
      best = k;
      best_dist = d;
    }
  }
  return best;
}

namespace {

std::int64_t round_to_raw(long double v, QFormat fmt) {
  long double r = std::round(v);
  const long double lo = static_cast<long double>(static_cast<std::int64_t>(fmt.min_raw()));
  const long double hi = static_cast<long double>(static_cast<std::int64_t>(fmt.max_raw()));
  r = std::clamp(r, lo, hi);
  return static_cast<std::int64_t>(r);
}

std::vector<std::int64_t> uniform_centers(std::span<const std::int64_t> raws,
                                          QFormat fmt, std::size_t b) {
  const auto [lo_it, hi_it] = std::minmax_element(raws.begin(), raws.end());
  const long double lo = static_cast<long double>(*lo_it);
  const long double hi = static_cast<long double>(*hi_it);
  const long double step = (hi - lo) / static_cast<long double>(b);
  std::vector<std::int64_t> centers(b);
  for (std::size_t k = 0; k < b; ++k) {
    centers[k] = round_to_raw(lo + (static_cast<long double>(k) + 0.5L) * step, fmt);
  }
  return centers;
}

long double squared_error(std::span<const std::int64_t> raws,
                          const std::vector<std::size_t>& assign,
                          const std::vector<std::int64_t>& centers) {
  long double total = 0;
  for (std::size_t i = 0; i < raws.size(); ++i) {
    const long double d = static_cast<long double>(raws[i]) -
                          static_cast<long double>(centers[assign[i]]);
    total += d * d;
  }
  return total;
}

std::vector<std::size_t> assign_nearest(std::span<const std::int64_t> raws,
                                        const Codebook& cb) {
  std::vector<std::size_t> assign(raws.size());
  for (std::size_t i = 0; i < raws.size(); ++i) assign[i] = cb.nearest(raws[i]);
  return assign;
}

std::vector<std::int64_t> lloyd(std::span<const std::int64_t> raws, QFormat fmt,
                                std::size_t b, LloydTrace* trace) {
  std::vector<std::int64_t> centers = uniform_centers(raws, fmt, b);
  std::vector<std::size_t> assign =
      assign_nearest(raws, Codebook::from_raws(centers, fmt));

  LloydTrace local;
  LloydTrace& t = trace ? *trace : local;
  t = LloydTrace{};

  std::vector<long double> sums(b);
  std::vector<std::size_t> counts(b);
  for (int it = 0; it < kLloydMaxIterations; ++it) {
    t.sse.push_back(squared_error(raws, assign, centers));
    t.iterations = it + 1;

    std::fill(sums.begin(), sums.end(), 0.0L);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < raws.size(); ++i) {
      sums[assign[i]] += static_cast<long double>(raws[i]);
      ++counts[assign[i]];
    }
    for (std::size_t k = 0; k < b; ++k) {
      if (counts[k] > 0) {
        centers[k] = round_to_raw(sums[k] / static_cast<long double>(counts[k]), fmt);
      }
    }
    // Empty clusters take the point farthest from its codeword. The
    // reseeded point then sits at distance zero, so successive reseeds pick
    // distinct points.
    std::vector<std::size_t> owner = assign;
    for (std::size_t k = 0; k < b; ++k) {
      if (counts[k] != 0) continue;
      std::size_t far = 0;
      long double far_d = -1;
      for (std::size_t i = 0; i < raws.size(); ++i) {
        const long double d = std::fabs(static_cast<long double>(raws[i]) -
                                        static_cast<long double>(centers[owner[i]]));
        if (d > far_d) {
          far = i;
          far_d = d;
        }
      }
      centers[k] = raws[far];
      owner[far] = k;
    }

    auto next = assign_nearest(raws, Codebook::from_raws(centers, fmt));
    if (next == assign) {
      t.converged = true;
      break;
    }
    assign = std::move(next);
  }
  t.sse.push_back(squared_error(raws, assign, centers));
  return centers;
}

}  // namespace

Codebook build_codebook(std::span<const std::int64_t> raws, QFormat fmt,
                        std::size_t b, BinningMethod method,
                        LloydTrace* trace) {
  wci_for_bins(b);
  if (raws.empty()) fail(Errc::invalid_argument, "cannot bin an empty weight set");
  require_storage_format(fmt, "weight");
  if (method == BinningMethod::uniform_range) {
    if (trace) *trace = LloydTrace{};
    return Codebook::from_raws(uniform_centers(raws, fmt, b), fmt);
  }
  return Codebook::from_raws(lloyd(raws, fmt, b, trace), fmt);
}

Codebook build_codebook(std::span<const Fxp> weights, std::size_t b,
                        BinningMethod method, LloydTrace* trace) {
  if (weights.empty()) fail(Errc::invalid_argument, "cannot bin an empty weight set");
  const QFormat fmt = weights.front().format();
  require_storage_format(fmt, "weight");
  std::vector<std::int64_t> raws;
  raws.reserve(weights.size());
  for (const auto& w : weights) {
    if (w.format() != fmt) {
      fail(Errc::format_mismatch, "weights must share one format");
    }
    raws.push_back(static_cast<std::int64_t>(w.raw()));
  }
  return build_codebook(raws, fmt, b, method, trace);
}

EncodedKernels encode(const KernelSet& weights, const Codebook& cb) {
  if (weights.format() != cb.format()) {
    fail(Errc::format_mismatch, "kernel format " +
                                    weights.format().to_string() +
                                    " vs codebook " + cb.format().to_string());
  }
  EncodedKernels enc{weights.shape(), {}, cb};
  enc.indices.reserve(weights.raws().size());
  for (const auto r : weights.raws()) {
    enc.indices.push_back(static_cast<std::uint8_t>(cb.nearest(r)));
  }
  return enc;
}

KernelSet decode(const EncodedKernels& enc) {
  if (enc.indices.size() != enc.shape.size()) {
    fail(Errc::shape_mismatch, "index tensor length does not match shape");
  }
  const auto table = enc.codebook.raws();
  std::vector<std::int64_t> raws(enc.indices.size());
  for (std::size_t i = 0; i < raws.size(); ++i) {
    const std::size_t k = enc.indices[i];
    if (k >= table.size()) {
      fail(Errc::out_of_range, "bin index " + std::to_string(k) + " >= b");
    }
    raws[i] = table[k];
  }
  return KernelSet(enc.shape, enc.codebook.format(), std::move(raws));
}

}  // namespace pasm

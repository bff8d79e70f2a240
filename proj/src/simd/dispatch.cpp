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

#include <atomic>
#include <cstdlib>
#include <string>

#include "pasm/error.hpp"
#include "pasm/simd/kernels.hpp"

namespace pasm::simd {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{Isa::scalar, &detail::dot_i32_scalar,
                                 &detail::gather_dot_i32_scalar,
                                 &detail::bin_accumulate_scalar};
  return table;
}

const KernelTable* avx2_kernels() noexcept {
#if defined(PASM_HAVE_AVX2)
  static const KernelTable table{Isa::avx2, &detail::dot_i32_avx2,
                                 &detail::gather_dot_i32_avx2,
                                 &detail::bin_accumulate_avx2};
  static const bool cpu_has_avx2 = __builtin_cpu_supports("avx2");
  return cpu_has_avx2 ? &table : nullptr;
#else
  return nullptr;
#endif
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return avx2_kernels() != nullptr;
  }
  return false;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out{Isa::scalar};
  if (isa_supported(Isa::avx2)) out.push_back(Isa::avx2);
  return out;
}

namespace {

const KernelTable* table_for(Isa isa) noexcept {
  return isa == Isa::avx2 ? avx2_kernels() : &scalar_kernels();
}

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("PASM_ISA")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && avx2_kernels()) return avx2_kernels();
  }
  if (const auto* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

const KernelTable& active_kernels() noexcept {
  return *active_slot().load(std::memory_order_acquire);
}

Isa active_isa() noexcept { return active_kernels().isa; }

void set_active_isa(Isa isa) {
  const KernelTable* table = table_for(isa);
  if (!table) {
    fail(Errc::invalid_argument,
         "kernel ISA " + std::string(to_string(isa)) + " not supported here");
  }
  active_slot().store(table, std::memory_order_release);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }

ScopedIsa::~ScopedIsa() { set_active_isa(previous_); }

}  // namespace pasm::simd

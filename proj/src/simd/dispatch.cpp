// Copyright 2026 The mixent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <string>

#include "mixent/common/error.hpp"
#include "mixent/simd/kernels.hpp"

namespace mixent::simd {
namespace {

bool cpu_has_avx2() {
#if defined(MIXENT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  const char* env = std::getenv("MIXENT_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return Backend::kScalar;
  if (choice == "avx2" && !cpu_has_avx2()) {
    throw ContractError("MIXENT_SIMD=avx2 requested but the CPU lacks AVX2/FMA");
  }
  return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
}

const KernelTable& table_for(Backend backend) {
#if defined(MIXENT_HAVE_AVX2)
  if (backend == Backend::kAvx2) return avx2_table();
#endif
  return scalar_table();
}

struct State {
  std::atomic<Backend> backend;
  std::atomic<const KernelTable*> table;
  State() : backend(initial_backend()), table(&table_for(backend.load())) {}
};

State& state() {
  static State s;
  return s;
}

}  // namespace

bool backend_available(Backend backend) {
  return backend == Backend::kScalar || cpu_has_avx2();
}

Backend active_backend() { return state().backend.load(); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw ContractError("SIMD backend '" + std::string(backend_name(backend)) +
                        "' is not available on this CPU");
  }
  state().backend.store(backend);
  state().table.store(&table_for(backend));
}

std::string_view backend_name(Backend backend) {
  return backend == Backend::kAvx2 ? "avx2" : "scalar";
}

const KernelTable& active() { return *state().table.load(std::memory_order_relaxed); }

}  // namespace mixent::simd

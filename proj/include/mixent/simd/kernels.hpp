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

#pragma once

// Dense f64 inner loops used by the autodiff engine and optimizers.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is chosen once at startup from CPUID and can
// be forced with set_backend() or the MIXENT_SIMD environment variable
// ("scalar" | "avx2" | "auto"). Results agree with the scalar reference up to
// FMA rounding; tests/unit/simd_kernels_test.cpp pins the tolerance.

#include <cstddef>
#include <span>
#include <string_view>

namespace mixent::simd {

enum class Backend { kScalar, kAvx2 };

struct AdamCoefficients {
  double lr;
  double beta1;
  double beta2;
  double eps;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

/// Function table for one backend. Raw pointers keep the table trivially
/// copyable; the span wrappers below are the public entry points.
struct KernelTable {
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // C[m x n] += A[m x k] * B[k x n], all row-major and contiguous.
  void (*gemm_acc)(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                   std::size_t n);
  // dst = tau * src + (1 - tau) * dst
  void (*blend)(double tau, const double* src, double* dst, std::size_t n);
  void (*adam)(const AdamCoefficients& c, double* param, const double* grad, double* m, double* v,
               std::size_t n);
};

const KernelTable& scalar_table();
#if defined(MIXENT_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

bool backend_available(Backend backend);
Backend active_backend();
/// Throws mixent::ContractError if the backend is not available on this CPU.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend);

const KernelTable& active();

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void gemm_acc(std::span<const double> a, std::span<const double> b, std::span<double> c,
                     std::size_t m, std::size_t k, std::size_t n) {
  active().gemm_acc(a.data(), b.data(), c.data(), m, k, n);
}

inline void blend(double tau, std::span<const double> src, std::span<double> dst) {
  active().blend(tau, src.data(), dst.data(), src.size());
}

inline void adam(const AdamCoefficients& c, std::span<double> param, std::span<const double> grad,
                 std::span<double> m, std::span<double> v) {
  active().adam(c, param.data(), grad.data(), m.data(), v.data(), param.size());
}

}  // namespace mixent::simd

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

// AVX2 + FMA variants. This file is compiled with -mavx2 -mfma and must only
// be entered after dispatch.cpp has confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "mixent/simd/kernels.hpp"

namespace mixent::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// Register-blocked over 16 output columns: each C tile stays in four ymm
// registers while the k loop streams rows of B.
void gemm_acc_avx2(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                   std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    std::size_t j = 0;
    for (; j + 16 <= n; j += 16) {
      __m256d c0 = _mm256_loadu_pd(crow + j);
      __m256d c1 = _mm256_loadu_pd(crow + j + 4);
      __m256d c2 = _mm256_loadu_pd(crow + j + 8);
      __m256d c3 = _mm256_loadu_pd(crow + j + 12);
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d av = _mm256_broadcast_sd(arow + p);
        const double* brow = b + p * n + j;
        c0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow), c0);
        c1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 4), c1);
        c2 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 8), c2);
        c3 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 12), c3);
      }
      _mm256_storeu_pd(crow + j, c0);
      _mm256_storeu_pd(crow + j + 4, c1);
      _mm256_storeu_pd(crow + j + 8, c2);
      _mm256_storeu_pd(crow + j + 12, c3);
    }
    for (; j + 4 <= n; j += 4) {
      __m256d c0 = _mm256_loadu_pd(crow + j);
      for (std::size_t p = 0; p < k; ++p) {
        c0 = _mm256_fmadd_pd(_mm256_broadcast_sd(arow + p), _mm256_loadu_pd(b + p * n + j), c0);
      }
      _mm256_storeu_pd(crow + j, c0);
    }
    for (; j < n; ++j) {
      double s = crow[j];
      for (std::size_t p = 0; p < k; ++p) s += arow[p] * b[p * n + j];
      crow[j] = s;
    }
  }
}

// blend and adam avoid FMA so they stay bit-identical to the scalar path.
void blend_avx2(double tau, const double* src, double* dst, std::size_t n) {
  const double keep = 1.0 - tau;
  const __m256d vt = _mm256_set1_pd(tau);
  const __m256d vk = _mm256_set1_pd(keep);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_mul_pd(vt, _mm256_loadu_pd(src + i));
    const __m256d d = _mm256_mul_pd(vk, _mm256_loadu_pd(dst + i));
    _mm256_storeu_pd(dst + i, _mm256_add_pd(s, d));
  }
  for (; i < n; ++i) dst[i] = tau * src[i] + keep * dst[i];
}

void adam_avx2(const AdamCoefficients& c, double* param, const double* grad, double* m, double* v,
               std::size_t n) {
  const __m256d b1 = _mm256_set1_pd(c.beta1);
  const __m256d b2 = _mm256_set1_pd(c.beta2);
  const __m256d omb1 = _mm256_set1_pd(1.0 - c.beta1);
  const __m256d omb2 = _mm256_set1_pd(1.0 - c.beta2);
  const __m256d bc1 = _mm256_set1_pd(c.bias_correction1);
  const __m256d bc2 = _mm256_set1_pd(c.bias_correction2);
  const __m256d lr = _mm256_set1_pd(c.lr);
  const __m256d eps = _mm256_set1_pd(c.eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grad + i);
    const __m256d mi = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)), _mm256_mul_pd(omb1, g));
    const __m256d vi = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                     _mm256_mul_pd(omb2, _mm256_mul_pd(g, g)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d m_hat = _mm256_div_pd(mi, bc1);
    const __m256d v_hat = _mm256_div_pd(vi, bc2);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lr, m_hat), _mm256_add_pd(_mm256_sqrt_pd(v_hat), eps));
    _mm256_storeu_pd(param + i, _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
  }
  const double one_minus_b1 = 1.0 - c.beta1;
  const double one_minus_b2 = 1.0 - c.beta2;
  for (; i < n; ++i) {
    const double g = grad[i];
    m[i] = c.beta1 * m[i] + one_minus_b1 * g;
    v[i] = c.beta2 * v[i] + one_minus_b2 * (g * g);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    param[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{dot_avx2, axpy_avx2, gemm_acc_avx2, blend_avx2, adam_avx2};
  return table;
}

}  // namespace mixent::simd

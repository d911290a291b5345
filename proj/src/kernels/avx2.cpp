// Copyright 2026 The Catchphrase Authors.
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

// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only called after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "backends.hpp"

namespace catchphrase::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline float hsum(__m256 v) {
  const __m128 lo = _mm256_castps256_ps128(v);
  const __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 sum = _mm_add_ps(lo, hi);
  sum = _mm_add_ps(sum, _mm_movehl_ps(sum, sum));
  sum = _mm_add_ss(sum, _mm_shuffle_ps(sum, sum, 0x55));
  return _mm_cvtss_f32(sum);
}

// x rows r..r+3 against w rows c, c+1.
void block_4x2(const double* x, const double* w, double* y, std::size_t cols,
               std::size_t depth) {
  const double* x0 = x;
  const double* x1 = x + depth;
  const double* x2 = x + 2 * depth;
  const double* x3 = x + 3 * depth;
  const double* w0 = w;
  const double* w1 = w + depth;
  __m256d a00 = _mm256_setzero_pd(), a01 = _mm256_setzero_pd();
  __m256d a10 = _mm256_setzero_pd(), a11 = _mm256_setzero_pd();
  __m256d a20 = _mm256_setzero_pd(), a21 = _mm256_setzero_pd();
  __m256d a30 = _mm256_setzero_pd(), a31 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= depth; k += 4) {
    const __m256d v0 = _mm256_loadu_pd(w0 + k);
    const __m256d v1 = _mm256_loadu_pd(w1 + k);
    __m256d u = _mm256_loadu_pd(x0 + k);
    a00 = _mm256_fmadd_pd(u, v0, a00);
    a01 = _mm256_fmadd_pd(u, v1, a01);
    u = _mm256_loadu_pd(x1 + k);
    a10 = _mm256_fmadd_pd(u, v0, a10);
    a11 = _mm256_fmadd_pd(u, v1, a11);
    u = _mm256_loadu_pd(x2 + k);
    a20 = _mm256_fmadd_pd(u, v0, a20);
    a21 = _mm256_fmadd_pd(u, v1, a21);
    u = _mm256_loadu_pd(x3 + k);
    a30 = _mm256_fmadd_pd(u, v0, a30);
    a31 = _mm256_fmadd_pd(u, v1, a31);
  }
  double s[4][2] = {{hsum(a00), hsum(a01)}, {hsum(a10), hsum(a11)},
                    {hsum(a20), hsum(a21)}, {hsum(a30), hsum(a31)}};
  const double* xs[4] = {x0, x1, x2, x3};
  for (; k < depth; ++k) {
    for (int i = 0; i < 4; ++i) {
      s[i][0] += xs[i][k] * w0[k];
      s[i][1] += xs[i][k] * w1[k];
    }
  }
  for (int i = 0; i < 4; ++i) {
    y[i * cols] = s[i][0];
    y[i * cols + 1] = s[i][1];
  }
}

void block_4x2(const float* x, const float* w, float* y, std::size_t cols,
               std::size_t depth) {
  const float* x0 = x;
  const float* x1 = x + depth;
  const float* x2 = x + 2 * depth;
  const float* x3 = x + 3 * depth;
  const float* w0 = w;
  const float* w1 = w + depth;
  __m256 a00 = _mm256_setzero_ps(), a01 = _mm256_setzero_ps();
  __m256 a10 = _mm256_setzero_ps(), a11 = _mm256_setzero_ps();
  __m256 a20 = _mm256_setzero_ps(), a21 = _mm256_setzero_ps();
  __m256 a30 = _mm256_setzero_ps(), a31 = _mm256_setzero_ps();
  std::size_t k = 0;
  for (; k + 8 <= depth; k += 8) {
    const __m256 v0 = _mm256_loadu_ps(w0 + k);
    const __m256 v1 = _mm256_loadu_ps(w1 + k);
    __m256 u = _mm256_loadu_ps(x0 + k);
    a00 = _mm256_fmadd_ps(u, v0, a00);
    a01 = _mm256_fmadd_ps(u, v1, a01);
    u = _mm256_loadu_ps(x1 + k);
    a10 = _mm256_fmadd_ps(u, v0, a10);
    a11 = _mm256_fmadd_ps(u, v1, a11);
    u = _mm256_loadu_ps(x2 + k);
    a20 = _mm256_fmadd_ps(u, v0, a20);
    a21 = _mm256_fmadd_ps(u, v1, a21);
    u = _mm256_loadu_ps(x3 + k);
    a30 = _mm256_fmadd_ps(u, v0, a30);
    a31 = _mm256_fmadd_ps(u, v1, a31);
  }
  float s[4][2] = {{hsum(a00), hsum(a01)}, {hsum(a10), hsum(a11)},
                   {hsum(a20), hsum(a21)}, {hsum(a30), hsum(a31)}};
  const float* xs[4] = {x0, x1, x2, x3};
  for (; k < depth; ++k) {
    for (int i = 0; i < 4; ++i) {
      s[i][0] += xs[i][k] * w0[k];
      s[i][1] += xs[i][k] * w1[k];
    }
  }
  for (int i = 0; i < 4; ++i) {
    y[i * cols] = s[i][0];
    y[i * cols + 1] = s[i][1];
  }
}

template <class T>
void gemm_nt_impl(const T* x, const T* w, T* y, std::size_t rows,
                  std::size_t cols, std::size_t depth) {
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    std::size_t c = 0;
    for (; c + 2 <= cols; c += 2) {
      block_4x2(x + r * depth, w + c * depth, y + r * cols + c, cols, depth);
    }
    for (; c < cols; ++c) {
      for (std::size_t i = 0; i < 4; ++i) {
        y[(r + i) * cols + c] = dot(x + (r + i) * depth, w + c * depth, depth);
      }
    }
  }
  for (; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      y[r * cols + c] = dot(x + r * depth, w + c * depth, depth);
    }
  }
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

float dot(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  }
  float sum = hsum(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpy(float alpha, const float* x, float* y, std::size_t n) {
  const __m256 a = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(a, _mm256_loadu_ps(x + i),
                                            _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_nt(const double* x, const double* w, double* y, std::size_t rows,
             std::size_t cols, std::size_t depth) {
  gemm_nt_impl(x, w, y, rows, cols, depth);
}

void gemm_nt(const float* x, const float* w, float* y, std::size_t rows,
             std::size_t cols, std::size_t depth) {
  gemm_nt_impl(x, w, y, rows, cols, depth);
}

}  // namespace catchphrase::kernels::avx2

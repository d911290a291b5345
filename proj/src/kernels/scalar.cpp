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

#include "backends.hpp"

namespace catchphrase::kernels::scalar {
namespace {

template <class T>
T dot_impl(const T* a, const T* b, std::size_t n) {
  T sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

template <class T>
void axpy_impl(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <class T>
void gemm_nt_impl(const T* x, const T* w, T* y, std::size_t rows,
                  std::size_t cols, std::size_t depth) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      y[r * cols + c] = dot_impl(x + r * depth, w + c * depth, depth);
    }
  }
}

}  // namespace

float dot(const float* a, const float* b, std::size_t n) { return dot_impl(a, b, n); }
double dot(const double* a, const double* b, std::size_t n) { return dot_impl(a, b, n); }
void axpy(float alpha, const float* x, float* y, std::size_t n) { axpy_impl(alpha, x, y, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { axpy_impl(alpha, x, y, n); }
void gemm_nt(const float* x, const float* w, float* y, std::size_t rows,
             std::size_t cols, std::size_t depth) {
  gemm_nt_impl(x, w, y, rows, cols, depth);
}
void gemm_nt(const double* x, const double* w, double* y, std::size_t rows,
             std::size_t cols, std::size_t depth) {
  gemm_nt_impl(x, w, y, rows, cols, depth);
}

}  // namespace catchphrase::kernels::scalar

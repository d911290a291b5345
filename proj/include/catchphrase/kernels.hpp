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

#pragma once

#include <cstddef>
#include <string_view>

// Dense inner loops behind the convolution and MLP contractions. Every
// kernel has a scalar reference implementation plus SIMD variants (AVX2+FMA
// on x86-64, NEON on AArch64) selected once at runtime. The SIMD variants
// reorder floating-point sums, so they agree with the scalar reference to
// rounding, not bitwise; the backend is fixed for the life of a process
// unless changed explicitly, which keeps a run deterministic.
namespace catchphrase::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend backend);
bool backend_available(Backend backend);

// Fastest backend this CPU supports.
Backend best_backend();

Backend active_backend();

// Throws ContractError when the backend is not available on this CPU.
void set_backend(Backend backend);

// Restores the previous backend on scope exit.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend backend) : previous_(active_backend()) {
    set_backend(backend);
  }
  ~ScopedBackend() { set_backend(previous_); }
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

// sum_i a[i] * b[i]
template <class T>
T dot(const T* a, const T* b, std::size_t n);

// y += alpha * x
template <class T>
void axpy(T alpha, const T* x, T* y, std::size_t n);

// y[r, c] = sum_k x[r, k] * w[c, k]; x is rows x depth, w is cols x depth,
// y is rows x cols, all row-major. Overwrites y.
template <class T>
void gemm_nt(const T* x, const T* w, T* y, std::size_t rows, std::size_t cols,
             std::size_t depth);

// c[r, :] += sum_i a[r, i] * b[i, :]; a is rows x inner, b is inner x cols.
// Zero entries of `a` are skipped (ReLU and max-pool gradients are sparse).
template <class T>
void gemm_acc_nn(const T* a, const T* b, T* c, std::size_t rows,
                 std::size_t inner, std::size_t cols);

// c[i, :] += sum_r a[r, i] * b[r, :]; a is rows x inner, b is rows x cols,
// c is inner x cols. Zero entries of `a` are skipped.
template <class T>
void gemm_acc_tn(const T* a, const T* b, T* c, std::size_t rows,
                 std::size_t inner, std::size_t cols);

}  // namespace catchphrase::kernels

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

#include <atomic>

#include "backends.hpp"
#include "catchphrase/errors.hpp"
#include "catchphrase/kernels.hpp"

namespace catchphrase::kernels {
namespace {

Backend detect_best() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return Backend::kAvx2;
  }
#elif defined(__aarch64__)
  return Backend::kNeon;
#endif
  return Backend::kScalar;
}

std::atomic<Backend>& active() {
  static std::atomic<Backend> backend{detect_best()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::kScalar: return true;
    case Backend::kAvx2: return detect_best() == Backend::kAvx2;
    case Backend::kNeon: return detect_best() == Backend::kNeon;
  }
  return false;
}

Backend best_backend() { return detect_best(); }

Backend active_backend() { return active().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw ContractError("kernel backend '" + std::string(backend_name(backend)) +
                        "' is not available on this CPU");
  }
  active().store(backend, std::memory_order_relaxed);
}

#if defined(__x86_64__) || defined(_M_X64)
#define CATCHPHRASE_SIMD_CASE(call) \
  case Backend::kAvx2: return avx2::call;
#elif defined(__aarch64__)
#define CATCHPHRASE_SIMD_CASE(call) \
  case Backend::kNeon: return neon::call;
#else
#define CATCHPHRASE_SIMD_CASE(call)
#endif

template <class T>
T dot(const T* a, const T* b, std::size_t n) {
  switch (active_backend()) {
    CATCHPHRASE_SIMD_CASE(dot(a, b, n))
    default: return scalar::dot(a, b, n);
  }
}

template <class T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
  switch (active_backend()) {
    CATCHPHRASE_SIMD_CASE(axpy(alpha, x, y, n))
    default: return scalar::axpy(alpha, x, y, n);
  }
}

template <class T>
void gemm_nt(const T* x, const T* w, T* y, std::size_t rows, std::size_t cols,
             std::size_t depth) {
  switch (active_backend()) {
    CATCHPHRASE_SIMD_CASE(gemm_nt(x, w, y, rows, cols, depth))
    default: return scalar::gemm_nt(x, w, y, rows, cols, depth);
  }
}

#undef CATCHPHRASE_SIMD_CASE

template <class T>
void gemm_acc_nn(const T* a, const T* b, T* c, std::size_t rows,
                 std::size_t inner, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < inner; ++i) {
      const T coeff = a[r * inner + i];
      if (coeff != T(0)) axpy(coeff, b + i * cols, c + r * cols, cols);
    }
  }
}

template <class T>
void gemm_acc_tn(const T* a, const T* b, T* c, std::size_t rows,
                 std::size_t inner, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < inner; ++i) {
      const T coeff = a[r * inner + i];
      if (coeff != T(0)) axpy(coeff, b + r * cols, c + i * cols, cols);
    }
  }
}

#define CATCHPHRASE_INSTANTIATE(T)                                            \
  template T dot<T>(const T*, const T*, std::size_t);                         \
  template void axpy<T>(T, const T*, T*, std::size_t);                        \
  template void gemm_nt<T>(const T*, const T*, T*, std::size_t, std::size_t,  \
                           std::size_t);                                      \
  template void gemm_acc_nn<T>(const T*, const T*, T*, std::size_t,           \
                               std::size_t, std::size_t);                     \
  template void gemm_acc_tn<T>(const T*, const T*, T*, std::size_t,           \
                               std::size_t, std::size_t);

CATCHPHRASE_INSTANTIATE(float)
CATCHPHRASE_INSTANTIATE(double)

#undef CATCHPHRASE_INSTANTIATE

}  // namespace catchphrase::kernels

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

// Per-backend entry points. Backend translation units contain only raw
// loops and intrinsics so that no inline library code is compiled with
// ISA extensions the host may lack.

#include <cstddef>

namespace catchphrase::kernels {

#define CATCHPHRASE_DECLARE_BACKEND(ns)                                        \
  namespace ns {                                                               \
  float dot(const float* a, const float* b, std::size_t n);                    \
  double dot(const double* a, const double* b, std::size_t n);                 \
  void axpy(float alpha, const float* x, float* y, std::size_t n);             \
  void axpy(double alpha, const double* x, double* y, std::size_t n);          \
  void gemm_nt(const float* x, const float* w, float* y, std::size_t rows,     \
               std::size_t cols, std::size_t depth);                           \
  void gemm_nt(const double* x, const double* w, double* y, std::size_t rows,  \
               std::size_t cols, std::size_t depth);                           \
  }

CATCHPHRASE_DECLARE_BACKEND(scalar)
#if defined(__x86_64__) || defined(_M_X64)
CATCHPHRASE_DECLARE_BACKEND(avx2)
#endif
#if defined(__aarch64__)
CATCHPHRASE_DECLARE_BACKEND(neon)
#endif

#undef CATCHPHRASE_DECLARE_BACKEND

}  // namespace catchphrase::kernels

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

#include "catchphrase/optim.hpp"

#include <cmath>
#include <string>

#include "catchphrase/errors.hpp"

namespace catchphrase {

template <class T>
AdamState<T> AdamState<T>::for_parameters(std::span<const Tensor<T>> params) {
  AdamState state;
  for (const auto& p : params) {
    state.first_moment.emplace_back(p.rows(), p.cols());
    state.second_moment.emplace_back(p.rows(), p.cols());
  }
  return state;
}

template <class T>
double global_norm(std::span<const Tensor<T>> grads) {
  double squares = 0.0;
  for (const auto& g : grads) {
    for (T v : g.values()) squares += static_cast<double>(v) * static_cast<double>(v);
  }
  return std::sqrt(squares);
}

template <class T>
double clip_global_norm(std::span<Tensor<T>> grads, double max_norm) {
  if (!(max_norm > 0.0)) throw ContractError("clip_global_norm: max_norm must be positive");
  const double norm = global_norm(std::span<const Tensor<T>>(grads.data(), grads.size()));
  if (norm > max_norm) {
    const double factor = max_norm / norm;
    for (auto& g : grads) {
      for (auto& v : g.values()) v = static_cast<T>(static_cast<double>(v) * factor);
    }
  }
  return norm;
}

template <class T>
void adam_step(AdamState<T>& state, std::span<Tensor<T>> params,
               std::span<const Tensor<T>> grads, double learning_rate) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw DimensionError("adam_step: " + std::to_string(params.size()) +
                         " parameters, " + std::to_string(grads.size()) +
                         " gradients, " + std::to_string(state.first_moment.size()) +
                         " moment slots");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    require_same_shape(params[k], grads[k], "adam_step");
    require_same_shape(params[k], state.first_moment[k], "adam_step");
    if (!grads[k].all_finite()) {
      throw NumericError("adam_step: non-finite gradient in parameter tensor " +
                         std::to_string(k) + "; step aborted");
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k].values();
    const auto g = grads[k].values();
    auto m = state.first_moment[k].values();
    auto v = state.second_moment[k].values();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      const double mi = state.beta1 * m[i] + (1.0 - state.beta1) * gi;
      const double vi = state.beta2 * v[i] + (1.0 - state.beta2) * gi * gi;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      const double update =
          learning_rate * (mi / correction1) / (std::sqrt(vi / correction2) + state.epsilon);
      p[i] = static_cast<T>(static_cast<double>(p[i]) - update);
    }
  }
}

template struct AdamState<float>;
template struct AdamState<double>;
template double global_norm(std::span<const Tensor<float>>);
template double global_norm(std::span<const Tensor<double>>);
template double clip_global_norm(std::span<Tensor<float>>, double);
template double clip_global_norm(std::span<Tensor<double>>, double);
template void adam_step(AdamState<float>&, std::span<Tensor<float>>,
                        std::span<const Tensor<float>>, double);
template void adam_step(AdamState<double>&, std::span<Tensor<double>>,
                        std::span<const Tensor<double>>, double);

}  // namespace catchphrase

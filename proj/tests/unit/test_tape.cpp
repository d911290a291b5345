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

#include <doctest.h>

#include <cmath>
#include <functional>

#include "catchphrase/errors.hpp"
#include "catchphrase/random.hpp"
#include "catchphrase/tape.hpp"

using namespace catchphrase;
using TapeD = Tape<double>;
using Var = TapeD::Var;

namespace {

Tensor<double> random_tensor(RandomStream& rng, std::size_t r, std::size_t c) {
  Tensor<double> t(r, c);
  for (auto& v : t.values()) v = rng.normal();
  return t;
}

// Builds a scalar from parameter leaves; checks every leaf's gradient by
// central differences.
void check_gradients(std::vector<Tensor<double>> leaves,
                     const std::function<Var(TapeD&, const std::vector<Var>&)>& build,
                     double tol = 1e-7) {
  TapeD tape;
  std::vector<Var> vars;
  for (const auto& t : leaves) vars.push_back(tape.parameter(t));
  tape.backward(build(tape, vars));
  const double h = 1e-6;
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    const Tensor<double> analytic = tape.grad(vars[l]);
    for (std::size_t i = 0; i < leaves[l].size(); ++i) {
      auto eval = [&](double delta) {
        auto copy = leaves;
        copy[l][i] += delta;
        TapeD t2;
        std::vector<Var> v2;
        for (const auto& x : copy) v2.push_back(t2.parameter(x));
        return t2.value(build(t2, v2)).item();
      };
      const double numeric = (eval(h) - eval(-h)) / (2 * h);
      CAPTURE(l);
      CAPTURE(i);
      CHECK(analytic[i] == doctest::Approx(numeric).epsilon(tol).scale(1.0));
    }
  }
}

}  // namespace

TEST_CASE("forward values of each operation") {
  TapeD tape;
  const Var x = tape.constant(Tensor<double>(2, 2, std::vector<double>{1, -2, 3, 4}));
  const Var w = tape.constant(Tensor<double>(1, 2, std::vector<double>{0.5, 1}));
  CHECK(tape.value(tape.matmul_nt(x, w)) == Tensor<double>(2, 1, std::vector<double>{-1.5, 5.5}));
  CHECK(tape.value(tape.relu(x)) == Tensor<double>(2, 2, std::vector<double>{1, 0, 3, 4}));
  CHECK(tape.value(tape.max_over_rows(x)) == Tensor<double>(1, 2, std::vector<double>{3, 4}));
  CHECK(tape.value(tape.add_row(x, w)) ==
        Tensor<double>(2, 2, std::vector<double>{1.5, -1, 3.5, 5}));
  CHECK(tape.value(tape.sum(x)).item() == 6);
  CHECK(tape.value(tape.mean(x)).item() == 1.5);
  CHECK(tape.value(tape.pop_std(w)).item() == doctest::Approx(0.25));
  CHECK(tape.value(tape.hinge(x, 2.0)) == Tensor<double>(2, 2, std::vector<double>{1, 4, 0, 0}));
  const Var parts[] = {x, w};
  const Var cat = tape.concat_cols(parts);
  CHECK(tape.value(cat) == Tensor<double>(2, 4, std::vector<double>{1, -2, 0.5, 1, 3, 4, 0.5, 1}));
  const Var rows[] = {x, w};
  CHECK(tape.value(tape.concat_rows(rows)).rows() == 3);
}

TEST_CASE("gradients of every operation match finite differences") {
  RandomStream rng(5, "tape-fd");
  const auto a = random_tensor(rng, 3, 4);
  const auto b = random_tensor(rng, 3, 4);
  const auto w = random_tensor(rng, 2, 4);
  const auto row = random_tensor(rng, 1, 4);

  check_gradients({a, w}, [](TapeD& t, const std::vector<Var>& v) {
    return t.sum(t.tanh(t.matmul_nt(v[0], v[1])));
  });
  check_gradients({a, b}, [](TapeD& t, const std::vector<Var>& v) {
    return t.mean(t.sigmoid(t.sub(t.add(v[0], v[1]), t.scale(v[1], 0.3))));
  });
  check_gradients({a, row}, [](TapeD& t, const std::vector<Var>& v) {
    return t.sum(t.relu(t.add_row(v[0], v[1])));
  });
  check_gradients({a}, [](TapeD& t, const std::vector<Var>& v) {
    return t.sum(t.max_over_rows(v[0]));
  });
  check_gradients({a, row}, [](TapeD& t, const std::vector<Var>& v) {
    const Var parts[] = {v[0], v[1]};
    const Var stacked = t.concat_rows(parts);
    const Var side[] = {stacked, stacked};
    return t.pop_std(t.concat_cols(side));
  });
  check_gradients({a}, [](TapeD& t, const std::vector<Var>& v) {
    return t.sum(t.hinge(v[0], 0.25));
  });
}

TEST_CASE("a value used on several paths accumulates gradient") {
  TapeD tape;
  const Tensor<double> p(1, 1, 3.0);
  const Var x = tape.parameter(p);
  const Var y = tape.add(tape.scale(x, 2.0), tape.scale(x, 5.0));
  tape.backward(y);
  CHECK(tape.grad(x).item() == 7.0);
}

TEST_CASE("ties and kinks take the documented branch") {
  TapeD tape;
  const Tensor<double> p(3, 1, std::vector<double>{2, 2, 1});
  const Var x = tape.parameter(p);
  tape.backward(tape.sum(tape.max_over_rows(x)));
  CHECK(tape.grad(x) == Tensor<double>(3, 1, std::vector<double>{1, 0, 0}));

  TapeD t2;
  const Tensor<double> q(1, 1, 0.5);
  const Var y = t2.parameter(q);
  t2.backward(t2.sum(t2.hinge(y, 0.5)));
  CHECK(t2.grad(y).item() == 0.0);

  TapeD t3;
  const Tensor<double> flat(1, 3, 0.25);
  const Var z = t3.parameter(flat);
  t3.backward(t3.pop_std(z));
  CHECK(t3.grad(z) == Tensor<double>(1, 3, 0.0));
}

TEST_CASE("misuse is reported") {
  TapeD tape;
  const Tensor<double> p(2, 2, 1.0);
  const Var x = tape.parameter(p);
  CHECK_THROWS_AS(tape.grad(x), StateError);
  CHECK_THROWS_AS(tape.backward(x), DimensionError);
  CHECK_THROWS_AS(tape.backward(Var{}), StateError);
  const Var w = tape.constant(Tensor<double>(3, 3, 1.0));
  CHECK_THROWS_AS(tape.matmul_nt(x, w), DimensionError);
  TapeD empty;
  CHECK_THROWS_AS(empty.backward(Var{0}), StateError);
}

TEST_CASE("gradient of an unused leaf is zero") {
  TapeD tape;
  const Tensor<double> p(1, 2, 1.0), q(1, 2, 2.0);
  const Var x = tape.parameter(p);
  const Var unused = tape.parameter(q);
  tape.backward(tape.sum(x));
  CHECK(tape.grad(unused) == Tensor<double>(1, 2, 0.0));
}

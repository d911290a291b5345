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

#include "catchphrase/errors.hpp"
#include "catchphrase/objective.hpp"
#include "catchphrase/random.hpp"
#include "oracles.hpp"

using namespace catchphrase;

TEST_CASE("population statistics") {
  const std::vector<double> v = {0.2, 0.4, 0.6, 0.8};
  const MeanStd s = score_statistics(v);
  CHECK(s.mean == doctest::Approx(0.5));
  CHECK(s.std == doctest::Approx(std::sqrt(0.05)));
  const std::vector<double> one = {0.3};
  CHECK(score_statistics(one).std == 0.0);
  CHECK_THROWS_AS(score_statistics(std::vector<double>{}), ContractError);
}

TEST_CASE("hinge terms") {
  CHECK(mean_order_loss(0.7, 0.5, 0.1) == 0.0);
  CHECK(mean_order_loss(0.5, 0.5, 0.1) == doctest::Approx(0.1));
  CHECK(mean_order_loss(0.4, 0.6, 0.1) == doctest::Approx(0.3));
  CHECK(upper_spread_loss(0.5, 0.1, 0.5, 0.0, 0.1) == doctest::Approx(0.0));
  CHECK(upper_spread_loss(0.5, 0.0, 0.5, 0.1, 0.1) == doctest::Approx(0.2));
  CHECK(lower_spread_loss(0.8, 0.1, 0.5, 0.1) == doctest::Approx(0.0));
  CHECK(lower_spread_loss(0.6, 0.1, 0.5, 0.1) == doctest::Approx(0.1));
  const double cross[] = {0.5, 0.9};
  const double neg[] = {0.7, 0.6};
  CHECK(cross_document_loss(cross, neg, 0.1) == doctest::Approx((0.0 + 0.4) / 2));
  CHECK(cross_document_loss({}, {}, 0.1) == 0.0);
  const double one[] = {0.1};
  CHECK_THROWS_AS(cross_document_loss(cross, one, 0.1), ContractError);
  const auto r = spread_reward(0.2, 0.3);
  CHECK(r.catch_term == -0.2);
  CHECK(r.sentence_term == -0.3);
}

TEST_CASE("total loss weights the terms as documented") {
  ScoreStats s{0.55, 0.05, 0.5, 0.1, {{0.6, 0.5}, {0.4, 0.45}}};
  LossConfig cfg;
  const LossBreakdown b = total_loss(s, cfg);
  CHECK(b.mean_order == doctest::Approx(0.05));
  CHECK(b.cross_document == doctest::Approx((0.2 + 0.05) / 2));
  CHECK(b.upper_spread == doctest::Approx(0.1 - (0.6 - 0.6)));
  CHECK(b.lower_spread == doctest::Approx(0.1));
  const double want = 1.0 * 0.05 + 1.0 * 0.125 + 0.5 * 0.1 + 0.1 * 0.1 - 0.01 * 0.05 - 0.02 * 0.1;
  CHECK(b.total == doctest::Approx(want));
  s.negatives.pop_back();
  CHECK_THROWS_AS(total_loss(s, cfg), ContractError);
}

TEST_CASE("loss configuration defaults and validation") {
  const LossConfig cfg;
  CHECK(cfg.a1 == 1.0);
  CHECK(cfg.a2 == 1.0);
  CHECK(cfg.b1 == 0.5);
  CHECK(cfg.b2 == 0.1);
  CHECK(cfg.b3 == 0.01);
  CHECK(cfg.b4 == 0.02);
  CHECK(cfg.negative_set_size == 2);
  CHECK_NOTHROW(cfg.validate());
  LossConfig bad = cfg;
  bad.m1 = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.negative_set_size = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("tape loss equals the scalar loss on random scores") {
  RandomStream rng(21, "objective-tape");
  for (int trial = 0; trial < 50; ++trial) {
    auto column = [&](std::size_t n) {
      Tensor<double> t(n, 1);
      for (auto& v : t.values()) v = rng.uniform(0.05, 0.95);
      return t;
    };
    Tape<double> tape;
    const Tensor<double> catches = column(1 + rng.below(6));
    const Tensor<double> sentences = column(2 + rng.below(10));
    const auto c = tape.constant(catches);
    const auto s = tape.constant(sentences);
    std::vector<TapeNegative<double>> negs;
    std::vector<Tensor<double>> cross, neg_sent;
    for (int k = 0; k < 2; ++k) {
      cross.push_back(column(catches.rows()));
      neg_sent.push_back(column(2 + rng.below(10)));
      negs.push_back({tape.constant(cross.back()), tape.constant(neg_sent.back())});
    }
    const LossConfig cfg;
    const TapeLoss<double> tl = tape_total_loss<double>(tape, c, s, negs, cfg);

    std::vector<double> cv(catches.values().begin(), catches.values().end());
    std::vector<double> sv(sentences.values().begin(), sentences.values().end());
    const auto [cm, cs] = oracle::mean_std(cv);
    const auto [sm, ss] = oracle::mean_std(sv);
    double o2 = 0;
    for (int k = 0; k < 2; ++k) {
      std::vector<double> x(cross[k].values().begin(), cross[k].values().end());
      std::vector<double> y(neg_sent[k].values().begin(), neg_sent[k].values().end());
      o2 += std::max(0.1 - (oracle::mean_std(y).first - oracle::mean_std(x).first), 0.0) / 2;
    }
    const double o1 = std::max(0.1 - (cm - sm), 0.0);
    const double o3 = std::max(0.1 - ((cm + cs) - (sm + ss)), 0.0);
    const double o4 = std::max(0.1 - ((cm - cs) - sm), 0.0);
    const double want = o1 + o2 + 0.5 * o3 + 0.1 * o4 - 0.01 * cs - 0.02 * ss;
    CHECK(tape.value(tl.total).item() == doctest::Approx(want).epsilon(1e-12));
    CHECK(tape.value(tl.mean_order).item() >= 0.0);
    CHECK(tape.value(tl.cross_document).item() >= 0.0);
    CHECK(tape.value(tl.upper_spread).item() >= 0.0);
    CHECK(tape.value(tl.lower_spread).item() >= 0.0);
  }
}

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

#include <algorithm>
#include <cmath>
#include <set>

#include "catchphrase/corpus.hpp"
#include "catchphrase/errors.hpp"
#include "catchphrase/model.hpp"
#include "catchphrase/objective.hpp"
#include "catchphrase/optim.hpp"
#include "catchphrase/random.hpp"
#include "catchphrase/selector.hpp"
#include "fixtures.hpp"

using namespace catchphrase;

namespace {

const ModelDims kDims{6, 2, 5, 7};
constexpr std::size_t kVocab = 12;
constexpr int kTrials = 40;

ModelParams<double> biased_params(std::uint64_t seed) {
  auto p = ModelParams<double>::glorot_uniform(kDims, seed);
  RandomStream rng(seed, "property-bias");
  for (auto slot : {kHiddenBias, kOutputBias}) {
    for (auto& v : p.tensors[slot].values()) v = 2.0 * rng.normal();
  }
  return p;
}

}  // namespace

TEST_CASE("every score lies strictly inside (0, 1)") {
  const auto table = fixtures::random_table(kDims.embedding_dim, kVocab, 3);
  RandomStream rng(11, "property-scores");
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto params = biased_params(100 + trial);
    const auto doc = fixtures::random_doc(rng, "07_1", kVocab, 1 + rng.below(5), rng.below(4));
    const auto scored = score_document(params, doc, table);
    for (double s : scored.scores.all_sentence_scores()) CHECK((s > 0.0 && s < 1.0));
    for (double s : scored.scores.all_catchword_scores()) CHECK((s > 0.0 && s < 1.0));
  }
}

TEST_CASE("the document feature ignores catchphrases and sentence order") {
  const auto table = fixtures::random_table(kDims.embedding_dim, kVocab, 4);
  RandomStream rng(12, "property-doc");
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto params = biased_params(200 + trial);
    auto doc = fixtures::random_doc(rng, "07_2", kVocab, 2 + rng.below(5), 1 + rng.below(3));
    const auto base = score_document(params, doc, table).encoding.document;

    auto without = doc;
    without.catchphrases.clear();
    CHECK(score_document(params, without, table).encoding.document == base);

    auto other = doc;
    other.catchphrases.push_back(fixtures::random_phrase(rng, kVocab, 1, 5));
    CHECK(score_document(params, other, table).encoding.document == base);

    auto shuffled = doc;
    rng.shuffle(shuffled.sentences);
    CHECK(score_document(params, shuffled, table).encoding.document == base);
  }
}

TEST_CASE("hinge terms are non-negative and vanish when margins are met") {
  RandomStream rng(13, "property-hinge");
  for (int trial = 0; trial < 500; ++trial) {
    const double cm = rng.uniform(), sm = rng.uniform();
    const double cs = 0.5 * rng.uniform(), ss = 0.5 * rng.uniform();
    const double m = 0.2 * rng.uniform();
    CHECK(mean_order_loss(cm, sm, m) >= 0.0);
    CHECK(upper_spread_loss(cm, cs, sm, ss, m) >= 0.0);
    CHECK(lower_spread_loss(cm, cs, sm, m) >= 0.0);
    const std::vector<double> cross{rng.uniform(), rng.uniform()};
    const std::vector<double> neg{rng.uniform(), rng.uniform()};
    CHECK(cross_document_loss(cross, neg, m) >= 0.0);
    if (cm - sm >= m) CHECK(mean_order_loss(cm, sm, m) == 0.0);
    if (cm - cs - sm >= m) CHECK(lower_spread_loss(cm, cs, sm, m) == 0.0);
  }
}

TEST_CASE("clipping never leaves a norm above the limit and never grows a gradient") {
  RandomStream rng(14, "property-clip");
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Tensor<double>> grads;
    for (int k = 0; k < 3; ++k) {
      Tensor<double> g(1 + rng.below(4), 1 + rng.below(4));
      const double scale = std::pow(10.0, rng.uniform() * 4.0 - 2.0);
      for (auto& v : g.values()) v = scale * rng.normal();
      grads.push_back(std::move(g));
    }
    const double limit = 0.1 + 10.0 * rng.uniform();
    const double before = global_norm<double>(grads);
    const double reported = clip_global_norm<double>(grads, limit);
    const double after = global_norm<double>(grads);
    CHECK(reported == doctest::Approx(before));
    CHECK(after <= limit * (1 + 1e-12));
    CHECK(after <= before * (1 + 1e-12));
    if (before <= limit) CHECK(after == doctest::Approx(before));
  }
}

TEST_CASE("the year split is a partition") {
  RandomStream rng(15, "property-split");
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<CaseDocument> corpus;
    const std::size_t n = rng.below(20);
    for (std::size_t i = 0; i < n; ++i) {
      const int year = 2006 + static_cast<int>(rng.below(4));
      auto d = fixtures::random_doc(rng, std::to_string(year % 100 + 100).substr(1) + "_" +
                                             std::to_string(i),
                                    kVocab, 1, 1);
      d.year = year;
      corpus.push_back(std::move(d));
    }
    const int test_year = 2006 + static_cast<int>(rng.below(4));
    const bool no_train = std::all_of(corpus.begin(), corpus.end(),
                                      [&](const auto& d) { return d.year == test_year; });
    if (no_train) {
      CHECK_THROWS_AS(split_by_year(corpus, test_year), ConfigError);
      continue;
    }
    const auto split = split_by_year(corpus, test_year);
    CHECK(split.train.size() + split.test.size() == n);
    std::set<std::string> ids;
    for (const auto& d : split.test) {
      CHECK(d.year == test_year);
      ids.insert(d.id);
    }
    for (const auto& d : split.train) {
      CHECK(d.year != test_year);
      ids.insert(d.id);
    }
    CHECK(ids.size() == n);
  }
}

TEST_CASE("selected spans stay inside their sentence and cover every anchor") {
  RandomStream rng(16, "property-spans");
  for (int trial = 0; trial < 200; ++trial) {
    const auto doc = fixtures::random_doc(rng, "06_1", kVocab, 1 + rng.below(5), 0);
    ScoreSheet sheet;
    for (const auto& s : doc.sentences) {
      std::vector<double> row;
      // Coarse values so that ties are common.
      for (std::size_t i = 0; i < s.size(); ++i) row.push_back(0.25 * rng.below(4));
      sheet.sentence_word_scores.push_back(row);
    }
    const std::size_t total = doc.sentence_token_count();
    const std::size_t t = 1 + rng.below(total + 3);
    const std::size_t r = rng.below(5);
    auto anchors = select_anchors(sheet, t);
    CHECK(anchors.size() == std::min(t, total));

    // No unselected word outranks a selected one.
    const double weakest = anchors.back().score;
    std::set<std::pair<std::size_t, std::size_t>> chosen;
    for (const auto& a : anchors) chosen.insert({a.sentence_index, a.token_index});
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      for (std::size_t i = 0; i < doc.sentences[s].size(); ++i) {
        if (chosen.count({s, i})) continue;
        const double v = sheet.sentence_word_scores[s][i];
        CHECK(v <= weakest);
        if (v == weakest) {
          // Ties go to the earlier position.
          CHECK(std::make_pair(s, i) > std::make_pair(anchors.back().sentence_index,
                                                      anchors.back().token_index));
        }
      }
    }

    const auto phrases = extract_phrases(doc, anchors, r);
    for (const auto& p : phrases) {
      CHECK(p.begin <= p.end);
      CHECK(p.end < doc.sentences[p.sentence_index].size());
      CHECK(p.tokens.size() == p.end - p.begin + 1);
    }
    for (std::size_t i = 1; i < phrases.size(); ++i) {
      if (phrases[i].sentence_index == phrases[i - 1].sentence_index) {
        CHECK(phrases[i].begin > phrases[i - 1].end + 1);
      }
    }
    for (const auto& a : anchors) {
      const bool covered = std::any_of(phrases.begin(), phrases.end(), [&](const auto& p) {
        return p.sentence_index == a.sentence_index && p.begin <= a.token_index &&
               a.token_index <= p.end;
      });
      CHECK(covered);
    }

    auto permuted = anchors;
    rng.shuffle(permuted);
    const auto again = extract_phrases(doc, permuted, r);
    REQUIRE(again.size() == phrases.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
      CHECK(again[i].sentence_index == phrases[i].sentence_index);
      CHECK(again[i].begin == phrases[i].begin);
      CHECK(again[i].end == phrases[i].end);
      CHECK(again[i].anchor_scores == phrases[i].anchor_scores);
    }
  }
}

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
#include <span>
#include <vector>

#include "catchphrase/tape.hpp"

namespace catchphrase {

// Mean and population standard deviation (divisor N).
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Two-pass mean / population std. Throws ContractError on empty input.
MeanStd score_statistics(std::span<const double> scores);

// Margins and weights of the five ranking constraints:
//   o1  catchword mean above sentence-word mean          (margin m1, weight a1)
//   o2  another document's sentence-word mean above this
//       document's catchwords scored in that document    (m2, a2)
//   o3  catchword mean+std above sentence mean+std       (m3, b1)
//   o4  catchword mean-std above sentence mean           (m4, b2)
//   o5  reward catchword and sentence score spread       (b3, b4)
struct LossConfig {
  double m1 = 0.1, m2 = 0.1, m3 = 0.1, m4 = 0.1;
  double a1 = 1.0, a2 = 1.0, b1 = 0.5, b2 = 0.1, b3 = 0.01, b4 = 0.02;
  std::size_t negative_set_size = 2;

  // Throws ConfigError on a negative margin, a non-finite coefficient, or
  // negative_set_size == 0.
  void validate() const;
};

// Statistics of one negative pairing (d, d'): this document's catchwords
// scored with d''s document feature, and d''s own sentence words.
struct NegativePairing {
  double cross_catch_mean = 0.0;
  double sentence_mean = 0.0;
};

struct ScoreStats {
  double catch_mean = 0.0;
  double catch_std = 0.0;
  double sentence_mean = 0.0;
  double sentence_std = 0.0;
  std::vector<NegativePairing> negatives;
};

ScoreStats make_score_stats(std::span<const double> catchword_scores,
                            std::span<const double> sentence_scores);
NegativePairing make_negative_pairing(std::span<const double> cross_catchword_scores,
                                      std::span<const double> negative_sentence_scores);

// o1: max(m1 - (catch_mean - sentence_mean), 0)
double mean_order_loss(double catch_mean, double sentence_mean, double margin);

// o2: mean over pairings of max(m2 - (sentence_mean' - cross_catch_mean), 0).
// Throws ContractError when the two lists differ in length. Empty lists
// give 0.
double cross_document_loss(std::span<const double> cross_catch_means,
                           std::span<const double> negative_sentence_means,
                           double margin);

// o3: max(m3 - ((catch_mean + catch_std) - (sentence_mean + sentence_std)), 0)
double upper_spread_loss(double catch_mean, double catch_std, double sentence_mean,
                         double sentence_std, double margin);

// o4: max(m4 - ((catch_mean - catch_std) - sentence_mean), 0)
double lower_spread_loss(double catch_mean, double catch_std, double sentence_mean,
                         double margin);

// o5: (-catch_std, -sentence_std)
struct SpreadReward {
  double catch_term = 0.0;
  double sentence_term = 0.0;
};
SpreadReward spread_reward(double catch_std, double sentence_std);

struct LossBreakdown {
  double mean_order = 0.0;      // o1
  double cross_document = 0.0;  // o2
  double upper_spread = 0.0;    // o3
  double lower_spread = 0.0;    // o4
  double catch_spread = 0.0;    // o5, -catch_std
  double sentence_spread = 0.0; // o5, -sentence_std
  double total = 0.0;
};

// Per-document contribution to the training loss:
//   a1 o1 + a2 o2 + b1 o3 + b2 o4 - b3 catch_std - b4 sentence_std.
// Throws ContractError when stats.negatives.size() differs from
// cfg.negative_set_size.
LossBreakdown total_loss(const ScoreStats& stats, const LossConfig& cfg);

// ---------------------------------------------------------------------------
// Tape form of total_loss, used for training.

template <class T>
struct TapeNegative {
  typename Tape<T>::Var cross_catch_scores;  // column of this doc's catchwords vs d'
  typename Tape<T>::Var sentence_scores;     // column of d''s sentence words
};

template <class T>
struct TapeLoss {
  typename Tape<T>::Var mean_order, cross_document, upper_spread, lower_spread;
  typename Tape<T>::Var catch_std, sentence_std;
  typename Tape<T>::Var total;
};

// Same contract as total_loss(). Hinge kinks take the zero branch.
template <class T>
TapeLoss<T> tape_total_loss(Tape<T>& tape, typename Tape<T>::Var catch_scores,
                            typename Tape<T>::Var sentence_scores,
                            std::span<const TapeNegative<T>> negatives,
                            const LossConfig& cfg);

}  // namespace catchphrase

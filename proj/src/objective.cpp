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

#include "catchphrase/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catchphrase/errors.hpp"

namespace catchphrase {
namespace {

double hinge(double margin, double gap) { return std::max(margin - gap, 0.0); }

}  // namespace

MeanStd score_statistics(std::span<const double> scores) {
  if (scores.empty()) throw ContractError("score_statistics: empty score list");
  const double n = static_cast<double>(scores.size());
  double total = 0.0;
  for (double s : scores) total += s;
  const double mean = total / n;
  double squares = 0.0;
  for (double s : scores) squares += (s - mean) * (s - mean);
  return {mean, std::sqrt(squares / n)};
}

void LossConfig::validate() const {
  for (double m : {m1, m2, m3, m4}) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("loss margins must be finite and >= 0");
  }
  for (double w : {a1, a2, b1, b2, b3, b4}) {
    if (!std::isfinite(w)) throw ConfigError("loss coefficients must be finite");
  }
  if (negative_set_size == 0) throw ConfigError("negative_set_size must be >= 1");
}

ScoreStats make_score_stats(std::span<const double> catchword_scores,
                            std::span<const double> sentence_scores) {
  const MeanStd c = score_statistics(catchword_scores);
  const MeanStd s = score_statistics(sentence_scores);
  return {c.mean, c.std, s.mean, s.std, {}};
}

NegativePairing make_negative_pairing(std::span<const double> cross_catchword_scores,
                                      std::span<const double> negative_sentence_scores) {
  return {score_statistics(cross_catchword_scores).mean,
          score_statistics(negative_sentence_scores).mean};
}

double mean_order_loss(double catch_mean, double sentence_mean, double margin) {
  return hinge(margin, catch_mean - sentence_mean);
}

double cross_document_loss(std::span<const double> cross_catch_means,
                           std::span<const double> negative_sentence_means,
                           double margin) {
  if (cross_catch_means.size() != negative_sentence_means.size()) {
    throw ContractError("cross_document_loss: " + std::to_string(cross_catch_means.size()) +
                        " catchword means vs " +
                        std::to_string(negative_sentence_means.size()) + " sentence means");
  }
  if (cross_catch_means.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < cross_catch_means.size(); ++i) {
    total += hinge(margin, negative_sentence_means[i] - cross_catch_means[i]);
  }
  return total / static_cast<double>(cross_catch_means.size());
}

double upper_spread_loss(double catch_mean, double catch_std, double sentence_mean,
                         double sentence_std, double margin) {
  return hinge(margin, (catch_mean + catch_std) - (sentence_mean + sentence_std));
}

double lower_spread_loss(double catch_mean, double catch_std, double sentence_mean,
                         double margin) {
  return hinge(margin, (catch_mean - catch_std) - sentence_mean);
}

SpreadReward spread_reward(double catch_std, double sentence_std) {
  return {-catch_std, -sentence_std};
}

LossBreakdown total_loss(const ScoreStats& stats, const LossConfig& cfg) {
  if (stats.negatives.size() != cfg.negative_set_size) {
    throw ContractError("total_loss: " + std::to_string(stats.negatives.size()) +
                        " negative pairings, configured " +
                        std::to_string(cfg.negative_set_size));
  }
  std::vector<double> cross, sentence;
  for (const auto& n : stats.negatives) {
    cross.push_back(n.cross_catch_mean);
    sentence.push_back(n.sentence_mean);
  }
  LossBreakdown out;
  out.mean_order = mean_order_loss(stats.catch_mean, stats.sentence_mean, cfg.m1);
  out.cross_document = cross_document_loss(cross, sentence, cfg.m2);
  out.upper_spread = upper_spread_loss(stats.catch_mean, stats.catch_std, stats.sentence_mean,
                                       stats.sentence_std, cfg.m3);
  out.lower_spread = lower_spread_loss(stats.catch_mean, stats.catch_std, stats.sentence_mean,
                                       cfg.m4);
  const SpreadReward spread = spread_reward(stats.catch_std, stats.sentence_std);
  out.catch_spread = spread.catch_term;
  out.sentence_spread = spread.sentence_term;
  out.total = cfg.a1 * out.mean_order + cfg.a2 * out.cross_document +
              cfg.b1 * out.upper_spread + cfg.b2 * out.lower_spread +
              cfg.b3 * out.catch_spread + cfg.b4 * out.sentence_spread;
  return out;
}

template <class T>
TapeLoss<T> tape_total_loss(Tape<T>& tape, typename Tape<T>::Var catch_scores,
                            typename Tape<T>::Var sentence_scores,
                            std::span<const TapeNegative<T>> negatives,
                            const LossConfig& cfg) {
  using Var = typename Tape<T>::Var;
  if (negatives.size() != cfg.negative_set_size) {
    throw ContractError("tape_total_loss: " + std::to_string(negatives.size()) +
                        " negative pairings, configured " +
                        std::to_string(cfg.negative_set_size));
  }
  TapeLoss<T> out;
  const Var catch_mean = tape.mean(catch_scores);
  const Var sentence_mean = tape.mean(sentence_scores);
  out.catch_std = tape.pop_std(catch_scores);
  out.sentence_std = tape.pop_std(sentence_scores);

  out.mean_order = tape.hinge(tape.sub(catch_mean, sentence_mean), static_cast<T>(cfg.m1));
  out.upper_spread = tape.hinge(tape.sub(tape.add(catch_mean, out.catch_std),
                                         tape.add(sentence_mean, out.sentence_std)),
                                static_cast<T>(cfg.m3));
  out.lower_spread = tape.hinge(tape.sub(tape.sub(catch_mean, out.catch_std), sentence_mean),
                                static_cast<T>(cfg.m4));

  Var total = tape.add(tape.scale(out.mean_order, static_cast<T>(cfg.a1)),
                       tape.scale(out.upper_spread, static_cast<T>(cfg.b1)));
  total = tape.add(total, tape.scale(out.lower_spread, static_cast<T>(cfg.b2)));
  total = tape.add(total, tape.scale(out.catch_std, static_cast<T>(-cfg.b3)));
  total = tape.add(total, tape.scale(out.sentence_std, static_cast<T>(-cfg.b4)));

  if (!negatives.empty()) {
    std::vector<Var> hinges;
    for (const auto& neg : negatives) {
      hinges.push_back(tape.hinge(tape.sub(tape.mean(neg.sentence_scores),
                                           tape.mean(neg.cross_catch_scores)),
                                  static_cast<T>(cfg.m2)));
    }
    out.cross_document = tape.mean(tape.concat_rows(hinges));
    total = tape.add(total, tape.scale(out.cross_document, static_cast<T>(cfg.a2)));
  } else {
    out.cross_document = tape.constant(Tensor<T>::scalar(T(0)));
  }
  out.total = total;
  return out;
}

template TapeLoss<float> tape_total_loss(Tape<float>&, Tape<float>::Var, Tape<float>::Var,
                                         std::span<const TapeNegative<float>>, const LossConfig&);
template TapeLoss<double> tape_total_loss(Tape<double>&, Tape<double>::Var, Tape<double>::Var,
                                          std::span<const TapeNegative<double>>,
                                          const LossConfig&);

}  // namespace catchphrase

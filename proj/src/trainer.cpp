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

#include "catchphrase/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include "catchphrase/errors.hpp"
#include "catchphrase/random.hpp"

namespace catchphrase {
namespace {

std::string format_real(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

// A random contiguous run of sentences holding at most `max_tokens` tokens.
// A first sentence longer than the cap is truncated.
CaseDocument cap_document(const CaseDocument& doc, std::size_t max_tokens, RandomStream& rng) {
  CaseDocument out;
  out.id = doc.id;
  out.year = doc.year;
  out.catchphrases = doc.catchphrases;
  std::size_t index = rng.below(doc.sentences.size());
  std::size_t used = 0;
  while (index < doc.sentences.size()) {
    const TokenSeq& sentence = doc.sentences[index];
    if (used + sentence.size() > max_tokens) {
      if (out.sentences.empty()) {
        TokenSeq head;
        head.tokens.assign(sentence.tokens.begin(),
                           sentence.tokens.begin() + static_cast<std::ptrdiff_t>(max_tokens));
        out.sentences.push_back(std::move(head));
      }
      break;
    }
    out.sentences.push_back(sentence);
    used += sentence.size();
    ++index;
  }
  return out;
}

const CaseDocument& maybe_cap(const CaseDocument& doc, std::size_t max_tokens, RandomStream& rng,
                              std::optional<CaseDocument>& storage) {
  if (max_tokens == 0 || doc.sentence_token_count() <= max_tokens) return doc;
  storage = cap_document(doc, max_tokens, rng);
  return *storage;
}

template <class T>
double scalar_value(const Tape<T>& tape, typename Tape<T>::Var v) {
  return static_cast<double>(tape.value(v).item());
}

}  // namespace

void TrainConfig::validate() const {
  dims.validate();
  loss.validate();
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be positive");
  }
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    throw ConfigError("clip norm must be positive");
  }
  if (epochs == 0) throw ConfigError("epochs must be >= 1");
  if (checkpoint_interval > 0 && checkpoint_path.empty()) {
    throw ConfigError("checkpoint_interval set without a checkpoint path");
  }
}

void TrainLog::write_csv(std::ostream& out) const {
  out << "step,epoch,doc_id,o1,o2,o3,o4,o5_catch,o5_sentence,total,grad_norm_pre,"
         "grad_norm_post\n";
  for (const auto& s : steps) {
    out << s.step << ',' << s.epoch << ',' << s.doc_id << ',' << format_real(s.loss.mean_order)
        << ',' << format_real(s.loss.cross_document) << ',' << format_real(s.loss.upper_spread)
        << ',' << format_real(s.loss.lower_spread) << ',' << format_real(s.loss.catch_spread)
        << ',' << format_real(s.loss.sentence_spread) << ',' << format_real(s.loss.total) << ','
        << format_real(s.grad_norm_pre) << ',' << format_real(s.grad_norm_post) << '\n';
  }
}

template <class T>
LossAndGradients<T> loss_and_gradients(const ModelParams<T>& params, const CaseDocument& doc,
                                       std::span<const CaseDocument* const> negatives,
                                       const EmbeddingTable& table, const LossConfig& cfg) {
  using Var = typename Tape<T>::Var;
  if (!doc.has_catchphrases()) {
    throw ContractError("loss_and_gradients: document " + doc.id + " has no catchphrases");
  }
  if (doc.sentences.empty()) {
    throw ContractError("loss_and_gradients: document " + doc.id + " has no sentences");
  }
  Tape<T> tape;
  const auto model = TapeModel<T>::bind(tape, params);

  std::vector<TapePhrase<T>> sentences;
  for (const auto& s : doc.sentences) sentences.push_back(tape_encode_phrase(model, s, table));
  std::vector<TapePhrase<T>> catchphrases;
  for (const auto& c : doc.catchphrases) catchphrases.push_back(tape_encode_phrase(model, c, table));
  const Var doc_feature = tape_document_features<T>(model, sentences);

  auto score_all = [&](const std::vector<TapePhrase<T>>& phrases, Var feature) {
    std::vector<Var> columns;
    for (const auto& p : phrases) columns.push_back(tape_score_words(model, p, feature));
    return tape.concat_rows(columns);
  };
  const Var sentence_scores = score_all(sentences, doc_feature);
  const Var catch_scores = score_all(catchphrases, doc_feature);

  std::vector<TapeNegative<T>> pairings;
  for (const CaseDocument* neg : negatives) {
    if (neg->sentences.empty()) {
      throw ContractError("loss_and_gradients: negative " + neg->id + " has no sentences");
    }
    std::vector<TapePhrase<T>> neg_sentences;
    for (const auto& s : neg->sentences) neg_sentences.push_back(tape_encode_phrase(model, s, table));
    const Var neg_feature = tape_document_features<T>(model, neg_sentences);
    pairings.push_back({score_all(catchphrases, neg_feature), score_all(neg_sentences, neg_feature)});
  }

  const TapeLoss<T> loss =
      tape_total_loss<T>(tape, catch_scores, sentence_scores, pairings, cfg);
  tape.backward(loss.total);

  LossAndGradients<T> out;
  out.loss.mean_order = scalar_value(tape, loss.mean_order);
  out.loss.cross_document = scalar_value(tape, loss.cross_document);
  out.loss.upper_spread = scalar_value(tape, loss.upper_spread);
  out.loss.lower_spread = scalar_value(tape, loss.lower_spread);
  out.loss.catch_spread = -scalar_value(tape, loss.catch_std);
  out.loss.sentence_spread = -scalar_value(tape, loss.sentence_std);
  out.loss.total = scalar_value(tape, loss.total);
  for (std::size_t slot = 0; slot < kParamSlotCount; ++slot) {
    out.grads[slot] = tape.grad(model.params[slot]);
  }
  return out;
}

template <class T>
LossBreakdown evaluate_loss(const ModelParams<T>& params, const CaseDocument& doc,
                            std::span<const CaseDocument* const> negatives,
                            const EmbeddingTable& table, const LossConfig& cfg) {
  const ScoredDocument<T> own = score_document(params, doc, table);
  const auto catch_scores = own.scores.all_catchword_scores();
  if (catch_scores.empty()) {
    throw ContractError("evaluate_loss: document " + doc.id + " has no catchphrases");
  }
  ScoreStats stats = make_score_stats(catch_scores, own.scores.all_sentence_scores());
  for (const CaseDocument* neg : negatives) {
    const ScoredDocument<T> other = score_document(params, *neg, table, ScoringScope::kSentencesOnly);
    std::vector<double> cross;
    for (const auto& phrase : own.encoding.catchphrases) {
      const auto s = score_phrase_words<T>(params, phrase, other.encoding.document);
      cross.insert(cross.end(), s.begin(), s.end());
    }
    stats.negatives.push_back(make_negative_pairing(cross, other.scores.all_sentence_scores()));
  }
  return total_loss(stats, cfg);
}

template <class T>
TrainResult<T> train(const CorpusSplit& split, const EmbeddingTable& table, const TrainConfig& cfg,
                     const StepObserver& observer) {
  cfg.validate();
  if (table.dim() != cfg.dims.embedding_dim) {
    throw ConfigError("embedding dim " + std::to_string(table.dim()) + " does not match d=" +
                      std::to_string(cfg.dims.embedding_dim));
  }
  std::vector<const CaseDocument*> docs;
  for (const auto& d : split.train) {
    if (d.has_catchphrases()) docs.push_back(&d);
  }
  if (docs.empty()) throw ConfigError("no training document carries catchphrases");

  TrainResult<T> result{ModelParams<T>::glorot_uniform(cfg.dims, cfg.seed), {}, {}};
  result.adam = AdamState<T>::for_parameters(result.params.tensors);

  LossConfig loss_cfg = cfg.loss;
  const std::size_t available = docs.size() - 1;
  if (available < loss_cfg.negative_set_size) {
    if (available == 0) {
      result.log.warnings.push_back(
          "only one training document: cross-document term skipped");
      loss_cfg.a2 = 0.0;
    } else {
      result.log.warnings.push_back("negative set reduced from " +
                                    std::to_string(loss_cfg.negative_set_size) + " to " +
                                    std::to_string(available));
    }
    loss_cfg.negative_set_size = available;
  }

  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<std::size_t> order(docs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    RandomStream(cfg.seed, "shuffle", epoch).shuffle(order);
    RandomStream negative_rng(cfg.seed, "negatives", epoch);
    RandomStream subsample_rng(cfg.seed, "subsample", epoch);

    double epoch_total = 0.0;
    for (std::size_t index : order) {
      ++step;
      std::optional<CaseDocument> capped;
      const CaseDocument& doc = maybe_cap(*docs[index], cfg.max_doc_tokens, subsample_rng, capped);

      std::vector<std::optional<CaseDocument>> neg_storage(loss_cfg.negative_set_size);
      std::vector<const CaseDocument*> negatives;
      const auto picks = negative_rng.sample_without_replacement(available, loss_cfg.negative_set_size);
      for (std::size_t k = 0; k < picks.size(); ++k) {
        const std::size_t other = picks[k] < index ? picks[k] : picks[k] + 1;
        negatives.push_back(&maybe_cap(*docs[other], cfg.max_doc_tokens, subsample_rng, neg_storage[k]));
      }

      LossAndGradients<T> lg = loss_and_gradients(result.params, doc, negatives, table, loss_cfg);
      if (!std::isfinite(lg.loss.total)) {
        std::ostringstream msg;
        msg << "non-finite loss at epoch " << epoch << " step " << step << " document "
            << doc.id << " (o1=" << lg.loss.mean_order << " o2=" << lg.loss.cross_document
            << " o3=" << lg.loss.upper_spread << " o4=" << lg.loss.lower_spread
            << " o5=" << lg.loss.catch_spread << "/" << lg.loss.sentence_spread << ")";
        throw NumericError(msg.str());
      }
      StepRecord record;
      record.step = step;
      record.epoch = epoch;
      record.doc_id = doc.id;
      record.loss = lg.loss;
      record.grad_norm_pre = clip_global_norm<T>(lg.grads, cfg.clip_norm);
      record.grad_norm_post = global_norm<T>(lg.grads);
      adam_step<T>(result.adam, result.params.tensors, lg.grads, cfg.learning_rate);
      epoch_total += lg.loss.total;
      if (observer) observer(record);
      result.log.steps.push_back(std::move(record));
    }
    result.log.epochs.push_back({epoch, docs.size(), epoch_total / static_cast<double>(docs.size())});

    if (cfg.checkpoint_interval > 0 && epoch % cfg.checkpoint_interval == 0) {
      CheckpointMeta meta = cfg.checkpoint_meta;
      meta.epochs_completed = epoch;
      auto path = cfg.checkpoint_path;
      path += ".epoch" + std::to_string(epoch);
      save_checkpoint(path, result.params, result.adam, meta);
    }
  }
  return result;
}

std::string GradientCheckResult::describe() const {
  std::ostringstream out;
  out << "max relative error " << max_relative_error << " over " << coordinates
      << " coordinates; worst at " << param_slot_name(worst_slot) << "[" << worst_index
      << "] analytic=" << worst_analytic << " numeric=" << worst_numeric;
  if (!nudged_margins.empty()) {
    out << "; margins moved off kinks:";
    for (const auto& m : nudged_margins) out << ' ' << m;
  }
  return out.str();
}

GradientCheckResult gradient_check(const ModelParams<double>& params, const CaseDocument& doc,
                                   std::span<const CaseDocument* const> negatives,
                                   const EmbeddingTable& table, LossConfig cfg, double h) {
  constexpr double kKinkBand = 1e-4;
  constexpr double kKinkShift = 1e-3;
  GradientCheckResult result;

  // Hinge arguments at the unperturbed point, from the tape-free path.
  const ScoredDocument<double> own = score_document(params, doc, table);
  const ScoreStats stats =
      make_score_stats(own.scores.all_catchword_scores(), own.scores.all_sentence_scores());
  auto nudge = [&](double& margin, double gap, const char* name) {
    bool moved = false;
    while (std::abs(margin - gap) < kKinkBand) {
      margin += kKinkShift;
      moved = true;
    }
    if (moved) result.nudged_margins.emplace_back(name);
  };
  nudge(cfg.m1, stats.catch_mean - stats.sentence_mean, "m1");
  nudge(cfg.m3, (stats.catch_mean + stats.catch_std) - (stats.sentence_mean + stats.sentence_std),
        "m3");
  nudge(cfg.m4, (stats.catch_mean - stats.catch_std) - stats.sentence_mean, "m4");
  {
    const LossBreakdown probe = evaluate_loss(params, doc, negatives, table, cfg);
    (void)probe;
    // Cross-document gaps need each negative's statistics.
    for (const CaseDocument* neg : negatives) {
      const auto other = score_document(params, *neg, table, ScoringScope::kSentencesOnly);
      std::vector<double> cross;
      for (const auto& phrase : own.encoding.catchphrases) {
        const auto s = score_phrase_words<double>(params, phrase, other.encoding.document);
        cross.insert(cross.end(), s.begin(), s.end());
      }
      const NegativePairing pairing = make_negative_pairing(cross, other.scores.all_sentence_scores());
      nudge(cfg.m2, pairing.sentence_mean - pairing.cross_catch_mean, "m2");
    }
  }

  const LossAndGradients<double> analytic = loss_and_gradients(params, doc, negatives, table, cfg);
  ModelParams<double> probe = params;
  for (std::size_t slot = 0; slot < kParamSlotCount; ++slot) {
    auto values = probe.tensors[slot].values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + h;
      const double plus = evaluate_loss(probe, doc, negatives, table, cfg).total;
      values[i] = saved - h;
      const double minus = evaluate_loss(probe, doc, negatives, table, cfg).total;
      values[i] = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      const double exact = analytic.grads[slot][i];
      const double abs_err = std::abs(exact - numeric);
      const double rel_err =
          abs_err / std::max({std::abs(exact), std::abs(numeric), kGradientCheckFloor});
      ++result.coordinates;
      result.max_absolute_error = std::max(result.max_absolute_error, abs_err);
      if (rel_err > result.max_relative_error || result.coordinates == 1) {
        result.max_relative_error = rel_err;
        result.worst_slot = slot;
        result.worst_index = i;
        result.worst_analytic = exact;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

void require_gradient_match(const GradientCheckResult& result, double tolerance) {
  if (!result.passed(tolerance)) {
    throw NumericError("gradient check failed (tolerance " + format_real(tolerance) +
                       "): " + result.describe());
  }
}

#define CATCHPHRASE_INSTANTIATE(T)                                                          \
  template LossAndGradients<T> loss_and_gradients<T>(                                       \
      const ModelParams<T>&, const CaseDocument&, std::span<const CaseDocument* const>,     \
      const EmbeddingTable&, const LossConfig&);                                            \
  template LossBreakdown evaluate_loss<T>(const ModelParams<T>&, const CaseDocument&,       \
                                          std::span<const CaseDocument* const>,             \
                                          const EmbeddingTable&, const LossConfig&);        \
  template TrainResult<T> train<T>(const CorpusSplit&, const EmbeddingTable&,               \
                                   const TrainConfig&, const StepObserver&);

CATCHPHRASE_INSTANTIATE(float)
CATCHPHRASE_INSTANTIATE(double)

#undef CATCHPHRASE_INSTANTIATE

}  // namespace catchphrase

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

#include "catchphrase/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catchphrase/errors.hpp"
#include "catchphrase/kernels.hpp"
#include "catchphrase/random.hpp"

namespace catchphrase {
namespace {

template <class T>
Tensor<T> glorot_matrix(std::size_t rows, std::size_t cols, std::size_t fan_in,
                        std::size_t fan_out, RandomStream& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor<T> out(rows, cols);
  for (auto& v : out.values()) v = static_cast<T>(rng.uniform(-limit, limit));
  return out;
}

template <class T>
T sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

}  // namespace

void ModelDims::validate() const {
  if (embedding_dim == 0 || filters == 0 || hidden == 0) {
    throw ConfigError("model dims must be positive (d=" + std::to_string(embedding_dim) +
                      ", c=" + std::to_string(filters) + ", h=" + std::to_string(hidden) + ")");
  }
}

std::string_view param_slot_name(std::size_t slot) {
  switch (slot) {
    case kConvKernel: return "conv_kernel";
    case kHiddenWeight: return "mlp_hidden_weight";
    case kHiddenBias: return "mlp_hidden_bias";
    case kOutputWeight: return "mlp_out_weight";
    case kOutputBias: return "mlp_out_bias";
    default: return "unknown";
  }
}

template <class T>
ModelParams<T> ModelParams<T>::zeros(const ModelDims& dims) {
  dims.validate();
  ModelParams p;
  p.dims = dims;
  p.tensors[kConvKernel] = Tensor<T>(dims.filters, dims.window_length());
  p.tensors[kHiddenWeight] = Tensor<T>(dims.hidden, dims.mlp_input());
  p.tensors[kHiddenBias] = Tensor<T>(1, dims.hidden);
  p.tensors[kOutputWeight] = Tensor<T>(1, dims.hidden);
  p.tensors[kOutputBias] = Tensor<T>(1, 1);
  return p;
}

template <class T>
ModelParams<T> ModelParams<T>::glorot_uniform(const ModelDims& dims, std::uint64_t seed) {
  ModelParams p = zeros(dims);
  RandomStream rng(seed, "init");
  p.tensors[kConvKernel] = glorot_matrix<T>(dims.filters, dims.window_length(),
                                            dims.window_length(), dims.filters, rng);
  p.tensors[kHiddenWeight] = glorot_matrix<T>(dims.hidden, dims.mlp_input(),
                                              dims.mlp_input(), dims.hidden, rng);
  p.tensors[kOutputWeight] = glorot_matrix<T>(1, dims.hidden, dims.hidden, 1, rng);
  return p;
}

template <class T>
std::size_t ModelParams<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

template <class T>
void ModelParams<T>::validate() const {
  const ModelParams expected = zeros(dims);
  for (std::size_t slot = 0; slot < kParamSlotCount; ++slot) {
    if (!tensors[slot].same_shape(expected.tensors[slot])) {
      throw DimensionError(std::string(param_slot_name(slot)) + ": shape " +
                           tensors[slot].shape_string() + " vs expected " +
                           expected.tensors[slot].shape_string());
    }
    if (!tensors[slot].all_finite()) {
      throw NumericError(std::string(param_slot_name(slot)) + " has non-finite entries");
    }
  }
}

std::vector<double> ScoreSheet::all_sentence_scores() const {
  std::vector<double> out;
  for (const auto& s : sentence_word_scores) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::vector<double> ScoreSheet::all_catchword_scores() const {
  std::vector<double> out;
  for (const auto& c : catchword_scores) out.insert(out.end(), c.begin(), c.end());
  return out;
}

template <class T>
Tensor<T> embed_windows(const TokenSeq& phrase, const EmbeddingTable& table,
                        std::size_t half_window) {
  if (phrase.empty()) throw ContractError("embed_windows: empty phrase");
  const std::size_t d = table.dim();
  const std::size_t width = 2 * half_window + 1;
  const std::size_t n = phrase.size();
  std::vector<std::span<const float>> vectors;
  vectors.reserve(n);
  for (const auto& token : phrase.tokens) vectors.push_back(table.lookup(token));
  Tensor<T> out(n, d * width);
  for (std::size_t j = 0; j < n; ++j) {
    auto row = out.row(j);
    for (std::size_t w = 0; w < width; ++w) {
      const auto pos = static_cast<std::ptrdiff_t>(j + w) - static_cast<std::ptrdiff_t>(half_window);
      if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(n)) continue;
      const auto& v = vectors[static_cast<std::size_t>(pos)];
      std::transform(v.begin(), v.end(), row.begin() + w * d,
                     [](float x) { return static_cast<T>(x); });
    }
  }
  return out;
}

template <class T>
std::vector<T> word_features(const ModelParams<T>& params, std::span<const T> window) {
  const Tensor<T>& kernel = params.conv_kernel();
  if (window.size() != kernel.cols()) {
    throw DimensionError("word_features: window of length " + std::to_string(window.size()) +
                         " vs kernel " + kernel.shape_string());
  }
  std::vector<T> out(kernel.rows());
  for (std::size_t f = 0; f < kernel.rows(); ++f) {
    const T v = kernels::dot(kernel.row(f).data(), window.data(), window.size());
    out[f] = v > T(0) ? v : T(0);
  }
  return out;
}

template <class T>
std::vector<T> phrase_features(std::span<const std::vector<T>> word_feats) {
  if (word_feats.empty()) throw ContractError("phrase_features: empty phrase");
  std::vector<T> out = word_feats.front();
  for (const auto& f : word_feats.subspan(1)) {
    if (f.size() != out.size()) {
      throw DimensionError("phrase_features: feature lengths " + std::to_string(out.size()) +
                           " and " + std::to_string(f.size()));
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], f[i]);
  }
  return out;
}

template <class T>
std::vector<T> document_features(std::span<const SentenceFeature<T>> sentences) {
  if (sentences.empty()) throw ContractError("document_features: no sentences");
  std::vector<T> out = sentences.front().values;
  for (const auto& s : sentences.subspan(1)) {
    if (s.values.size() != out.size()) {
      throw DimensionError("document_features: feature lengths " + std::to_string(out.size()) +
                           " and " + std::to_string(s.values.size()));
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], s.values[i]);
  }
  return out;
}

template <class T>
double score_word(const ModelParams<T>& params, std::span<const T> word_feature,
                  std::span<const T> phrase_feature, std::span<const T> doc_feature) {
  const std::size_t c = params.dims.filters;
  if (word_feature.size() != c || phrase_feature.size() != c || doc_feature.size() != c) {
    throw DimensionError("score_word: feature lengths " + std::to_string(word_feature.size()) +
                         "/" + std::to_string(phrase_feature.size()) + "/" +
                         std::to_string(doc_feature.size()) + " vs c=" + std::to_string(c));
  }
  std::vector<T> input;
  input.reserve(3 * c);
  input.insert(input.end(), word_feature.begin(), word_feature.end());
  input.insert(input.end(), phrase_feature.begin(), phrase_feature.end());
  input.insert(input.end(), doc_feature.begin(), doc_feature.end());
  const Tensor<T>& w1 = params.hidden_weight();
  const Tensor<T>& b1 = params.hidden_bias();
  const Tensor<T>& w2 = params.output_weight();
  T logit = params.output_bias()[0];
  for (std::size_t u = 0; u < w1.rows(); ++u) {
    const T pre = kernels::dot(w1.row(u).data(), input.data(), input.size()) + b1[u];
    logit += w2[u] * std::tanh(pre);
  }
  return static_cast<double>(sigmoid(logit));
}

template <class T>
PhraseEncoding<T> encode_phrase(const ModelParams<T>& params, const TokenSeq& phrase,
                                const EmbeddingTable& table) {
  if (table.dim() != params.dims.embedding_dim) {
    throw DimensionError("embedding dim " + std::to_string(table.dim()) +
                         " vs model d=" + std::to_string(params.dims.embedding_dim));
  }
  const Tensor<T> windows = embed_windows<T>(phrase, table, params.dims.half_window);
  const Tensor<T>& kernel = params.conv_kernel();
  PhraseEncoding<T> enc;
  enc.word_features = Tensor<T>(windows.rows(), kernel.rows());
  kernels::gemm_nt(windows.data(), kernel.data(), enc.word_features.data(), windows.rows(),
                   kernel.rows(), windows.cols());
  for (auto& v : enc.word_features.values()) v = v > T(0) ? v : T(0);
  enc.pooled.assign(enc.word_features.row(0).begin(), enc.word_features.row(0).end());
  for (std::size_t j = 1; j < enc.word_features.rows(); ++j) {
    const auto row = enc.word_features.row(j);
    for (std::size_t f = 0; f < row.size(); ++f) enc.pooled[f] = std::max(enc.pooled[f], row[f]);
  }
  return enc;
}

template <class T>
std::vector<double> score_phrase_words(const ModelParams<T>& params,
                                       const PhraseEncoding<T>& phrase,
                                       std::span<const T> doc_feature) {
  std::vector<double> scores;
  scores.reserve(phrase.word_features.rows());
  for (std::size_t j = 0; j < phrase.word_features.rows(); ++j) {
    scores.push_back(score_word<T>(params, phrase.word_features.row(j), phrase.pooled,
                                   doc_feature));
  }
  return scores;
}

template <class T>
ScoredDocument<T> score_document(const ModelParams<T>& params, const CaseDocument& doc,
                                 const EmbeddingTable& table, ScoringScope scope) {
  if (doc.sentences.empty()) {
    throw ContractError("score_document: document " + doc.id + " has no sentences");
  }
  ScoredDocument<T> out;
  auto& enc = out.encoding;
  std::vector<SentenceFeature<T>> pooled;
  for (const auto& sentence : doc.sentences) {
    enc.sentences.push_back(encode_phrase(params, sentence, table));
    pooled.push_back({enc.sentences.back().pooled});
  }
  enc.document = document_features<T>(pooled);
  for (const auto& s : enc.sentences) {
    out.scores.sentence_word_scores.push_back(score_phrase_words<T>(params, s, enc.document));
  }
  if (scope == ScoringScope::kAll) {
    for (const auto& phrase : doc.catchphrases) {
      enc.catchphrases.push_back(encode_phrase(params, phrase, table));
      out.scores.catchword_scores.push_back(
          score_phrase_words<T>(params, enc.catchphrases.back(), enc.document));
    }
  }
  return out;
}

template <class T>
TapeModel<T> TapeModel<T>::bind(Tape<T>& tape, const ModelParams<T>& params) {
  TapeModel model;
  model.tape = &tape;
  model.half_window = params.dims.half_window;
  for (std::size_t slot = 0; slot < kParamSlotCount; ++slot) {
    model.params[slot] = tape.parameter(params.tensors[slot]);
  }
  return model;
}

template <class T>
TapePhrase<T> tape_encode_phrase(const TapeModel<T>& model, const TokenSeq& phrase,
                                 const EmbeddingTable& table) {
  Tape<T>& tape = *model.tape;
  auto windows = tape.constant(embed_windows<T>(phrase, table, model.half_window));
  auto features = tape.relu(tape.matmul_nt(windows, model.params[kConvKernel]));
  return {features, tape.max_over_rows(features)};
}

template <class T>
typename Tape<T>::Var tape_document_features(const TapeModel<T>& model,
                                             std::span<const TapePhrase<T>> sentences) {
  if (sentences.empty()) throw ContractError("tape_document_features: no sentences");
  std::vector<typename Tape<T>::Var> pooled;
  pooled.reserve(sentences.size());
  for (const auto& s : sentences) pooled.push_back(s.pooled);
  Tape<T>& tape = *model.tape;
  return tape.max_over_rows(tape.concat_rows(pooled));
}

template <class T>
typename Tape<T>::Var tape_score_words(const TapeModel<T>& model, const TapePhrase<T>& phrase,
                                       typename Tape<T>::Var doc_feature) {
  Tape<T>& tape = *model.tape;
  const std::array<typename Tape<T>::Var, 3> parts = {phrase.word_features, phrase.pooled,
                                                      doc_feature};
  auto input = tape.concat_cols(parts);
  auto hidden = tape.tanh(
      tape.add_row(tape.matmul_nt(input, model.params[kHiddenWeight]), model.params[kHiddenBias]));
  auto logit =
      tape.add_row(tape.matmul_nt(hidden, model.params[kOutputWeight]), model.params[kOutputBias]);
  return tape.sigmoid(logit);
}

#define CATCHPHRASE_INSTANTIATE(T)                                                        \
  template struct ModelParams<T>;                                                         \
  template struct TapeModel<T>;                                                           \
  template Tensor<T> embed_windows<T>(const TokenSeq&, const EmbeddingTable&, std::size_t); \
  template std::vector<T> word_features<T>(const ModelParams<T>&, std::span<const T>);    \
  template std::vector<T> phrase_features<T>(std::span<const std::vector<T>>);            \
  template std::vector<T> document_features<T>(std::span<const SentenceFeature<T>>);      \
  template double score_word<T>(const ModelParams<T>&, std::span<const T>,                \
                                std::span<const T>, std::span<const T>);                  \
  template PhraseEncoding<T> encode_phrase<T>(const ModelParams<T>&, const TokenSeq&,     \
                                              const EmbeddingTable&);                     \
  template std::vector<double> score_phrase_words<T>(                                     \
      const ModelParams<T>&, const PhraseEncoding<T>&, std::span<const T>);               \
  template ScoredDocument<T> score_document<T>(const ModelParams<T>&, const CaseDocument&, \
                                               const EmbeddingTable&, ScoringScope);      \
  template TapePhrase<T> tape_encode_phrase<T>(const TapeModel<T>&, const TokenSeq&,      \
                                               const EmbeddingTable&);                    \
  template Tape<T>::Var tape_document_features<T>(const TapeModel<T>&,                    \
                                                  std::span<const TapePhrase<T>>);        \
  template Tape<T>::Var tape_score_words<T>(const TapeModel<T>&, const TapePhrase<T>&,    \
                                            Tape<T>::Var);

CATCHPHRASE_INSTANTIATE(float)
CATCHPHRASE_INSTANTIATE(double)

#undef CATCHPHRASE_INSTANTIATE

}  // namespace catchphrase

namespace catchphrase {

std::string_view precision_name(Precision precision) {
  return precision == Precision::kFloat ? "float" : "double";
}

Precision parse_precision(std::string_view name) {
  if (name == "float") return Precision::kFloat;
  if (name == "double") return Precision::kDouble;
  throw ConfigError("precision must be 'float' or 'double', got '" + std::string(name) + "'");
}

}  // namespace catchphrase

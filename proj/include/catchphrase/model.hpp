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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "catchphrase/corpus.hpp"
#include "catchphrase/embeddings.hpp"
#include "catchphrase/tape.hpp"
#include "catchphrase/tensor.hpp"

namespace catchphrase {

// d: embedding width, k: words on each side of the centre word, c: number
// of convolution filters, h: MLP hidden width.
struct ModelDims {
  std::size_t embedding_dim = 300;
  std::size_t half_window = 2;
  std::size_t filters = 300;
  std::size_t hidden = 300;

  std::size_t window_width() const { return 2 * half_window + 1; }
  std::size_t window_length() const { return embedding_dim * window_width(); }
  std::size_t mlp_input() const { return 3 * filters; }

  // Throws ConfigError when any extent is zero.
  void validate() const;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

enum ParamSlot : std::size_t {
  kConvKernel = 0,   // c x d(2k+1)
  kHiddenWeight,     // h x 3c
  kHiddenBias,       // 1 x h
  kOutputWeight,     // 1 x h
  kOutputBias,       // 1 x 1
  kParamSlotCount
};

std::string_view param_slot_name(std::size_t slot);

template <class T>
struct ModelParams {
  ModelDims dims;
  std::array<Tensor<T>, kParamSlotCount> tensors;

  const Tensor<T>& conv_kernel() const { return tensors[kConvKernel]; }
  const Tensor<T>& hidden_weight() const { return tensors[kHiddenWeight]; }
  const Tensor<T>& hidden_bias() const { return tensors[kHiddenBias]; }
  const Tensor<T>& output_weight() const { return tensors[kOutputWeight]; }
  const Tensor<T>& output_bias() const { return tensors[kOutputBias]; }

  static ModelParams zeros(const ModelDims& dims);
  // Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases,
  // drawn from the "init" stream of `seed`.
  static ModelParams glorot_uniform(const ModelDims& dims, std::uint64_t seed);

  std::size_t parameter_count() const;
  // Throws DimensionError on a wrong shape, NumericError on a non-finite
  // entry.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Row j holds the concatenated embeddings of words j-k .. j+k, with zero
// vectors standing in for positions outside the phrase.
template <class T>
Tensor<T> embed_windows(const TokenSeq& phrase, const EmbeddingTable& table,
                        std::size_t half_window);

// ReLU(W^c * window).
template <class T>
std::vector<T> word_features(const ModelParams<T>& params,
                             std::span<const T> window);

// Componentwise maximum over a non-empty list.
template <class T>
std::vector<T> phrase_features(std::span<const std::vector<T>> word_feats);

// Pooled features of a document sentence. A distinct type so that
// catchphrase features cannot be passed to document_features().
template <class T>
struct SentenceFeature {
  std::vector<T> values;
};

template <class T>
std::vector<T> document_features(std::span<const SentenceFeature<T>> sentences);

// sigmoid(W2 tanh(W1 [f_w; f_phrase; f_d] + b1) + b2).
template <class T>
double score_word(const ModelParams<T>& params, std::span<const T> word_feature,
                  std::span<const T> phrase_feature, std::span<const T> doc_feature);

template <class T>
struct PhraseEncoding {
  Tensor<T> word_features;  // n x c
  std::vector<T> pooled;    // c
};

template <class T>
struct DocumentEncoding {
  std::vector<PhraseEncoding<T>> sentences;
  std::vector<PhraseEncoding<T>> catchphrases;
  std::vector<T> document;  // depends on sentences only
};

struct ScoreSheet {
  std::vector<std::vector<double>> sentence_word_scores;
  std::vector<std::vector<double>> catchword_scores;

  std::vector<double> all_sentence_scores() const;
  std::vector<double> all_catchword_scores() const;
};

template <class T>
PhraseEncoding<T> encode_phrase(const ModelParams<T>& params,
                                const TokenSeq& phrase,
                                const EmbeddingTable& table);

// Scores each word of an encoded phrase against a document feature. Used
// both for a document's own phrases and for pairing one document's
// catchphrases with another document's feature.
template <class T>
std::vector<double> score_phrase_words(const ModelParams<T>& params,
                                       const PhraseEncoding<T>& phrase,
                                       std::span<const T> doc_feature);

enum class ScoringScope { kAll, kSentencesOnly };

template <class T>
struct ScoredDocument {
  DocumentEncoding<T> encoding;
  ScoreSheet scores;
};

// Tape-free forward pass over one document. Throws ContractError when the
// document has no sentences.
template <class T>
ScoredDocument<T> score_document(const ModelParams<T>& params,
                                 const CaseDocument& doc,
                                 const EmbeddingTable& table,
                                 ScoringScope scope = ScoringScope::kAll);

// ---------------------------------------------------------------------------
// The same forward pass recorded on a gradient tape, for training.

template <class T>
struct TapeModel {
  using Var = typename Tape<T>::Var;

  Tape<T>* tape = nullptr;
  std::size_t half_window = 0;
  std::array<Var, kParamSlotCount> params{};

  static TapeModel bind(Tape<T>& tape, const ModelParams<T>& params);
};

template <class T>
struct TapePhrase {
  typename Tape<T>::Var word_features;  // n x c
  typename Tape<T>::Var pooled;         // 1 x c
};

template <class T>
TapePhrase<T> tape_encode_phrase(const TapeModel<T>& model, const TokenSeq& phrase,
                                 const EmbeddingTable& table);

template <class T>
typename Tape<T>::Var tape_document_features(const TapeModel<T>& model,
                                             std::span<const TapePhrase<T>> sentences);

// n x 1 column of word scores.
template <class T>
typename Tape<T>::Var tape_score_words(const TapeModel<T>& model,
                                       const TapePhrase<T>& phrase,
                                       typename Tape<T>::Var doc_feature);

}  // namespace catchphrase

namespace catchphrase {

// Scalar type of a model's parameters and arithmetic.
enum class Precision { kFloat, kDouble };

std::string_view precision_name(Precision precision);
// Accepts "float" / "double"; throws ConfigError otherwise.
Precision parse_precision(std::string_view name);

}  // namespace catchphrase

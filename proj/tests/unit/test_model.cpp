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

#include "catchphrase/errors.hpp"
#include "catchphrase/model.hpp"
#include "catchphrase/random.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace catchphrase;

namespace {

const ModelDims kToy{8, 1, 6, 8};

template <class T>
ModelParams<T> noisy_params(const ModelDims& dims, std::uint64_t seed) {
  auto p = ModelParams<T>::glorot_uniform(dims, seed);
  RandomStream rng(seed, "bias-noise");
  for (auto slot : {kHiddenBias, kOutputBias}) {
    for (auto& v : p.tensors[slot].values()) v = static_cast<T>(0.1 * rng.normal());
  }
  return p;
}

}  // namespace

TEST_CASE("dims and parameter shapes") {
  const ModelDims defaults;
  CHECK(defaults.embedding_dim == 300);
  CHECK(defaults.half_window == 2);
  CHECK(defaults.filters == 300);
  CHECK(defaults.hidden == 300);
  CHECK(defaults.window_length() == 1500);
  CHECK(defaults.mlp_input() == 900);
  const auto p = ModelParams<double>::glorot_uniform(kToy, 1);
  CHECK(p.conv_kernel().rows() == 6);
  CHECK(p.conv_kernel().cols() == 24);
  CHECK(p.hidden_weight().cols() == 18);
  CHECK(p.output_weight().cols() == 8);
  CHECK(p.output_bias().size() == 1);
  CHECK(p.parameter_count() == 6 * 24 + 8 * 18 + 8 + 8 + 1);
  CHECK_THROWS_AS((ModelDims{0, 1, 1, 1}.validate()), ConfigError);
}

TEST_CASE("glorot initialisation is bounded, seeded and leaves biases at zero") {
  const auto a = ModelParams<double>::glorot_uniform(kToy, 9);
  const auto b = ModelParams<double>::glorot_uniform(kToy, 9);
  const auto c = ModelParams<double>::glorot_uniform(kToy, 10);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  const double bound = std::sqrt(6.0 / (24 + 6));
  for (double v : a.conv_kernel().values()) CHECK(std::abs(v) <= bound);
  for (double v : a.hidden_bias().values()) CHECK(v == 0.0);
  CHECK(a.output_bias()[0] == 0.0);
}

TEST_CASE("window embedding pads with zeros at phrase edges") {
  const auto table = fixtures::random_table(8, 5, 2);
  const auto windows = embed_windows<double>(fixtures::seq({"w0", "w1"}), table, 1);
  REQUIRE(windows.rows() == 2);
  REQUIRE(windows.cols() == 24);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(windows(0, i) == 0.0);
    CHECK(windows(0, 8 + i) == static_cast<double>(table.lookup("w0")[i]));
    CHECK(windows(0, 16 + i) == static_cast<double>(table.lookup("w1")[i]));
    CHECK(windows(1, 16 + i) == 0.0);
  }
}

TEST_CASE("scores agree with a plain-loop forward oracle") {
  const auto table = fixtures::random_table(8, 12, 3);
  RandomStream rng(4, "model-oracle");
  const auto params = noisy_params<double>(kToy, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto doc = fixtures::random_doc(rng, "07_1", 12, 1 + rng.below(4), 1 + rng.below(3));
    const auto scored = score_document(params, doc, table);
    const oracle::Forward<double> ref{params, table};
    const auto fd = ref.document(doc);
    for (std::size_t c = 0; c < fd.size(); ++c) {
      CHECK(scored.encoding.document[c] == doctest::Approx(fd[c]).epsilon(1e-12));
    }
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      const auto want = ref.phrase_scores(doc.sentences[s], fd);
      for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(scored.scores.sentence_word_scores[s][i] == doctest::Approx(want[i]).epsilon(1e-12));
      }
    }
    for (std::size_t s = 0; s < doc.catchphrases.size(); ++s) {
      const auto want = ref.phrase_scores(doc.catchphrases[s], fd);
      for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(scored.scores.catchword_scores[s][i] == doctest::Approx(want[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("float and double forward passes agree to single precision") {
  const auto table = fixtures::random_table(8, 12, 3);
  RandomStream rng(6, "model-float");
  const auto pd = noisy_params<double>(kToy, 7);
  ModelParams<float> pf = ModelParams<float>::zeros(kToy);
  for (std::size_t s = 0; s < kParamSlotCount; ++s) {
    for (std::size_t i = 0; i < pd.tensors[s].size(); ++i) {
      pf.tensors[s][i] = static_cast<float>(pd.tensors[s][i]);
    }
  }
  const auto doc = fixtures::random_doc(rng, "07_1", 12, 3, 2);
  const auto sd = score_document(pd, doc, table).scores.all_sentence_scores();
  const auto sf = score_document(pf, doc, table).scores.all_sentence_scores();
  for (std::size_t i = 0; i < sd.size(); ++i) CHECK(sf[i] == doctest::Approx(sd[i]).epsilon(1e-5));
}

TEST_CASE("tape forward matches the tape-free forward") {
  const auto table = fixtures::random_table(8, 12, 3);
  RandomStream rng(8, "model-tape");
  const auto params = noisy_params<double>(kToy, 9);
  const auto doc = fixtures::random_doc(rng, "07_1", 12, 3, 2);
  const auto scored = score_document(params, doc, table);
  Tape<double> tape;
  const auto model = TapeModel<double>::bind(tape, params);
  std::vector<TapePhrase<double>> sentences;
  for (const auto& s : doc.sentences) sentences.push_back(tape_encode_phrase(model, s, table));
  const auto fd = tape_document_features<double>(model, sentences);
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto col = tape.value(tape_score_words(model, sentences[s], fd));
    for (std::size_t i = 0; i < col.rows(); ++i) {
      CHECK(col(i, 0) == doctest::Approx(scored.scores.sentence_word_scores[s][i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("out-of-vocabulary words embed as zeros and phrase length 1 works") {
  const auto table = fixtures::random_table(8, 3, 3);
  const auto params = noisy_params<double>(kToy, 2);
  CaseDocument doc;
  doc.id = "07_1";
  doc.sentences = {fixtures::seq({"unknown"})};
  const auto scored = score_document(params, doc, table);
  for (double v : scored.encoding.document) CHECK(v == 0.0);
  REQUIRE(scored.scores.sentence_word_scores[0].size() == 1);
  CHECK(scored.scores.sentence_word_scores[0][0] > 0.0);
  CHECK(scored.scores.sentence_word_scores[0][0] < 1.0);
}

TEST_CASE("model errors") {
  const auto table = fixtures::random_table(4, 3, 3);
  const auto params = noisy_params<double>(kToy, 2);
  CaseDocument doc;
  doc.id = "07_1";
  doc.sentences = {fixtures::seq({"w0"})};
  CHECK_THROWS_AS(score_document(params, doc, table), DimensionError);
  const auto good = fixtures::random_table(8, 3, 3);
  CaseDocument empty;
  empty.id = "07_2";
  CHECK_THROWS_AS(score_document(params, empty, good), ContractError);
  CHECK(parse_precision("float") == Precision::kFloat);
  CHECK(precision_name(Precision::kDouble) == "double");
  CHECK_THROWS_AS(parse_precision("half"), ConfigError);
}

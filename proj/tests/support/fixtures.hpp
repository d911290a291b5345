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
#include <cstdint>
#include <string>
#include <vector>

#include "catchphrase/corpus.hpp"
#include "catchphrase/embeddings.hpp"
#include "catchphrase/random.hpp"

namespace fixtures {

inline catchphrase::TokenSeq seq(std::initializer_list<const char*> words) {
  catchphrase::TokenSeq s;
  for (const char* w : words) s.tokens.emplace_back(w);
  return s;
}

inline catchphrase::TokenSeq words(const std::string& text) {
  return catchphrase::tokenize(text);
}

// A small vocabulary of named words with Gaussian vectors.
inline catchphrase::EmbeddingTable random_table(std::size_t dim, std::size_t vocab,
                                                std::uint64_t seed) {
  catchphrase::RandomStream rng(seed, "fixture-table");
  std::vector<std::string> tokens;
  std::vector<float> matrix;
  for (std::size_t i = 0; i < vocab; ++i) {
    tokens.push_back("w" + std::to_string(i));
    for (std::size_t k = 0; k < dim; ++k) matrix.push_back(static_cast<float>(rng.normal()));
  }
  return catchphrase::EmbeddingTable(dim, std::move(tokens), std::move(matrix));
}

inline catchphrase::TokenSeq random_phrase(catchphrase::RandomStream& rng, std::size_t vocab,
                                           std::size_t min_len, std::size_t max_len) {
  catchphrase::TokenSeq s;
  const std::size_t n = min_len + rng.below(max_len - min_len + 1);
  for (std::size_t i = 0; i < n; ++i) {
    // Occasional out-of-vocabulary word.
    s.tokens.push_back(rng.below(10) == 0 ? "zz" + std::to_string(i)
                                          : "w" + std::to_string(rng.below(vocab)));
  }
  return s;
}

inline catchphrase::CaseDocument random_doc(catchphrase::RandomStream& rng, const std::string& id,
                                            std::size_t vocab, std::size_t sentences,
                                            std::size_t catchphrases) {
  catchphrase::CaseDocument d;
  d.id = id;
  d.year = 2007;
  for (std::size_t i = 0; i < sentences; ++i) d.sentences.push_back(random_phrase(rng, vocab, 2, 7));
  for (std::size_t i = 0; i < catchphrases; ++i) {
    d.catchphrases.push_back(random_phrase(rng, vocab, 1, 4));
  }
  return d;
}

}  // namespace fixtures

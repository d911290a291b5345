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
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "catchphrase/corpus.hpp"
#include "catchphrase/embeddings.hpp"
#include "catchphrase/model.hpp"

namespace catchphrase {

struct Anchor {
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;
  double score = 0.0;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

// Inclusive token span [begin, end] of one sentence.
struct ExtractedPhrase {
  std::size_t sentence_index = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  TokenSeq tokens;
  std::vector<double> anchor_scores;

  double max_anchor_score() const;
  friend bool operator==(const ExtractedPhrase&, const ExtractedPhrase&) = default;
};

// The t highest sentence-word scores, ordered by descending score with ties
// going to the lower (sentence, token) position. Catchword scores are
// ignored. Throws ContractError when t == 0 or there are no sentence words.
std::vector<Anchor> select_anchors(const ScoreSheet& sheet, std::size_t t);

// One span of radius r per anchor, clipped to its sentence; spans of the
// same sentence that overlap or touch become one phrase. Ordered by
// (sentence, begin). Throws ContractError on an anchor outside `doc`.
std::vector<ExtractedPhrase> extract_phrases(const CaseDocument& doc,
                                             std::span<const Anchor> anchors, std::size_t r);

struct Extraction {
  std::size_t anchor_count = 0;
  std::vector<ExtractedPhrase> phrases;
};

template <class T>
Extraction extract_for_document(const ModelParams<T>& params, const EmbeddingTable& table,
                                const CaseDocument& doc, std::size_t t, std::size_t r);

struct DocumentPhrases {
  std::string doc_id;
  std::size_t anchor_count = 0;
  std::vector<ExtractedPhrase> phrases;

  friend bool operator==(const DocumentPhrases&, const DocumentPhrases&) = default;
};

// Text format:
//   # <key>=<value>                     header lines (config echo)
//   doc\t<id>\tanchors=<n>
//   <sentence>\t<begin>\t<end>\t<max anchor score>\t<space-joined tokens>
// Only the max anchor score survives a round trip.
void write_phrases(std::ostream& out, std::span<const std::pair<std::string, std::string>> header,
                   std::span<const DocumentPhrases> docs);

struct PhrasesFile {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<DocumentPhrases> docs;
};

// Throws FormatError naming the line on malformed input.
PhrasesFile read_phrases(std::istream& in);

}  // namespace catchphrase

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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace catchphrase::synthetic {

// A topic-structured stand-in for the case archive. Each document belongs
// to one topic; its catchphrases are runs of that topic's content words and
// some sentences quote them amid filler text. Content words embed near a
// shared content direction plus a topic direction, filler words near a
// filler direction.
struct SyntheticSpec {
  std::size_t train_docs = 50;
  std::size_t test_docs = 20;
  int test_year = 2006;
  std::size_t topics = 10;
  std::size_t words_per_topic = 16;
  std::size_t filler_words = 240;
  std::size_t dim = 300;
  std::size_t min_sentences = 8;
  std::size_t max_sentences = 14;
  std::size_t catchphrases_per_doc = 4;
  // Vector scales. Frequent filler words get shorter vectors than content
  // words, as in embeddings trained on real text.
  double filler_scale = 0.3;
  double topic_scale = 3.0;
  // Chance that a sentence mentions a few content words of another topic.
  double foreign_mention_rate = 0.0;
  // Chance that a sentence quotes the document's own topic.
  double own_mention_rate = 0.5;
  std::uint64_t seed = 7;
};

struct SyntheticCorpus {
  std::vector<std::pair<std::string, std::string>> files;  // file name, XML text
  std::string embeddings;                                  // text format
};

SyntheticCorpus make_synthetic_corpus(const SyntheticSpec& spec);

// Writes every file into `corpus_dir` (created if needed) and the
// embeddings to `embeddings_path`.
void write_synthetic_corpus(const SyntheticCorpus& corpus,
                            const std::filesystem::path& corpus_dir,
                            const std::filesystem::path& embeddings_path);

}  // namespace catchphrase::synthetic

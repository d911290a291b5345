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

#include <iostream>

#include <CLI11.hpp>

#include "synthetic_corpus.hpp"

int main(int argc, char** argv) {
  namespace syn = catchphrase::synthetic;
  CLI::App app{"Write a synthetic case corpus and matching embeddings"};
  syn::SyntheticSpec spec;
  std::string corpus_dir, embeddings;
  app.add_option("--corpus-dir", corpus_dir, "output directory for case XML")->required();
  app.add_option("--embeddings", embeddings, "output embeddings text file")->required();
  app.add_option("--train-docs", spec.train_docs);
  app.add_option("--test-docs", spec.test_docs);
  app.add_option("--test-year", spec.test_year);
  app.add_option("--topics", spec.topics);
  app.add_option("--dim", spec.dim);
  app.add_option("--seed", spec.seed);
  app.add_option("--foreign-mention-rate", spec.foreign_mention_rate);
  app.add_option("--filler-scale", spec.filler_scale);
  app.add_option("--topic-scale", spec.topic_scale);
  app.add_option("--own-mention-rate", spec.own_mention_rate);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    syn::write_synthetic_corpus(syn::make_synthetic_corpus(spec), corpus_dir, embeddings);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cout << spec.train_docs + spec.test_docs << " documents written to " << corpus_dir << '\n';
  return 0;
}

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
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "catchphrase/corpus.hpp"
#include "catchphrase/embeddings.hpp"
#include "catchphrase/model.hpp"
#include "catchphrase/random.hpp"
#include "catchphrase/rouge.hpp"
#include "catchphrase/run_config.hpp"
#include "catchphrase/selector.hpp"
#include "catchphrase/trainer.hpp"

namespace catchphrase {

// Throws ConfigError naming `key` and the path when it is unset or missing.
void require_existing_path(const std::filesystem::path& path, std::string_view key);

struct PreparedCorpus {
  CorpusSplit split;
  ParseDiagnostics diagnostics;
};

// Loads cfg.corpus_dir, splits on cfg.test_year and applies the
// max_train_docs / max_test_docs limits.
PreparedCorpus prepare_corpus(const RunConfig& cfg);

// Every token of every document plus its lowercased form.
std::unordered_set<std::string> corpus_vocabulary(const CorpusSplit& split);

// Text or binary cache, detected from the file's first bytes. Throws
// ConfigError when the stored width differs from `dim`.
EmbeddingTable load_embedding_source(const std::filesystem::path& path, std::size_t dim,
                                     const std::unordered_set<std::string>* vocabulary);

template <class T>
std::vector<DocumentPhrases> extract_documents(const ModelParams<T>& params,
                                               const EmbeddingTable& table,
                                               std::span<const CaseDocument> docs,
                                               std::size_t t, std::size_t r);

// The same selection code driven by uniform-random word scores.
DocumentPhrases random_extraction(const CaseDocument& doc, std::size_t t, std::size_t r,
                                  RandomStream& rng);

std::map<std::string, std::vector<TokenSeq>> phrases_by_doc(std::span<const DocumentPhrases> docs);
// Documents without catchphrases are left out.
std::map<std::string, std::vector<TokenSeq>> golds_by_doc(std::span<const CaseDocument> docs);

struct DocumentStats {
  std::string doc_id;
  ScoreStats stats;
  std::vector<std::string> negative_ids;  // parallel to stats.negatives
};

// Fraction of documents (o1, o3, o4, o5) or pairings (o2) on which the
// strict ordering holds: o1 E_c > E_s; o2 E_s' > E_c,d'; o3 E_c + std_c >
// E_s + std_s; o4 E_c - std_c > E_s; o5 both spreads above kSpreadFloor.
struct ConstraintRates {
  double rate[5] = {};
  std::size_t documents = 0;
  std::size_t pairings = 0;
};

inline constexpr double kSpreadFloor = 1e-3;

template <class T>
std::vector<DocumentStats> compute_score_stats(const ModelParams<T>& params,
                                               const EmbeddingTable& table,
                                               std::span<const CaseDocument> docs,
                                               std::size_t negatives, std::uint64_t seed);

ConstraintRates constraint_rates(std::span<const DocumentStats> stats);

void write_score_stats(std::ostream& out,
                       std::span<const std::pair<std::string, std::string>> header,
                       std::span<const DocumentStats> stats);

// Commands. Each reads its inputs from `cfg`, writes its artifacts and
// reports progress on `log`.
void cmd_train(const RunConfig& cfg, std::ostream& log);
void cmd_extract(const RunConfig& cfg, std::ostream& log);
void cmd_evaluate(const RunConfig& cfg, std::ostream& log);
void cmd_score_stats(const RunConfig& cfg, std::ostream& log);

// Full command line. Exit codes: 0 ok, 1 runtime failure, 2 usage or
// configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace catchphrase

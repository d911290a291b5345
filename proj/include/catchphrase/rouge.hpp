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
#include <map>
#include <string>
#include <vector>

#include "catchphrase/corpus.hpp"

namespace catchphrase {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;

  // f = 2PR / (P + R), 0 when P + R == 0.
  static RougeScore from(double precision, double recall);
};

// Tokens are lowercased (ASCII) before comparison; an empty side scores 0.
RougeScore rouge_1(const TokenSeq& candidate, const TokenSeq& reference);

// Skip-bigrams (i < j, at most max_skip tokens between them) plus unigrams
// as <BEGIN, w> units; clipped multiset overlap.
RougeScore rouge_su(const TokenSeq& candidate, const TokenSeq& reference,
                    std::size_t max_skip = 6);

// Weighted LCS with run weight f(l) = l^weight. The maximum is taken over
// all common-subsequence alignments.
// R = f^-1(WLCS / f(|reference|)), P = f^-1(WLCS / f(|candidate|)).
RougeScore rouge_w(const TokenSeq& candidate, const TokenSeq& reference, double weight = 1.2);

// Maximum total run weight of any common-subsequence alignment.
double weighted_lcs(const std::vector<std::string>& x, const std::vector<std::string>& y,
                    double weight);

enum RougeMetric : std::size_t { kRouge1 = 0, kRougeSU6, kRougeW12, kRougeMetricCount };
const char* rouge_metric_name(std::size_t metric);

struct DocumentRouge {
  std::string doc_id;
  RougeScore scores[kRougeMetricCount];
};

struct RougeReport {
  std::vector<DocumentRouge> documents;  // sorted by id
  RougeScore average[kRougeMetricCount];

  // Aligned table: one row per document and a final average row, with
  // Pre / Rec / Fm columns for each metric.
  void write_table(std::ostream& out) const;
  void write_csv(std::ostream& out) const;
};

// Candidate = extracted phrases concatenated in order; reference = gold
// catchphrases concatenated in order. Averages are unweighted means over
// documents. Throws ContractError listing every id present on only one
// side.
RougeReport evaluate_corpus(const std::map<std::string, std::vector<TokenSeq>>& extractions,
                            const std::map<std::string, std::vector<TokenSeq>>& golds);

}  // namespace catchphrase

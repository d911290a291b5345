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

#include "catchphrase/rouge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "catchphrase/errors.hpp"

namespace catchphrase {
namespace {

std::vector<std::string> lowered(const TokenSeq& seq) {
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (const auto& t : seq.tokens) {
    std::string w = t;
    for (char& ch : w) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    out.push_back(std::move(w));
  }
  return out;
}

using Counts = std::unordered_map<std::string, std::size_t>;

std::size_t clipped_overlap(const Counts& a, const Counts& b) {
  std::size_t overlap = 0;
  for (const auto& [unit, n] : a) {
    const auto it = b.find(unit);
    if (it != b.end()) overlap += std::min(n, it->second);
  }
  return overlap;
}

RougeScore overlap_score(std::size_t overlap, std::size_t candidate_units,
                         std::size_t reference_units) {
  if (candidate_units == 0 || reference_units == 0) return {};
  return RougeScore::from(static_cast<double>(overlap) / static_cast<double>(candidate_units),
                          static_cast<double>(overlap) / static_cast<double>(reference_units));
}

// '\x1f' cannot appear inside a whitespace-split token pair boundary.
std::string unit(const std::string& a, const std::string& b) { return a + '\x1f' + b; }

Counts su_units(const std::vector<std::string>& words, std::size_t max_skip, std::size_t& total) {
  Counts counts;
  total = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    ++counts[unit("\x1e", words[i])];
    ++total;
    for (std::size_t j = i + 1; j < words.size() && j - i - 1 <= max_skip; ++j) {
      ++counts[unit(words[i], words[j])];
      ++total;
    }
  }
  return counts;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> concat(const std::vector<TokenSeq>& phrases) {
  std::vector<std::string> out;
  for (const auto& p : phrases) out.insert(out.end(), p.tokens.begin(), p.tokens.end());
  return out;
}

}  // namespace

RougeScore RougeScore::from(double precision, double recall) {
  const double sum = precision + recall;
  return {precision, recall, sum > 0.0 ? 2.0 * precision * recall / sum : 0.0};
}

RougeScore rouge_1(const TokenSeq& candidate, const TokenSeq& reference) {
  Counts c, r;
  for (auto& w : lowered(candidate)) ++c[w];
  for (auto& w : lowered(reference)) ++r[w];
  return overlap_score(clipped_overlap(c, r), candidate.size(), reference.size());
}

RougeScore rouge_su(const TokenSeq& candidate, const TokenSeq& reference, std::size_t max_skip) {
  if (max_skip == 0) throw ContractError("rouge_su: max_skip must be >= 1");
  std::size_t nc = 0, nr = 0;
  const Counts c = su_units(lowered(candidate), max_skip, nc);
  const Counts r = su_units(lowered(reference), max_skip, nr);
  return overlap_score(clipped_overlap(c, r), nc, nr);
}

double weighted_lcs(const std::vector<std::string>& x, const std::vector<std::string>& y,
                    double weight) {
  const std::size_t n = x.size(), m = y.size();
  if (n == 0 || m == 0) return 0.0;
  const std::size_t max_run = std::min(n, m);
  std::vector<double> f(max_run + 1);
  for (std::size_t l = 0; l <= max_run; ++l) f[l] = std::pow(static_cast<double>(l), weight);

  constexpr double kNone = -1.0;
  // open[i][j][l]: best weight of closed runs for an alignment whose last
  // match is (i-1, j-1), currently inside a run of length l.
  // closed[i][j]: best total over alignments within x[0,i) and y[0,j).
  const std::size_t stride = max_run + 1;
  std::vector<double> open((n + 1) * (m + 1) * stride, kNone);
  std::vector<double> closed((n + 1) * (m + 1), 0.0);
  auto O = [&](std::size_t i, std::size_t j, std::size_t l) -> double& {
    return open[(i * (m + 1) + j) * stride + l];
  };
  auto C = [&](std::size_t i, std::size_t j) -> double& { return closed[i * (m + 1) + j]; };

  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      double best = std::max(C(i - 1, j), C(i, j - 1));
      if (x[i - 1] == y[j - 1]) {
        O(i, j, 1) = C(i - 1, j - 1);
        for (std::size_t l = 2; l <= std::min(i, j); ++l) {
          if (O(i - 1, j - 1, l - 1) != kNone) O(i, j, l) = O(i - 1, j - 1, l - 1);
        }
        for (std::size_t l = 1; l <= std::min(i, j); ++l) {
          if (O(i, j, l) != kNone) best = std::max(best, O(i, j, l) + f[l]);
        }
      }
      C(i, j) = best;
    }
  }
  return C(n, m);
}

RougeScore rouge_w(const TokenSeq& candidate, const TokenSeq& reference, double weight) {
  if (!(weight > 1.0)) throw ContractError("rouge_w: weight must be > 1");
  if (candidate.empty() || reference.empty()) return {};
  const double wlcs = weighted_lcs(lowered(candidate), lowered(reference), weight);
  auto inverse = [&](double v) { return std::pow(v, 1.0 / weight); };
  const double p = inverse(wlcs / std::pow(static_cast<double>(candidate.size()), weight));
  const double r = inverse(wlcs / std::pow(static_cast<double>(reference.size()), weight));
  return RougeScore::from(p, r);
}

const char* rouge_metric_name(std::size_t metric) {
  switch (metric) {
    case kRouge1: return "ROUGE-1";
    case kRougeSU6: return "ROUGE-SU6";
    case kRougeW12: return "ROUGE-W-1.2";
    default: return "?";
  }
}

RougeReport evaluate_corpus(const std::map<std::string, std::vector<TokenSeq>>& extractions,
                            const std::map<std::string, std::vector<TokenSeq>>& golds) {
  std::vector<std::string> only_extracted, only_gold;
  for (const auto& [id, _] : extractions) {
    if (!golds.count(id)) only_extracted.push_back(id);
  }
  for (const auto& [id, _] : golds) {
    if (!extractions.count(id)) only_gold.push_back(id);
  }
  if (!only_extracted.empty() || !only_gold.empty()) {
    std::string msg = "document ids differ between extractions and gold:";
    for (const auto& id : only_extracted) msg += " +" + id;
    for (const auto& id : only_gold) msg += " -" + id;
    throw ContractError(msg + " (+ extraction only, - gold only)");
  }
  if (golds.empty()) throw ContractError("evaluate_corpus: no documents");

  RougeReport report;
  double sums[kRougeMetricCount][3] = {};
  for (const auto& [id, gold] : golds) {
    const TokenSeq candidate{concat(extractions.at(id))};
    const TokenSeq reference{concat(gold)};
    DocumentRouge d;
    d.doc_id = id;
    d.scores[kRouge1] = rouge_1(candidate, reference);
    d.scores[kRougeSU6] = rouge_su(candidate, reference, 6);
    d.scores[kRougeW12] = rouge_w(candidate, reference, 1.2);
    for (std::size_t m = 0; m < kRougeMetricCount; ++m) {
      sums[m][0] += d.scores[m].precision;
      sums[m][1] += d.scores[m].recall;
      sums[m][2] += d.scores[m].f_measure;
    }
    report.documents.push_back(std::move(d));
  }
  const double n = static_cast<double>(report.documents.size());
  for (std::size_t m = 0; m < kRougeMetricCount; ++m) {
    report.average[m] = {sums[m][0] / n, sums[m][1] / n, sums[m][2] / n};
  }
  return report;
}

void RougeReport::write_table(std::ostream& out) const {
  std::size_t id_width = 8;
  for (const auto& d : documents) id_width = std::max(id_width, d.doc_id.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  out << pad("", id_width);
  for (std::size_t m = 0; m < kRougeMetricCount; ++m) out << "  " << pad(rouge_metric_name(m), 20);
  out << '\n' << pad("Document", id_width);
  for (std::size_t m = 0; m < kRougeMetricCount; ++m) out << "  " << pad("Pre    Rec    Fm", 20);
  out << '\n';
  auto row = [&](const std::string& label, const RougeScore* s) {
    out << pad(label, id_width);
    for (std::size_t m = 0; m < kRougeMetricCount; ++m) {
      out << "  " << pad(fmt(s[m].precision) + ' ' + fmt(s[m].recall) + ' ' + fmt(s[m].f_measure), 20);
    }
    out << '\n';
  };
  for (const auto& d : documents) row(d.doc_id, d.scores);
  row("Average", average);
}

void RougeReport::write_csv(std::ostream& out) const {
  out << "doc_id";
  for (std::size_t m = 0; m < kRougeMetricCount; ++m) {
    const std::string name = rouge_metric_name(m);
    out << ',' << name << "_pre," << name << "_rec," << name << "_fm";
  }
  out << '\n';
  auto row = [&](const std::string& label, const RougeScore* s) {
    out << label;
    for (std::size_t m = 0; m < kRougeMetricCount; ++m) {
      out << ',' << fmt_full(s[m].precision) << ',' << fmt_full(s[m].recall) << ','
          << fmt_full(s[m].f_measure);
    }
    out << '\n';
  };
  for (const auto& d : documents) row(d.doc_id, d.scores);
  row("average", average);
}

}  // namespace catchphrase

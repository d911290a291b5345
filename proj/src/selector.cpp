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

#include "catchphrase/selector.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "catchphrase/errors.hpp"

namespace catchphrase {
namespace {

bool ranks_before(const Anchor& a, const Anchor& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.sentence_index != b.sentence_index) return a.sentence_index < b.sentence_index;
  return a.token_index < b.token_index;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

template <class N>
N parse_number(const std::string& text, std::size_t line_no) {
  N value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw FormatError("phrases line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return value;
}

}  // namespace

double ExtractedPhrase::max_anchor_score() const {
  return anchor_scores.empty() ? 0.0 : *std::max_element(anchor_scores.begin(), anchor_scores.end());
}

std::vector<Anchor> select_anchors(const ScoreSheet& sheet, std::size_t t) {
  if (t == 0) throw ContractError("select_anchors: t must be >= 1");
  std::vector<Anchor> all;
  for (std::size_t s = 0; s < sheet.sentence_word_scores.size(); ++s) {
    const auto& row = sheet.sentence_word_scores[s];
    for (std::size_t i = 0; i < row.size(); ++i) all.push_back({s, i, row[i]});
  }
  if (all.empty()) throw ContractError("select_anchors: document has no sentence words");
  const std::size_t keep = std::min(t, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    ranks_before);
  all.resize(keep);
  return all;
}

std::vector<ExtractedPhrase> extract_phrases(const CaseDocument& doc,
                                             std::span<const Anchor> anchors, std::size_t r) {
  std::vector<Anchor> sorted(anchors.begin(), anchors.end());
  for (const auto& a : sorted) {
    if (a.sentence_index >= doc.sentences.size() ||
        a.token_index >= doc.sentences[a.sentence_index].size()) {
      throw ContractError("extract_phrases: anchor (" + std::to_string(a.sentence_index) + ", " +
                          std::to_string(a.token_index) + ") outside document " + doc.id);
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const Anchor& a, const Anchor& b) {
    if (a.sentence_index != b.sentence_index) return a.sentence_index < b.sentence_index;
    if (a.token_index != b.token_index) return a.token_index < b.token_index;
    return a.score > b.score;
  });

  std::vector<ExtractedPhrase> out;
  for (const auto& a : sorted) {
    const std::size_t last = doc.sentences[a.sentence_index].size() - 1;
    const std::size_t begin = a.token_index > r ? a.token_index - r : 0;
    const std::size_t end = std::min(last, a.token_index + r);
    if (!out.empty() && out.back().sentence_index == a.sentence_index &&
        begin <= out.back().end + 1) {
      out.back().end = std::max(out.back().end, end);
      out.back().anchor_scores.push_back(a.score);
      continue;
    }
    ExtractedPhrase p;
    p.sentence_index = a.sentence_index;
    p.begin = begin;
    p.end = end;
    p.anchor_scores.push_back(a.score);
    out.push_back(std::move(p));
  }
  for (auto& p : out) {
    const auto& words = doc.sentences[p.sentence_index].tokens;
    p.tokens.tokens.assign(words.begin() + static_cast<std::ptrdiff_t>(p.begin),
                           words.begin() + static_cast<std::ptrdiff_t>(p.end) + 1);
  }
  return out;
}

template <class T>
Extraction extract_for_document(const ModelParams<T>& params, const EmbeddingTable& table,
                                const CaseDocument& doc, std::size_t t, std::size_t r) {
  const ScoredDocument<T> scored =
      score_document(params, doc, table, ScoringScope::kSentencesOnly);
  const auto anchors = select_anchors(scored.scores, t);
  return {anchors.size(), extract_phrases(doc, anchors, r)};
}

template Extraction extract_for_document<float>(const ModelParams<float>&, const EmbeddingTable&,
                                                const CaseDocument&, std::size_t, std::size_t);
template Extraction extract_for_document<double>(const ModelParams<double>&,
                                                 const EmbeddingTable&, const CaseDocument&,
                                                 std::size_t, std::size_t);

void write_phrases(std::ostream& out, std::span<const std::pair<std::string, std::string>> header,
                   std::span<const DocumentPhrases> docs) {
  for (const auto& [k, v] : header) out << "# " << k << '=' << v << '\n';
  char buf[40];
  for (const auto& d : docs) {
    out << "doc\t" << d.doc_id << "\tanchors=" << d.anchor_count << '\n';
    for (const auto& p : d.phrases) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.max_anchor_score());
      out << p.sentence_index << '\t' << p.begin << '\t' << p.end << '\t' << buf << '\t'
          << p.tokens.joined() << '\n';
    }
  }
}

PhrasesFile read_phrases(std::istream& in) {
  PhrasesFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw FormatError("phrases line " + std::to_string(line_no) + ": header without '='");
      }
      file.header.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields[0] == "doc") {
      if (fields.size() != 3 || fields[2].rfind("anchors=", 0) != 0) {
        throw FormatError("phrases line " + std::to_string(line_no) + ": bad document line");
      }
      DocumentPhrases d;
      d.doc_id = fields[1];
      d.anchor_count = parse_number<std::size_t>(fields[2].substr(8), line_no);
      file.docs.push_back(std::move(d));
      continue;
    }
    if (file.docs.empty()) {
      throw FormatError("phrases line " + std::to_string(line_no) + ": phrase before any doc line");
    }
    if (fields.size() != 5) {
      throw FormatError("phrases line " + std::to_string(line_no) + ": expected 5 fields, got " +
                        std::to_string(fields.size()));
    }
    ExtractedPhrase p;
    p.sentence_index = parse_number<std::size_t>(fields[0], line_no);
    p.begin = parse_number<std::size_t>(fields[1], line_no);
    p.end = parse_number<std::size_t>(fields[2], line_no);
    p.anchor_scores.push_back(parse_number<double>(fields[3], line_no));
    std::istringstream words(fields[4]);
    for (std::string w; words >> w;) p.tokens.tokens.push_back(w);
    if (p.end < p.begin || p.tokens.size() != p.end - p.begin + 1) {
      throw FormatError("phrases line " + std::to_string(line_no) +
                        ": span does not match token count");
    }
    file.docs.back().phrases.push_back(std::move(p));
  }
  return file;
}

}  // namespace catchphrase

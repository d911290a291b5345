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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace catchphrase {

inline constexpr int kFirstCorpusYear = 2006;
inline constexpr int kLastCorpusYear = 2009;

// An ordered, non-empty run of tokens (one sentence or one catchphrase).
struct TokenSeq {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens[i]; }

  // Tokens joined with single spaces.
  std::string joined() const;

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

struct CaseDocument {
  std::string id;  // file stem, e.g. "06_1"
  int year = 0;
  std::vector<TokenSeq> sentences;
  std::vector<TokenSeq> catchphrases;

  std::size_t sentence_token_count() const;
  std::size_t catchword_count() const;
  bool has_catchphrases() const { return !catchphrases.empty(); }

  friend bool operator==(const CaseDocument&, const CaseDocument&) = default;
};

struct CorpusSplit {
  std::vector<CaseDocument> train;
  std::vector<CaseDocument> test;
  int test_year = 0;
};

// Counts of elements dropped while parsing.
struct ParseDiagnostics {
  std::size_t empty_catchphrases = 0;
  std::size_t duplicate_catchphrases = 0;
  std::size_t empty_sentences = 0;
  std::size_t citation_elements = 0;

  ParseDiagnostics& operator+=(const ParseDiagnostics& other);
};

// Whitespace split, then leading and trailing ASCII punctuation peeled off
// into one-character tokens. Tokens made only of punctuation stay whole.
// A trailing closing bracket is kept when it closes a bracket opened inside
// the same token, so "477(2B)" survives intact.
TokenSeq tokenize(std::string_view text);

// "06_1" -> 2006. Throws StructuralError when the prefix is missing or the
// year lies outside 2006..2009.
int year_from_id(std::string_view id);

// Parses one case file of the Legal Case Reports archive. The archive's
// files are not strictly XML (attributes such as `"id=c0"`), so this is a
// tolerant tag scanner: it requires balanced element structure but accepts
// arbitrary attribute text. Citation elements are dropped, nested markup is
// stripped, entities are decoded.
//
// Throws ParseError (with the source name and byte offset) on malformed
// markup and StructuralError when no sentence survives.
CaseDocument parse_case_document(std::string_view xml_text, std::string_view id,
                                 std::string_view source_name = {},
                                 ParseDiagnostics* diagnostics = nullptr);

// Reads every *.xml file in `dir`, sorted by id.
std::vector<CaseDocument> load_corpus_dir(const std::filesystem::path& dir,
                                          ParseDiagnostics* diagnostics = nullptr);

// Partitions by year; each side sorted by id. Throws ConfigError when
// test_year is out of range or the train side comes out empty.
CorpusSplit split_by_year(std::vector<CaseDocument> corpus, int test_year);

// One document per line: id, year, sentences and catchphrases as
// tab-separated sections; within a section, units are separated by " | ".
void write_corpus_dump(std::ostream& out,
                       const std::vector<CaseDocument>& corpus);

}  // namespace catchphrase

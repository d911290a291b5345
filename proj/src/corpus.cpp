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

#include "catchphrase/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "catchphrase/errors.hpp"

namespace catchphrase {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 0x21 && u <= 0x2f) || (u >= 0x3a && u <= 0x40) ||
         (u >= 0x5b && u <= 0x60) || (u >= 0x7b && u <= 0x7e);
}

char opening_for(char closing) {
  switch (closing) {
    case ')': return '(';
    case ']': return '[';
    case '}': return '{';
    default: return '\0';
  }
}

// True when `core` (which ends in a closing bracket) opens that bracket
// somewhere before its last character without closing it again.
bool closes_inner_bracket(std::string_view core) {
  const char closing = core.back();
  const char opening = opening_for(closing);
  if (opening == '\0') return false;
  const std::string_view body = core.substr(0, core.size() - 1);
  const auto opens = std::count(body.begin(), body.end(), opening);
  const auto closes = std::count(body.begin(), body.end(), closing);
  return opens > closes;
}

void split_word(std::string_view word, std::vector<std::string>& out) {
  if (std::all_of(word.begin(), word.end(), is_punct)) {
    out.emplace_back(word);
    return;
  }
  std::size_t begin = 0;
  while (is_punct(word[begin])) {
    out.emplace_back(1, word[begin]);
    ++begin;
  }
  std::size_t end = word.size();
  std::vector<std::string> trailing;
  while (end > begin && is_punct(word[end - 1])) {
    if (closes_inner_bracket(word.substr(begin, end - begin))) break;
    trailing.emplace_back(1, word[end - 1]);
    --end;
  }
  out.emplace_back(word.substr(begin, end - begin));
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xc0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xe0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else {
    out += static_cast<char>(0xf0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  }
}

// Unknown or malformed entities are kept literally; the archive contains
// bare ampersands.
std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    const std::size_t semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += text[i++];
      continue;
    }
    const std::string_view name = text.substr(i + 1, semi - i - 1);
    std::optional<std::uint32_t> cp;
    if (name == "amp") cp = '&';
    else if (name == "lt") cp = '<';
    else if (name == "gt") cp = '>';
    else if (name == "quot") cp = '"';
    else if (name == "apos") cp = '\'';
    else if (name == "nbsp") cp = ' ';
    else if (name.size() > 1 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      std::uint32_t value = 0;
      const auto [ptr, ec] = std::from_chars(
          digits.data(), digits.data() + digits.size(), value, hex ? 16 : 10);
      if (ec == std::errc() && ptr == digits.data() + digits.size() &&
          !digits.empty() && value <= 0x10ffff) {
        cp = value;
      }
    }
    if (cp) {
      append_utf8(out, *cp);
      i = semi + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

std::string lowercase_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

struct Event {
  enum class Kind { kText, kOpen, kClose, kEmpty } kind;
  std::size_t offset;
  std::string name;       // lowercase tag name
  std::string_view text;  // raw text for kText
};

class TagScanner {
 public:
  TagScanner(std::string_view text, std::string_view source)
      : text_(text), source_(source) {}

  std::optional<Event> next() {
    while (pos_ < text_.size()) {
      if (text_[pos_] != '<') {
        const std::size_t lt = text_.find('<', pos_);
        const std::size_t end = lt == std::string_view::npos ? text_.size() : lt;
        Event ev{Event::Kind::kText, pos_, {}, text_.substr(pos_, end - pos_)};
        pos_ = end;
        return ev;
      }
      const std::size_t start = pos_;
      const std::string_view rest = text_.substr(pos_);
      if (rest.starts_with("<!--")) {
        pos_ = skip_past(start, "-->", "unterminated comment");
        continue;
      }
      if (rest.starts_with("<![CDATA[")) {
        const std::size_t close = text_.find("]]>", start);
        if (close == std::string_view::npos) fail(start, "unterminated CDATA section");
        pos_ = close + 3;
        return Event{Event::Kind::kText, start, {},
                     text_.substr(start + 9, close - start - 9)};
      }
      if (rest.starts_with("<?")) {
        pos_ = skip_past(start, "?>", "unterminated processing instruction");
        continue;
      }
      if (rest.starts_with("<!")) {
        pos_ = skip_past(start, ">", "unterminated declaration");
        continue;
      }
      const std::size_t gt = text_.find('>', start);
      const std::size_t next_lt = text_.find('<', start + 1);
      if (gt == std::string_view::npos || (next_lt != std::string_view::npos && next_lt < gt)) {
        fail(start, "unterminated tag");
      }
      pos_ = gt + 1;
      std::string_view body = text_.substr(start + 1, gt - start - 1);
      Event ev{Event::Kind::kOpen, start, {}, {}};
      if (!body.empty() && body.front() == '/') {
        ev.kind = Event::Kind::kClose;
        body.remove_prefix(1);
      } else if (!body.empty() && body.back() == '/') {
        ev.kind = Event::Kind::kEmpty;
        body.remove_suffix(1);
      }
      std::size_t name_end = 0;
      while (name_end < body.size() && !is_space(body[name_end])) ++name_end;
      if (name_end == 0) fail(start, "tag without a name");
      ev.name = lowercase_ascii(body.substr(0, name_end));
      return ev;
    }
    return std::nullopt;
  }

  [[noreturn]] void fail(std::size_t offset, std::string_view what) const {
    std::ostringstream msg;
    msg << source_ << ": malformed XML at byte " << offset << ": " << what;
    throw ParseError(msg.str());
  }

 private:
  std::size_t skip_past(std::size_t start, std::string_view terminator,
                        std::string_view what) {
    const std::size_t at = text_.find(terminator, start);
    if (at == std::string_view::npos) fail(start, what);
    return at + terminator.size();
  }

  std::string_view text_;
  std::string_view source_;
  std::size_t pos_ = 0;
};

bool is_citation_element(std::string_view name) {
  return name.starts_with("cit");
}

}  // namespace

std::string TokenSeq::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::size_t CaseDocument::sentence_token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

std::size_t CaseDocument::catchword_count() const {
  std::size_t n = 0;
  for (const auto& c : catchphrases) n += c.size();
  return n;
}

ParseDiagnostics& ParseDiagnostics::operator+=(const ParseDiagnostics& other) {
  empty_catchphrases += other.empty_catchphrases;
  duplicate_catchphrases += other.duplicate_catchphrases;
  empty_sentences += other.empty_sentences;
  citation_elements += other.citation_elements;
  return *this;
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq seq;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) split_word(text.substr(i, j - i), seq.tokens);
    i = j;
  }
  return seq;
}

int year_from_id(std::string_view id) {
  const std::size_t underscore = id.find('_');
  const std::string_view prefix = id.substr(0, underscore);
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(prefix.data(), prefix.data() + prefix.size(), value);
  if (underscore == std::string_view::npos || prefix.empty() ||
      ec != std::errc() || ptr != prefix.data() + prefix.size() ||
      (prefix.size() != 2 && prefix.size() != 4)) {
    throw StructuralError("document id '" + std::string(id) +
                          "' lacks a year prefix like 06_");
  }
  const int year = prefix.size() == 2 ? 2000 + value : value;
  if (year < kFirstCorpusYear || year > kLastCorpusYear) {
    throw StructuralError("document id '" + std::string(id) + "' has year " +
                          std::to_string(year) + " outside 2006..2009");
  }
  return year;
}

CaseDocument parse_case_document(std::string_view xml_text, std::string_view id,
                                 std::string_view source_name,
                                 ParseDiagnostics* diagnostics) {
  const std::string source =
      source_name.empty() ? std::string(id) : std::string(source_name);
  ParseDiagnostics local;
  CaseDocument doc;
  doc.id = std::string(id);
  doc.year = year_from_id(id);

  enum class Unit { kNone, kCatchphrase, kSentence };
  TagScanner scanner(xml_text, source);
  std::vector<std::pair<std::string, std::size_t>> open;
  bool saw_case = false;
  bool in_catchphrases = false;
  bool in_sentences = false;
  bool saw_sentences = false;
  Unit unit = Unit::kNone;
  std::size_t unit_depth = 0;
  std::size_t citation_depth = 0;
  std::string unit_text;

  auto finish_unit = [&] {
    TokenSeq seq = tokenize(decode_entities(unit_text));
    if (unit == Unit::kSentence) {
      if (seq.empty()) {
        ++local.empty_sentences;
      } else {
        doc.sentences.push_back(std::move(seq));
      }
    } else if (seq.empty()) {
      ++local.empty_catchphrases;
    } else if (std::find(doc.catchphrases.begin(), doc.catchphrases.end(),
                         seq) != doc.catchphrases.end()) {
      ++local.duplicate_catchphrases;
    } else {
      doc.catchphrases.push_back(std::move(seq));
    }
    unit = Unit::kNone;
    unit_text.clear();
  };

  while (auto ev = scanner.next()) {
    switch (ev->kind) {
      case Event::Kind::kText:
        if (unit != Unit::kNone && citation_depth == 0) unit_text += ev->text;
        break;
      case Event::Kind::kEmpty:
        if (is_citation_element(ev->name)) {
          ++local.citation_elements;
        } else if (unit != Unit::kNone) {
          unit_text += ' ';
        } else if (in_sentences && ev->name == "sentence") {
          ++local.empty_sentences;
        } else if (in_catchphrases && ev->name == "catchphrase") {
          ++local.empty_catchphrases;
        }
        break;
      case Event::Kind::kOpen:
        open.emplace_back(ev->name, ev->offset);
        if (ev->name == "case") saw_case = true;
        if (is_citation_element(ev->name)) {
          if (citation_depth == 0) ++local.citation_elements;
          ++citation_depth;
        } else if (unit != Unit::kNone) {
          unit_text += ' ';
        } else if (citation_depth > 0) {
          // inside a dropped citation block
        } else if (ev->name == "catchphrases") {
          in_catchphrases = true;
        } else if (ev->name == "sentences") {
          in_sentences = true;
          saw_sentences = true;
        } else if (in_catchphrases && ev->name == "catchphrase") {
          unit = Unit::kCatchphrase;
          unit_depth = open.size();
        } else if (in_sentences && ev->name == "sentence") {
          unit = Unit::kSentence;
          unit_depth = open.size();
        }
        break;
      case Event::Kind::kClose: {
        if (open.empty() || open.back().first != ev->name) {
          scanner.fail(ev->offset,
                       open.empty()
                           ? "closing </" + ev->name + "> without an open element"
                           : "closing </" + ev->name + "> does not match <" +
                                 open.back().first + "> opened at byte " +
                                 std::to_string(open.back().second));
        }
        if (unit != Unit::kNone && open.size() == unit_depth) {
          finish_unit();
        } else if (unit != Unit::kNone && citation_depth == 0) {
          unit_text += ' ';
        }
        open.pop_back();
        if (is_citation_element(ev->name)) {
          --citation_depth;
        } else if (citation_depth == 0) {
          if (ev->name == "catchphrases") in_catchphrases = false;
          if (ev->name == "sentences") in_sentences = false;
        }
        break;
      }
    }
  }
  if (!open.empty()) {
    scanner.fail(open.back().second, "element <" + open.back().first +
                                         "> is never closed");
  }
  if (!saw_case) scanner.fail(0, "no <case> element");
  if (!saw_sentences || doc.sentences.empty()) {
    throw StructuralError(source + ": document has no sentences");
  }
  if (diagnostics != nullptr) *diagnostics += local;
  return doc;
}

std::vector<CaseDocument> load_corpus_dir(const std::filesystem::path& dir,
                                          ParseDiagnostics* diagnostics) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("corpus directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<CaseDocument> corpus;
  corpus.reserve(files.size());
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream bytes;
    bytes << in.rdbuf();
    corpus.push_back(parse_case_document(bytes.str(), path.stem().string(),
                                         path.filename().string(), diagnostics));
  }
  std::sort(corpus.begin(), corpus.end(),
            [](const CaseDocument& a, const CaseDocument& b) { return a.id < b.id; });
  return corpus;
}

CorpusSplit split_by_year(std::vector<CaseDocument> corpus, int test_year) {
  if (test_year < kFirstCorpusYear || test_year > kLastCorpusYear) {
    throw ConfigError("test_year " + std::to_string(test_year) +
                      " outside 2006..2009");
  }
  CorpusSplit split;
  split.test_year = test_year;
  for (auto& doc : corpus) {
    (doc.year == test_year ? split.test : split.train).push_back(std::move(doc));
  }
  if (split.train.empty()) {
    throw ConfigError("test_year " + std::to_string(test_year) +
                      " leaves no training documents");
  }
  const auto by_id = [](const CaseDocument& a, const CaseDocument& b) {
    return a.id < b.id;
  };
  std::sort(split.train.begin(), split.train.end(), by_id);
  std::sort(split.test.begin(), split.test.end(), by_id);
  return split;
}

void write_corpus_dump(std::ostream& out,
                       const std::vector<CaseDocument>& corpus) {
  auto section = [&out](const std::vector<TokenSeq>& units) {
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (i > 0) out << " | ";
      out << units[i].joined();
    }
  };
  for (const auto& doc : corpus) {
    out << doc.id << '\t' << doc.year << '\t';
    section(doc.sentences);
    out << '\t';
    section(doc.catchphrases);
    out << '\n';
  }
}

}  // namespace catchphrase

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

#include "synthetic_corpus.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "catchphrase/errors.hpp"
#include "catchphrase/random.hpp"

namespace catchphrase::synthetic {
namespace {

const char* const kStopwords[] = {"the",  "of",   "and",   "to",    "in",     "a",
                                  "that", "is",   "for",   "was",   "by",     "on",
                                  "be",   "with", "as",    "not",   "which",  "it",
                                  "court", "applicant", "respondent", "his", "her", "their",
                                  "at",   "from", "this",  "an",    "or",     "were"};
const char* const kPunctuation[] = {".", ",", ";", "(", ")", "-"};

std::string make_word(RandomStream& rng, std::set<std::string>& used) {
  static const char* const onsets[] = {"b", "c", "d", "f", "g", "l", "m", "n", "p",
                                       "r", "s", "t", "v", "pr", "tr", "st", "gr", "cl"};
  static const char* const vowels[] = {"a", "e", "i", "o", "u", "ea", "io", "ou"};
  static const char* const codas[] = {"", "n", "r", "s", "t", "nt", "st", "l"};
  while (true) {
    std::string w;
    const std::size_t syllables = 2 + rng.below(2);
    for (std::size_t i = 0; i < syllables; ++i) {
      w += onsets[rng.below(std::size(onsets))];
      w += vowels[rng.below(std::size(vowels))];
    }
    w += codas[rng.below(std::size(codas))];
    if (used.insert(w).second) return w;
  }
}

std::vector<double> unit_noise(RandomStream& rng, std::size_t dim) {
  std::vector<double> v(dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (auto& x : v) x = rng.normal() * scale;
  return v;
}

std::string number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), static_cast<float>(v));
  (void)ec;
  return std::string(buf, ptr);
}

std::string capitalised(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

SyntheticCorpus make_synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.test_year < 2006 || spec.test_year > 2009) {
    throw ConfigError("synthetic test year must lie in 2006..2009");
  }
  if (spec.topics == 0 || spec.words_per_topic < 4 || spec.dim == 0 ||
      spec.min_sentences == 0 || spec.max_sentences < spec.min_sentences) {
    throw ConfigError("synthetic corpus spec is degenerate");
  }
  RandomStream words_rng(spec.seed, "synthetic-words");
  RandomStream vec_rng(spec.seed, "synthetic-vectors");

  std::set<std::string> used(std::begin(kStopwords), std::end(kStopwords));
  std::vector<std::vector<std::string>> topic_words(spec.topics);
  for (auto& list : topic_words) {
    for (std::size_t i = 0; i < spec.words_per_topic; ++i) list.push_back(make_word(words_rng, used));
  }
  std::vector<std::string> filler(std::begin(kStopwords), std::end(kStopwords));
  for (std::size_t i = 0; i < spec.filler_words; ++i) filler.push_back(make_word(words_rng, used));

  const auto content_dir = unit_noise(vec_rng, spec.dim);
  const auto filler_dir = unit_noise(vec_rng, spec.dim);
  std::ostringstream emb;
  auto emit = [&](const std::string& word, const std::vector<const std::vector<double>*>& parts,
                  double noise, double scale) {
    const auto n = unit_noise(vec_rng, spec.dim);
    emb << word;
    for (std::size_t i = 0; i < spec.dim; ++i) {
      double v = noise * n[i];
      for (const auto* p : parts) v += (*p)[i];
      emb << ' ' << number(scale * v);
    }
    emb << '\n';
  };
  for (std::size_t t = 0; t < spec.topics; ++t) {
    const auto topic_dir = unit_noise(vec_rng, spec.dim);
    for (const auto& w : topic_words[t]) emit(w, {&content_dir, &topic_dir}, 0.5, spec.topic_scale);
  }
  for (const auto& w : filler) emit(w, {&filler_dir}, 0.7, spec.filler_scale);
  for (const char* p : kPunctuation) {
    if (std::string(p) != "-") emit(p, {&filler_dir}, 0.7, spec.filler_scale);
  }
  emit("-", {&filler_dir}, 0.7, spec.filler_scale);

  SyntheticCorpus corpus;
  corpus.embeddings = emb.str();

  const std::size_t total = spec.train_docs + spec.test_docs;
  std::size_t per_year[4] = {};
  std::vector<int> train_years;
  for (int y = 2006; y <= 2009; ++y) {
    if (y != spec.test_year) train_years.push_back(y);
  }
  for (std::size_t d = 0; d < total; ++d) {
    RandomStream rng(spec.seed, "synthetic-doc", d);
    const bool is_test = d >= spec.train_docs;
    const int year = is_test ? spec.test_year : train_years[d % train_years.size()];
    const std::size_t serial = ++per_year[year - 2006];
    char prefix[8];
    std::snprintf(prefix, sizeof(prefix), "%02d", year % 100);
    const std::string id = std::string(prefix) + "_" + std::to_string(serial);

    const std::size_t topic_index = rng.below(spec.topics);
    const auto& topic = topic_words[topic_index];
    std::vector<std::vector<std::string>> catchphrases;
    for (std::size_t c = 0; c < spec.catchphrases_per_doc; ++c) {
      std::vector<std::string> phrase;
      const std::size_t len = 2 + rng.below(3);
      for (std::size_t i = 0; i < len; ++i) {
        if (i > 0 && rng.uniform() < 0.3) phrase.push_back(rng.uniform() < 0.5 ? "of" : "-");
        phrase.push_back(topic[rng.below(topic.size())]);
      }
      catchphrases.push_back(std::move(phrase));
    }

    std::ostringstream xml;
    xml << "<?xml version=\"1.0\"?>\n<case>\n<name>Synthetic v Party " << id << " [" << year
        << "] FCA " << serial << "</name>\n<AustLII>http://www.austlii.edu.au/au/cases/cth/FCA/"
        << year << '/' << serial << ".html</AustLII>\n<catchphrases>\n";
    for (std::size_t c = 0; c < catchphrases.size(); ++c) {
      xml << "<catchphrase \"id=c" << c << "\">" << join(catchphrases[c]) << "</catchphrase>\n";
    }
    xml << "</catchphrases>\n<sentences>\n";
    const std::size_t n_sent =
        spec.min_sentences + rng.below(spec.max_sentences - spec.min_sentences + 1);
    for (std::size_t s = 0; s < n_sent; ++s) {
      std::vector<std::string> words;
      const std::size_t len = 10 + rng.below(12);
      for (std::size_t i = 0; i < len; ++i) {
        words.push_back(filler[rng.below(filler.size())]);
        if (i + 1 < len && rng.uniform() < 0.08) words.push_back(",");
      }
      if (spec.topics > 1 && rng.uniform() < spec.foreign_mention_rate) {
        const std::size_t other = (topic_index + 1 + rng.below(spec.topics - 1)) % spec.topics;
        const std::size_t at = rng.below(words.size() + 1);
        std::vector<std::string> mention;
        for (std::size_t i = 0, n = 1 + rng.below(3); i < n; ++i) {
          mention.push_back(topic_words[other][rng.below(topic_words[other].size())]);
        }
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(at), mention.begin(),
                     mention.end());
      }
      if (rng.uniform() < spec.own_mention_rate) {
        std::vector<std::string> snippet;
        if (rng.uniform() < 0.7) {
          snippet = catchphrases[rng.below(catchphrases.size())];
        } else {
          for (std::size_t i = 0, n = 2 + rng.below(2); i < n; ++i) {
            snippet.push_back(topic[rng.below(topic.size())]);
          }
        }
        const std::size_t at = rng.below(words.size() + 1);
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(at), snippet.begin(),
                     snippet.end());
      }
      words.front() = capitalised(words.front());
      xml << "<sentence \"id=s" << s << "\">" << join(words) << " .</sentence>\n";
    }
    xml << "</sentences>\n</case>\n";
    corpus.files.emplace_back(id + ".xml", xml.str());
  }
  return corpus;
}

void write_synthetic_corpus(const SyntheticCorpus& corpus,
                            const std::filesystem::path& corpus_dir,
                            const std::filesystem::path& embeddings_path) {
  std::filesystem::create_directories(corpus_dir);
  for (const auto& [name, text] : corpus.files) {
    std::ofstream out(corpus_dir / name, std::ios::binary | std::ios::trunc);
    if (!(out << text)) throw IoError("cannot write " + (corpus_dir / name).string());
  }
  if (embeddings_path.has_parent_path()) {
    std::filesystem::create_directories(embeddings_path.parent_path());
  }
  std::ofstream out(embeddings_path, std::ios::binary | std::ios::trunc);
  if (!(out << corpus.embeddings)) throw IoError("cannot write " + embeddings_path.string());
}

}  // namespace catchphrase::synthetic

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

#include "catchphrase/embeddings.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "catchphrase/errors.hpp"

namespace catchphrase {
namespace {

constexpr std::array<char, 8> kCacheMagic = {'C', 'P', 'E', 'M', 'B', 'E', 'D', '\0'};
constexpr std::uint32_t kCacheVersion = 1;

std::string lowercase_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <class T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw FormatError("embedding cache truncated");
  }
  return value;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim), oov_(dim, 0.0f) {
  if (dim == 0) throw FormatError("embedding dimension must be positive");
}

EmbeddingTable::EmbeddingTable(std::size_t dim, std::vector<std::string> tokens,
                               std::vector<float> matrix)
    : EmbeddingTable(dim) {
  if (matrix.size() != tokens.size() * dim) {
    throw FormatError("embedding matrix has " + std::to_string(matrix.size()) +
                      " values, expected " + std::to_string(tokens.size() * dim));
  }
  for (float v : matrix) {
    if (!std::isfinite(v)) throw FormatError("embedding component is not finite");
  }
  vocab_.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!vocab_.emplace(tokens[i], i).second) {
      throw FormatError("duplicate embedding token '" + tokens[i] + "'");
    }
  }
  tokens_ = std::move(tokens);
  matrix_ = std::move(matrix);
}

const float* EmbeddingTable::find(std::string_view token) const {
  const auto it = vocab_.find(std::string(token));
  return it == vocab_.end() ? nullptr : matrix_.data() + it->second * dim_;
}

bool EmbeddingTable::contains(std::string_view token) const {
  return find(token) != nullptr;
}

std::span<const float> EmbeddingTable::lookup(std::string_view token) const {
  if (const float* hit = find(token)) return {hit, dim_};
  if (const float* hit = find(lowercase_ascii(token))) return {hit, dim_};
  return oov_;
}

EmbeddingTable load_embeddings(std::istream& in, std::size_t expected_dim,
                               const std::unordered_set<std::string>* restrict_vocab) {
  if (expected_dim == 0) throw FormatError("expected_dim must be positive");
  std::vector<std::string> tokens;
  std::vector<float> matrix;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_spaces(line);
    if (fields.size() < expected_dim + 1) {
      throw FormatError("embedding line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size() == 0 ? 0 : fields.size() - 1) +
                        " components, expected " + std::to_string(expected_dim));
    }
    const std::size_t first_value = fields.size() - expected_dim;
    std::string token(fields[0]);
    for (std::size_t i = 1; i < first_value; ++i) {
      token += ' ';
      token += fields[i];
    }
    if (restrict_vocab != nullptr && !restrict_vocab->contains(token)) continue;
    if (!seen.insert(token).second) continue;
    for (std::size_t i = first_value; i < fields.size(); ++i) {
      const std::string_view field = fields[i];
      float value = 0.0f;
      const auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size() ||
          !std::isfinite(value)) {
        throw FormatError("embedding line " + std::to_string(line_no) +
                          ": non-numeric component '" + std::string(field) + "'");
      }
      matrix.push_back(value);
    }
    tokens.push_back(std::move(token));
  }
  return EmbeddingTable(expected_dim, std::move(tokens), std::move(matrix));
}

void save_embedding_cache(const EmbeddingTable& table, std::ostream& out) {
  out.write(kCacheMagic.data(), kCacheMagic.size());
  write_pod(out, kCacheVersion);
  write_pod(out, static_cast<std::uint64_t>(table.dim()));
  write_pod(out, static_cast<std::uint64_t>(table.size()));
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string& token = table.tokens()[i];
    write_pod(out, static_cast<std::uint32_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
    const auto row = table.row(i);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw IoError("failed writing embedding cache");
}

bool is_embedding_cache(std::istream& in) {
  std::array<char, 8> magic{};
  const auto start = in.tellg();
  in.read(magic.data(), magic.size());
  const bool match = in.gcount() == static_cast<std::streamsize>(magic.size()) &&
                     magic == kCacheMagic;
  in.clear();
  in.seekg(start);
  return match;
}

EmbeddingTable load_embedding_cache(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kCacheMagic) throw FormatError("not an embedding cache file");
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kCacheVersion) {
    throw FormatError("embedding cache version " + std::to_string(version) +
                      " unsupported");
  }
  const auto dim = read_pod<std::uint64_t>(in);
  const auto count = read_pod<std::uint64_t>(in);
  std::vector<std::string> tokens;
  std::vector<float> matrix;
  tokens.reserve(count);
  matrix.resize(count * dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto length = read_pod<std::uint32_t>(in);
    std::string token(length, '\0');
    if (!in.read(token.data(), length)) throw FormatError("embedding cache truncated");
    if (!in.read(reinterpret_cast<char*>(matrix.data() + i * dim),
                 static_cast<std::streamsize>(dim * sizeof(float)))) {
      throw FormatError("embedding cache truncated");
    }
    tokens.push_back(std::move(token));
  }
  return EmbeddingTable(dim, std::move(tokens), std::move(matrix));
}

}  // namespace catchphrase

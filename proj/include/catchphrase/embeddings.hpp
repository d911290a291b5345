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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace catchphrase {

// Frozen token -> d-vector map. Immutable once constructed.
//
// lookup() tries the exact token, then its ASCII-lowercased form, and
// otherwise returns the all-zero OOV vector; it never fails.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  // `matrix` is row-major, tokens.size() x dim. Throws FormatError on a
  // shape mismatch, a duplicate token, or a non-finite component.
  EmbeddingTable(std::size_t dim, std::vector<std::string> tokens,
                 std::vector<float> matrix);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool contains(std::string_view token) const;

  std::span<const float> lookup(std::string_view token) const;
  std::span<const float> oov_vector() const { return oov_; }

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::span<const float> row(std::size_t index) const {
    return {matrix_.data() + index * dim_, dim_};
  }

 private:
  const float* find(std::string_view token) const;

  std::size_t dim_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> vocab_;
  std::vector<float> matrix_;
  std::vector<float> oov_;
};

// Text format, one `token v1 ... v_d` per line, space separated. Lines
// carrying more than d+1 fields keep the last d as the vector and rejoin the
// rest as the token (a few GloVe 840B tokens contain spaces). Later
// duplicates of a token are ignored.
//
// Throws FormatError naming the 1-based line on too few fields or a
// non-numeric component.
EmbeddingTable load_embeddings(
    std::istream& in, std::size_t expected_dim,
    const std::unordered_set<std::string>* restrict_vocab = nullptr);

// Binary cache: magic "CPEMBED\0", u32 version, u64 dim, u64 vocab size,
// then per entry a u32 token length, the token bytes and dim f32 values.
// Little-endian host layout.
void save_embedding_cache(const EmbeddingTable& table, std::ostream& out);
EmbeddingTable load_embedding_cache(std::istream& in);

// True when the stream starts with the cache magic; does not consume input.
bool is_embedding_cache(std::istream& in);

}  // namespace catchphrase

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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "catchphrase/embeddings.hpp"
#include "catchphrase/errors.hpp"

using namespace catchphrase;

TEST_CASE("text embeddings load with lowercase fallback and zero OOV") {
  std::istringstream in(
      "the 0.1 0.2 0.3\n"
      "Court 1 2 3\n"
      "court 4 5 6\n"
      "the 9 9 9\n"
      "New York 7 8 9\n");
  const EmbeddingTable t = load_embeddings(in, 3);
  CHECK(t.size() == 4);
  CHECK(t.lookup("the")[0] == doctest::Approx(0.1f));
  CHECK(t.lookup("Court")[0] == 1.0f);
  CHECK(t.lookup("court")[0] == 4.0f);
  CHECK(t.lookup("THE")[2] == doctest::Approx(0.3f));
  CHECK(t.lookup("New York")[1] == 8.0f);
  const auto oov = t.lookup("absent");
  REQUIRE(oov.size() == 3);
  for (float v : oov) CHECK(v == 0.0f);
  CHECK(t.contains("court"));
  CHECK_FALSE(t.contains("absent"));
}

TEST_CASE("vocabulary restriction keeps only requested tokens") {
  std::istringstream in("a 1 1\nb 2 2\nc 3 3\n");
  const std::unordered_set<std::string> keep = {"b", "z"};
  const auto t = load_embeddings(in, 2, &keep);
  CHECK(t.size() == 1);
  CHECK(t.contains("b"));
}

TEST_CASE("malformed lines name their line number") {
  std::istringstream short_line("a 1 2\nb 1\n");
  try {
    load_embeddings(short_line, 2);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream bad_number("a 1 x\n");
  CHECK_THROWS_AS(load_embeddings(bad_number, 2), FormatError);
  CHECK_THROWS_AS(EmbeddingTable(2, {"a"}, {1.0f}), FormatError);
  CHECK_THROWS_AS(EmbeddingTable(1, {"a", "a"}, {1.0f, 2.0f}), FormatError);
  CHECK_THROWS_AS(EmbeddingTable(1, {"a"}, {std::nanf("")}), FormatError);
}

TEST_CASE("binary cache round-trips") {
  std::istringstream in("x 0.5 -1\ny 2 3.25\n");
  const auto t = load_embeddings(in, 2);
  std::stringstream cache;
  save_embedding_cache(t, cache);
  CHECK(is_embedding_cache(cache));
  const auto back = load_embedding_cache(cache);
  CHECK(back.dim() == 2);
  CHECK(back.tokens() == t.tokens());
  CHECK(back.lookup("y")[1] == 3.25f);
  std::istringstream text("x 1 2\n");
  CHECK_FALSE(is_embedding_cache(text));
  std::istringstream junk("CPEMBED");
  CHECK_THROWS(load_embedding_cache(junk));
}

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

#include <sstream>

#include "catchphrase/errors.hpp"
#include "catchphrase/random.hpp"
#include "catchphrase/rouge.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace catchphrase;
using fixtures::seq;

namespace {

void check_equal(const RougeScore& got, const oracle::PRF& want) {
  CHECK(got.precision == doctest::Approx(want.p).epsilon(1e-12));
  CHECK(got.recall == doctest::Approx(want.r).epsilon(1e-12));
  CHECK(got.f_measure == doctest::Approx(want.f).epsilon(1e-12));
}

}  // namespace

TEST_CASE("ROUGE-1 hand-counted cases") {
  const auto s = rouge_1(seq({"a", "b", "c"}), seq({"a", "d"}));
  CHECK(s.recall == doctest::Approx(0.5));
  CHECK(s.precision == doctest::Approx(1.0 / 3));
  CHECK(s.f_measure == doctest::Approx(0.4));
  const auto same = rouge_1(seq({"x", "y"}), seq({"X", "y"}));
  CHECK(same.f_measure == 1.0);
  const auto none = rouge_1(seq({"p"}), seq({"q"}));
  CHECK(none.f_measure == 0.0);
  CHECK(rouge_1(seq({}), seq({"q"})).recall == 0.0);
  // Clipping: three copies of "a" against one.
  CHECK(rouge_1(seq({"a", "a", "a"}), seq({"a"})).precision == doctest::Approx(1.0 / 3));
}

TEST_CASE("ROUGE-SU unit enumeration") {
  const auto s = rouge_su(seq({"a", "b"}), seq({"b", "a"}));
  CHECK(s.precision == doctest::Approx(2.0 / 3));
  CHECK(s.recall == doctest::Approx(2.0 / 3));
  CHECK(rouge_su(seq({"a", "b", "c"}), seq({"a", "b", "c"})).f_measure == 1.0);
  CHECK_THROWS_AS(rouge_su(seq({"a"}), seq({"a"}), 0), ContractError);
  // With max_skip 1, "a x x b" has no (a, b) pair.
  const auto far = rouge_su(seq({"a", "b"}), seq({"a", "x", "x", "b"}), 1);
  // candidate units {<a>, <b>, (a,b)}; reference pairs skip at most one token.
  CHECK(far.precision == doctest::Approx(2.0 / 3));
}

TEST_CASE("ROUGE-W identical, disjoint and hand cases") {
  const auto id = rouge_w(seq({"a", "b", "c", "d"}), seq({"a", "b", "c", "d"}));
  CHECK(id.precision == doctest::Approx(1.0));
  CHECK(id.recall == doctest::Approx(1.0));
  CHECK(rouge_w(seq({"a"}), seq({"b"})).f_measure == 0.0);
  CHECK_THROWS_AS(rouge_w(seq({"a"}), seq({"a"}), 1.0), ContractError);
  // Known case where the greedy recurrence falls short of the best alignment.
  const double w = weighted_lcs({"0", "2"}, {"2", "1", "0", "2", "2"}, 1.2);
  CHECK(w == doctest::Approx(std::pow(2.0, 1.2)));
}

TEST_CASE("all three metrics equal exhaustive oracles on random short pairs") {
  RandomStream rng(11, "rouge-oracle");
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = oracle::random_tokens(rng, 9, 4);
    const auto r = oracle::random_tokens(rng, 9, 4);
    CAPTURE(c.joined());
    CAPTURE(r.joined());
    check_equal(rouge_1(c, r), oracle::rouge_1(c, r));
    check_equal(rouge_su(c, r), oracle::rouge_su(c, r));
    check_equal(rouge_w(c, r), oracle::rouge_w(c, r));
  }
}

TEST_CASE("precision of (c, r) equals recall of (r, c)") {
  RandomStream rng(12, "rouge-symmetry");
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = oracle::random_tokens(rng, 12, 5);
    const auto r = oracle::random_tokens(rng, 12, 5);
    CHECK(rouge_1(c, r).precision == rouge_1(r, c).recall);
    CHECK(rouge_su(c, r).precision == rouge_su(r, c).recall);
    CHECK(rouge_w(c, r).precision == rouge_w(r, c).recall);
    for (const auto& s : {rouge_1(c, r), rouge_su(c, r), rouge_w(c, r)}) {
      CHECK(s.precision >= 0.0);
      CHECK(s.precision <= 1.0 + 1e-12);
      CHECK(s.recall <= 1.0 + 1e-12);
      if (s.precision == 0.0 && s.recall == 0.0) CHECK(s.f_measure == 0.0);
    }
  }
}

TEST_CASE("adding a reference token missing from the candidate never lowers ROUGE-1 recall") {
  RandomStream rng(13, "rouge-monotone");
  for (int trial = 0; trial < 200; ++trial) {
    auto c = oracle::random_tokens(rng, 8, 5);
    const auto r = oracle::random_tokens(rng, 8, 5, false);
    const std::string extra = r[rng.below(r.size())];
    bool present = false;
    for (const auto& t : c.tokens) present |= oracle::lower(t) == oracle::lower(extra);
    if (present) continue;
    const double before = rouge_1(c, r).recall;
    c.tokens.push_back(extra);
    CHECK(rouge_1(c, r).recall >= before);
  }
}

TEST_CASE("evaluate_corpus averages per document and rejects id mismatches") {
  std::map<std::string, std::vector<TokenSeq>> gold = {
      {"06_1", {seq({"a", "b"}), seq({"c"})}},
      {"06_2", {seq({"x"})}},
  };
  const RougeReport perfect = evaluate_corpus(gold, gold);
  for (std::size_t m = 0; m < kRougeMetricCount; ++m) {
    CHECK(perfect.average[m].f_measure == doctest::Approx(1.0));
  }
  std::map<std::string, std::vector<TokenSeq>> half = gold;
  half["06_2"] = {seq({"y"})};
  const RougeReport r = evaluate_corpus(half, gold);
  CHECK(r.average[kRouge1].f_measure == doctest::Approx(0.5));
  CHECK(r.documents.size() == 2);

  std::map<std::string, std::vector<TokenSeq>> single = {{"06_1", gold["06_1"]}};
  const RougeReport one = evaluate_corpus(single, single);
  CHECK(one.average[kRougeW12].recall == one.documents[0].scores[kRougeW12].recall);

  std::map<std::string, std::vector<TokenSeq>> other = {{"06_1", {}}, {"06_9", {}}};
  try {
    evaluate_corpus(other, gold);
    FAIL("expected ContractError");
  } catch (const ContractError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("06_9") != std::string::npos);
    CHECK(msg.find("06_2") != std::string::npos);
  }
}

TEST_CASE("report table and CSV carry the three metrics") {
  std::map<std::string, std::vector<TokenSeq>> gold = {{"06_1", {seq({"a"})}}};
  const RougeReport r = evaluate_corpus(gold, gold);
  std::ostringstream table, csv;
  r.write_table(table);
  r.write_csv(csv);
  for (const char* name : {"ROUGE-1", "ROUGE-SU6", "ROUGE-W-1.2", "Pre", "Rec", "Fm", "Average"}) {
    CHECK(table.str().find(name) != std::string::npos);
  }
  CHECK(csv.str().rfind("doc_id,ROUGE-1_pre,ROUGE-1_rec,ROUGE-1_fm,", 0) == 0);
}

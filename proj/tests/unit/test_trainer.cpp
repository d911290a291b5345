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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "catchphrase/checkpoint.hpp"
#include "catchphrase/errors.hpp"
#include "catchphrase/trainer.hpp"
#include "fixtures.hpp"

using namespace catchphrase;

namespace {

const ModelDims kToy{8, 1, 6, 8};

struct ToyProblem {
  EmbeddingTable table = fixtures::random_table(8, 12, 31);
  CaseDocument doc;
  std::vector<CaseDocument> negatives;
  std::vector<const CaseDocument*> negative_ptrs;

  explicit ToyProblem(std::uint64_t seed) {
    RandomStream rng(seed, "toy-problem");
    doc = fixtures::random_doc(rng, "07_1", 12, 3, 2);
    negatives.push_back(fixtures::random_doc(rng, "07_2", 12, 3, 2));
    negatives.push_back(fixtures::random_doc(rng, "07_3", 12, 3, 2));
    for (const auto& n : negatives) negative_ptrs.push_back(&n);
  }
};

ModelParams<double> randomised(std::uint64_t seed) {
  auto p = ModelParams<double>::glorot_uniform(kToy, seed);
  RandomStream rng(seed, "bias-noise");
  for (auto slot : {kHiddenBias, kOutputBias}) {
    for (auto& v : p.tensors[slot].values()) v = 0.3 * rng.normal();
  }
  return p;
}

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "catchphrase-trainer-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

CorpusSplit toy_split(std::size_t docs, std::uint64_t seed) {
  RandomStream rng(seed, "toy-split");
  CorpusSplit split;
  split.test_year = 2006;
  for (std::size_t i = 0; i < docs; ++i) {
    split.train.push_back(fixtures::random_doc(rng, "07_" + std::to_string(i + 1), 12, 3, 2));
  }
  return split;
}

TrainConfig toy_config() {
  TrainConfig cfg;
  cfg.dims = kToy;
  cfg.epochs = 3;
  cfg.learning_rate = 1e-2;
  cfg.seed = 4;
  return cfg;
}

}  // namespace

TEST_CASE("analytic gradients match central differences on the toy problem") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ToyProblem toy(seed);
    const auto params = randomised(seed);
    const GradientCheckResult r =
        gradient_check(params, toy.doc, toy.negative_ptrs, toy.table, LossConfig{});
    CAPTURE(r.describe());
    CHECK(r.coordinates == params.parameter_count());
    CHECK(r.passed(1e-4));
    CHECK_NOTHROW(require_gradient_match(r, 1e-4));
  }
}

TEST_CASE("an all-zero model has near-zero gradients both ways") {
  const ToyProblem toy(5);
  const auto params = ModelParams<double>::zeros(kToy);
  const auto r = gradient_check(params, toy.doc, toy.negative_ptrs, toy.table, LossConfig{});
  CAPTURE(r.describe());
  CHECK(r.max_absolute_error < 1e-8);
}

TEST_CASE("a hinge sitting on its kink is nudged and reported") {
  const ToyProblem toy(6);
  const auto params = ModelParams<double>::zeros(kToy);
  // With all scores 0.5 the o1 argument is 0; a zero margin puts it on the kink.
  LossConfig cfg;
  cfg.m1 = 0.0;
  const auto r = gradient_check(params, toy.doc, toy.negative_ptrs, toy.table, cfg);
  CHECK(std::find(r.nudged_margins.begin(), r.nudged_margins.end(), "m1") !=
        r.nudged_margins.end());
}

TEST_CASE("a failing check names the worst coordinate") {
  GradientCheckResult r;
  r.max_relative_error = 0.5;
  r.worst_slot = kHiddenWeight;
  r.worst_index = 7;
  try {
    require_gradient_match(r, 1e-4);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("mlp_hidden_weight[7]") != std::string::npos);
  }
}

TEST_CASE("tape loss and tape-free loss agree") {
  const ToyProblem toy(7);
  const auto params = randomised(7);
  const auto lg = loss_and_gradients(params, toy.doc, toy.negative_ptrs, toy.table, LossConfig{});
  const auto ev = evaluate_loss(params, toy.doc, toy.negative_ptrs, toy.table, LossConfig{});
  CHECK(lg.loss.total == doctest::Approx(ev.total).epsilon(1e-12));
  CHECK(lg.loss.cross_document == doctest::Approx(ev.cross_document).epsilon(1e-12));
  CHECK(lg.loss.catch_spread == doctest::Approx(ev.catch_spread).epsilon(1e-12));
}

TEST_CASE("training log shape, clipping and determinism") {
  const auto split = toy_split(4, 8);
  const auto table = fixtures::random_table(8, 12, 31);
  TrainConfig cfg = toy_config();
  cfg.clip_norm = 0.05;
  std::size_t observed = 0;
  const auto a = train<double>(split, table, cfg, [&](const StepRecord&) { ++observed; });
  CHECK(a.log.steps.size() == 4 * 3);
  CHECK(observed == a.log.steps.size());
  CHECK(a.log.epochs.size() == 3);
  CHECK(a.log.warnings.empty());
  for (const auto& s : a.log.steps) CHECK(s.grad_norm_post <= cfg.clip_norm + 1e-9);
  CHECK(a.adam.step == 12);

  const auto b = train<double>(split, table, cfg);
  std::ostringstream la, lb;
  a.log.write_csv(la);
  b.log.write_csv(lb);
  CHECK(la.str() == lb.str());
  CHECK(a.params == b.params);

  cfg.seed = 5;
  const auto c = train<double>(split, table, cfg);
  CHECK_FALSE(c.params == a.params);
}

TEST_CASE("documents without catchphrases are not trained on") {
  auto split = toy_split(3, 9);
  split.train[1].catchphrases.clear();
  const auto table = fixtures::random_table(8, 12, 31);
  TrainConfig cfg = toy_config();
  const auto r = train<double>(split, table, cfg);
  CHECK(r.log.steps.size() == 2 * 3);
  for (const auto& s : r.log.steps) CHECK(s.doc_id != split.train[1].id);
}

TEST_CASE("too few documents for the negative set") {
  const auto table = fixtures::random_table(8, 12, 31);
  TrainConfig cfg = toy_config();
  const auto one = train<double>(toy_split(1, 10), table, cfg);
  CHECK(one.log.steps.size() == 3);
  REQUIRE(one.log.warnings.size() == 1);
  for (const auto& s : one.log.steps) CHECK(s.loss.cross_document == 0.0);
  const auto two = train<double>(toy_split(2, 10), table, cfg);
  CHECK(two.log.warnings.size() == 1);
  CHECK(two.log.steps.size() == 6);
}

TEST_CASE("training configuration errors") {
  const auto table = fixtures::random_table(8, 12, 31);
  TrainConfig cfg = toy_config();
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(train<double>(toy_split(2, 1), table, cfg), ConfigError);
  cfg = toy_config();
  cfg.epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = toy_config();
  auto split = toy_split(2, 1);
  for (auto& d : split.train) d.catchphrases.clear();
  CHECK_THROWS_AS(train<double>(split, table, cfg), ConfigError);
  cfg.dims.embedding_dim = 9;
  CHECK_THROWS_AS(train<double>(toy_split(2, 1), table, cfg), ConfigError);
}

TEST_CASE("long documents are capped per step") {
  RandomStream rng(12, "cap");
  CorpusSplit split;
  split.train.push_back(fixtures::random_doc(rng, "07_1", 12, 40, 2));
  split.train.push_back(fixtures::random_doc(rng, "07_2", 12, 40, 2));
  const auto table = fixtures::random_table(8, 12, 31);
  TrainConfig cfg = toy_config();
  cfg.max_doc_tokens = 12;
  cfg.epochs = 2;
  const auto a = train<double>(split, table, cfg);
  const auto b = train<double>(split, table, cfg);
  CHECK(a.params == b.params);
  cfg.max_doc_tokens = 0;
  const auto full = train<double>(split, table, cfg);
  CHECK_FALSE(full.params == a.params);
}

TEST_CASE("checkpoints round-trip exactly") {
  const auto split = toy_split(3, 13);
  const auto table = fixtures::random_table(8, 12, 31);
  TrainConfig cfg = toy_config();
  const auto trained = train<double>(split, table, cfg);
  CheckpointMeta meta{4, "0123456789abcdef", {{"epochs", "3"}, {"seed", "4"}}, 3};
  const auto path = temp_path("roundtrip.ckpt");
  save_checkpoint(path, trained.params, trained.adam, meta);
  CHECK(checkpoint_precision(path) == Precision::kDouble);
  const auto loaded = load_checkpoint<double>(path, &kToy);
  CHECK(loaded.params == trained.params);
  CHECK(loaded.meta == meta);
  CHECK(loaded.adam.step == trained.adam.step);
  CHECK(loaded.adam.first_moment == trained.adam.first_moment);
  CHECK(loaded.adam.second_moment == trained.adam.second_moment);
  const auto s1 = score_document(trained.params, split.train[0], table).scores.all_sentence_scores();
  const auto s2 = score_document(loaded.params, split.train[0], table).scores.all_sentence_scores();
  CHECK(s1 == s2);

  const auto fparams = train<float>(split, table, cfg);
  const auto fpath = temp_path("roundtrip-float.ckpt");
  save_checkpoint(fpath, fparams.params, fparams.adam, meta);
  CHECK(load_checkpoint<float>(fpath).params == fparams.params);
  CHECK_THROWS_AS(load_checkpoint<double>(fpath), ConfigError);
}

TEST_CASE("damaged or mismatched checkpoints are rejected") {
  const auto params = ModelParams<double>::glorot_uniform(kToy, 1);
  const auto adam = AdamState<double>::for_parameters(params.tensors);
  const auto path = temp_path("damaged.ckpt");
  save_checkpoint(path, params, adam, CheckpointMeta{});
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    bytes = s.str();
  }
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes.substr(0, bytes.size() / 2);
  }
  CHECK_THROWS_AS(load_checkpoint<double>(path), IntegrityError);
  {
    std::string flipped = bytes;
    flipped[flipped.size() - 10] ^= 1;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << flipped;
  }
  CHECK_THROWS_AS(load_checkpoint<double>(path), IntegrityError);
  {
    std::string other = bytes;
    other.replace(other.find(" 1 "), 3, " 9 ");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << other;
  }
  CHECK_THROWS_AS(load_checkpoint<double>(path), IntegrityError);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
  }
  const ModelDims other_dims{8, 2, 6, 8};
  CHECK_THROWS_AS(load_checkpoint<double>(path, &other_dims), ConfigError);
  CHECK_THROWS_AS(load_checkpoint<double>(temp_path("absent.ckpt")), IoError);
}

TEST_CASE("intermediate checkpoints follow the interval") {
  const auto split = toy_split(2, 14);
  const auto table = fixtures::random_table(8, 12, 31);
  TrainConfig cfg = toy_config();
  cfg.epochs = 4;
  cfg.checkpoint_interval = 2;
  cfg.checkpoint_path = temp_path("interval.ckpt");
  for (int e : {2, 4}) std::filesystem::remove(cfg.checkpoint_path.string() + ".epoch" + std::to_string(e));
  train<double>(split, table, cfg);
  CHECK(std::filesystem::exists(cfg.checkpoint_path.string() + ".epoch2"));
  CHECK(std::filesystem::exists(cfg.checkpoint_path.string() + ".epoch4"));
  CHECK_FALSE(std::filesystem::exists(cfg.checkpoint_path.string() + ".epoch3"));
  const auto cp = load_checkpoint<double>(cfg.checkpoint_path.string() + ".epoch2");
  CHECK(cp.meta.epochs_completed == 2);
}

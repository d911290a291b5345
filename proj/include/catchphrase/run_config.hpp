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
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catchphrase/model.hpp"
#include "catchphrase/objective.hpp"
#include "catchphrase/trainer.hpp"

namespace catchphrase {

enum class KeyKind {
  kExperiment,  // part of the config hash and the artifact echo
  kIo,          // paths and scheduling; never hashed
};

struct KeySpec {
  const char* name;
  KeyKind kind;
  const char* help;
};

// Every setting of a run, with defaults matching the published system.
struct RunConfig {
  int test_year = 2006;
  ModelDims dims;
  LossConfig loss;
  double learning_rate = 1e-4;
  double clip_norm = 5.0;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  Precision precision = Precision::kDouble;
  std::size_t max_doc_tokens = 2000;
  std::size_t top_t = 10;
  std::size_t radius = 4;
  // 0 keeps every document; otherwise the first N by id.
  std::size_t max_train_docs = 0;
  std::size_t max_test_docs = 0;
  std::uint64_t negatives_seed = 1;

  std::filesystem::path corpus_dir;
  std::filesystem::path embeddings;
  std::filesystem::path checkpoint;
  std::filesystem::path train_log;
  std::filesystem::path phrases;
  std::filesystem::path report;
  std::filesystem::path stats;
  std::size_t checkpoint_interval = 0;

  static const std::vector<KeySpec>& keys();

  // Throws ConfigError on an unknown key or an unparsable value.
  void set(std::string_view key, std::string_view value);
  // Canonical text of a value: numbers in shortest round-trip form.
  std::string get(std::string_view key) const;

  // Flat `key = value` lines; '#' starts a comment. Throws ConfigError
  // naming the line, IoError when the file cannot be read.
  void load_file(const std::filesystem::path& path);

  // Experiment keys in table order with canonical values.
  std::vector<std::pair<std::string, std::string>> experiment_echo() const;
  // 16 hex digits over the canonical experiment echo.
  std::string hash() const;
  // config_hash, then the experiment echo (which includes the seed).
  std::vector<std::pair<std::string, std::string>> artifact_header() const;

  TrainConfig train_config() const;
  // Throws ConfigError on inconsistent values.
  void validate() const;
};

}  // namespace catchphrase

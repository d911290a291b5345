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
#include <utility>
#include <vector>

#include "catchphrase/model.hpp"
#include "catchphrase/optim.hpp"

namespace catchphrase {

inline constexpr int kCheckpointVersion = 1;

struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::string config_hash;
  // Experiment configuration, echoed verbatim.
  std::vector<std::pair<std::string, std::string>> config;
  std::size_t epochs_completed = 0;

  friend bool operator==(const CheckpointMeta&, const CheckpointMeta&) = default;
};

template <class T>
struct Checkpoint {
  ModelParams<T> params;
  AdamState<T> adam;
  CheckpointMeta meta;
};

// File layout: a header line
//   catchphrase-checkpoint <version> <fnv1a64 of the body, hex>
// followed by a JSON body with precision, dims, all parameter tensors,
// Adam moments and step, seed, config hash and config echo. Numbers are
// written in shortest round-trip form, so a reload is exact.
//
// The file is written to a temporary sibling and renamed into place; a
// failed save leaves no file behind.
template <class T>
void save_checkpoint(const std::filesystem::path& path, const ModelParams<T>& params,
                     const AdamState<T>& adam, const CheckpointMeta& meta);

// Reads only what is needed to decide which precision to load with.
// Throws IntegrityError on a bad header.
Precision checkpoint_precision(const std::filesystem::path& path);

// Throws IntegrityError on a truncated or corrupt file (checksum, JSON,
// version), ConfigError when the stored precision differs from T or the
// stored dims differ from `expected_dims`.
template <class T>
Checkpoint<T> load_checkpoint(const std::filesystem::path& path,
                              const ModelDims* expected_dims = nullptr);

}  // namespace catchphrase

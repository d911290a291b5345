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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "catchphrase/checkpoint.hpp"
#include "catchphrase/corpus.hpp"
#include "catchphrase/embeddings.hpp"
#include "catchphrase/model.hpp"
#include "catchphrase/objective.hpp"
#include "catchphrase/optim.hpp"

namespace catchphrase {

struct TrainConfig {
  ModelDims dims;
  LossConfig loss;
  double learning_rate = 1e-4;
  double clip_norm = 5.0;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  Precision precision = Precision::kDouble;
  // Per-step cap on sentence tokens of each document (0 disables). Longer
  // documents contribute a random contiguous run of sentences.
  std::size_t max_doc_tokens = 2000;
  // When non-zero, `checkpoint_path` + ".epoch<N>" is written every
  // `checkpoint_interval` epochs.
  std::size_t checkpoint_interval = 0;
  std::filesystem::path checkpoint_path;
  CheckpointMeta checkpoint_meta;

  // Throws ConfigError.
  void validate() const;
};

struct StepRecord {
  std::size_t step = 0;   // 1-based across the run
  std::size_t epoch = 0;  // 1-based
  std::string doc_id;
  LossBreakdown loss;
  double grad_norm_pre = 0.0;
  double grad_norm_post = 0.0;
};

struct EpochSummary {
  std::size_t epoch = 0;
  std::size_t steps = 0;
  double mean_total = 0.0;
};

struct TrainLog {
  std::vector<StepRecord> steps;
  std::vector<EpochSummary> epochs;
  std::vector<std::string> warnings;

  // Header: step,epoch,doc_id,o1,o2,o3,o4,o5_catch,o5_sentence,total,
  // grad_norm_pre,grad_norm_post. Reals in shortest round-trip form.
  void write_csv(std::ostream& out) const;
};

template <class T>
struct LossAndGradients {
  LossBreakdown loss;
  std::array<Tensor<T>, kParamSlotCount> grads;
};

// Forward and backward over one positive document and its negatives; no
// parameter update. `negatives.size()` must equal cfg.negative_set_size and
// `doc` must carry catchphrases.
template <class T>
LossAndGradients<T> loss_and_gradients(const ModelParams<T>& params, const CaseDocument& doc,
                                       std::span<const CaseDocument* const> negatives,
                                       const EmbeddingTable& table, const LossConfig& cfg);

// The same loss computed without the tape, from score_document() and the
// scalar objective.
template <class T>
LossBreakdown evaluate_loss(const ModelParams<T>& params, const CaseDocument& doc,
                            std::span<const CaseDocument* const> negatives,
                            const EmbeddingTable& table, const LossConfig& cfg);

template <class T>
struct TrainResult {
  ModelParams<T> params;
  AdamState<T> adam;
  TrainLog log;
};

using StepObserver = std::function<void(const StepRecord&)>;

// Per epoch: shuffle the documents that carry catchphrases, and for each
// one sample negatives uniformly without replacement from the others,
// compute the loss, backpropagate, clip to cfg.clip_norm and take one Adam
// step. With fewer other documents than requested, all of them are used;
// with none, the cross-document term is dropped. Both cases add a warning
// to the log.
//
// Throws ConfigError when no training document has catchphrases and
// NumericError (with step diagnostics) on a non-finite loss.
template <class T>
TrainResult<T> train(const CorpusSplit& split, const EmbeddingTable& table,
                     const TrainConfig& cfg, const StepObserver& observer = {});

struct GradientCheckResult {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t worst_slot = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates = 0;
  // Margins shifted off a hinge kink before differencing, e.g. "m1".
  std::vector<std::string> nudged_margins;

  bool passed(double tolerance) const { return max_relative_error < tolerance; }
  std::string describe() const;
};

// Relative error floor: |a - n| / max(|a|, |n|, floor).
inline constexpr double kGradientCheckFloor = 1e-6;

// Compares analytic gradients of the loss against central differences with
// step `h` for every parameter coordinate. A margin whose hinge argument
// lies within 1e-4 of its kink is moved 1e-3 away from it first.
GradientCheckResult gradient_check(const ModelParams<double>& params, const CaseDocument& doc,
                                   std::span<const CaseDocument* const> negatives,
                                   const EmbeddingTable& table, LossConfig cfg,
                                   double h = 1e-5);

// Throws NumericError naming the worst coordinate when the check fails.
void require_gradient_match(const GradientCheckResult& result, double tolerance);

}  // namespace catchphrase

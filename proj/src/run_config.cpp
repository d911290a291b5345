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

#include "catchphrase/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>

#include "catchphrase/errors.hpp"
#include "catchphrase/hashing.hpp"

namespace catchphrase {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class N>
N parse_value(std::string_view key, std::string_view text) {
  N value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

template <class N>
std::string show(N value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

struct Binding {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class N>
Binding number(N RunConfig::*field) {
  return {[field](RunConfig& c, std::string_view v) { c.*field = parse_value<N>("", v); },
          [field](const RunConfig& c) { return show(c.*field); }};
}

template <class N, class Sub>
Binding nested(Sub RunConfig::*outer, N Sub::*field) {
  return {[=](RunConfig& c, std::string_view v) { (c.*outer).*field = parse_value<N>("", v); },
          [=](const RunConfig& c) { return show((c.*outer).*field); }};
}

Binding path(std::filesystem::path RunConfig::*field) {
  return {[field](RunConfig& c, std::string_view v) { c.*field = std::string(v); },
          [field](const RunConfig& c) { return (c.*field).string(); }};
}

struct Entry {
  KeySpec spec;
  Binding binding;
};

const std::vector<Entry>& table() {
  using K = KeyKind;
  static const std::vector<Entry> entries = {
      {{"test_year", K::kExperiment, "held-out year (2006-2009)"}, number(&RunConfig::test_year)},
      {{"embedding_dim", K::kExperiment, "word embedding width d"},
       nested(&RunConfig::dims, &ModelDims::embedding_dim)},
      {{"half_window", K::kExperiment, "words on each side of the window centre k"},
       nested(&RunConfig::dims, &ModelDims::half_window)},
      {{"filters", K::kExperiment, "convolution filters c"},
       nested(&RunConfig::dims, &ModelDims::filters)},
      {{"hidden", K::kExperiment, "MLP hidden units h"},
       nested(&RunConfig::dims, &ModelDims::hidden)},
      {{"learning_rate", K::kExperiment, "Adam step size"}, number(&RunConfig::learning_rate)},
      {{"clip_norm", K::kExperiment, "global gradient norm bound"},
       number(&RunConfig::clip_norm)},
      {{"epochs", K::kExperiment, "passes over the training documents"},
       number(&RunConfig::epochs)},
      {{"seed", K::kExperiment, "root random seed"}, number(&RunConfig::seed)},
      {{"precision", K::kExperiment, "float or double"},
       {[](RunConfig& c, std::string_view v) { c.precision = parse_precision(v); },
        [](const RunConfig& c) { return std::string(precision_name(c.precision)); }}},
      {{"max_doc_tokens", K::kExperiment, "sentence-token cap per training step (0 = none)"},
       number(&RunConfig::max_doc_tokens)},
      {{"margin_mean_order", K::kExperiment, "m1"}, nested(&RunConfig::loss, &LossConfig::m1)},
      {{"margin_cross_document", K::kExperiment, "m2"},
       nested(&RunConfig::loss, &LossConfig::m2)},
      {{"margin_upper_spread", K::kExperiment, "m3"},
       nested(&RunConfig::loss, &LossConfig::m3)},
      {{"margin_lower_spread", K::kExperiment, "m4"},
       nested(&RunConfig::loss, &LossConfig::m4)},
      {{"weight_mean_order", K::kExperiment, "a1"}, nested(&RunConfig::loss, &LossConfig::a1)},
      {{"weight_cross_document", K::kExperiment, "a2"},
       nested(&RunConfig::loss, &LossConfig::a2)},
      {{"weight_upper_spread", K::kExperiment, "b1"},
       nested(&RunConfig::loss, &LossConfig::b1)},
      {{"weight_lower_spread", K::kExperiment, "b2"},
       nested(&RunConfig::loss, &LossConfig::b2)},
      {{"weight_catch_spread", K::kExperiment, "b3"},
       nested(&RunConfig::loss, &LossConfig::b3)},
      {{"weight_sentence_spread", K::kExperiment, "b4"},
       nested(&RunConfig::loss, &LossConfig::b4)},
      {{"negatives", K::kExperiment, "negative documents per step"},
       nested(&RunConfig::loss, &LossConfig::negative_set_size)},
      {{"top_t", K::kExperiment, "anchors per document"}, number(&RunConfig::top_t)},
      {{"radius", K::kExperiment, "words kept on each side of an anchor"},
       number(&RunConfig::radius)},
      {{"max_train_docs", K::kExperiment, "use the first N training documents (0 = all)"},
       number(&RunConfig::max_train_docs)},
      {{"max_test_docs", K::kExperiment, "use the first N held-out documents (0 = all)"},
       number(&RunConfig::max_test_docs)},
      {{"negatives_seed", K::kExperiment, "seed for score-stats pairings"},
       number(&RunConfig::negatives_seed)},
      {{"corpus_dir", K::kIo, "directory of case XML files"}, path(&RunConfig::corpus_dir)},
      {{"embeddings", K::kIo, "embedding text file or binary cache"},
       path(&RunConfig::embeddings)},
      {{"checkpoint", K::kIo, "model checkpoint path"}, path(&RunConfig::checkpoint)},
      {{"train_log", K::kIo, "training log CSV path"}, path(&RunConfig::train_log)},
      {{"phrases", K::kIo, "extracted phrases path"}, path(&RunConfig::phrases)},
      {{"report", K::kIo, "ROUGE report path prefix (.txt and .csv)"},
       path(&RunConfig::report)},
      {{"stats", K::kIo, "score statistics CSV path"}, path(&RunConfig::stats)},
      {{"checkpoint_interval", K::kIo, "write an intermediate checkpoint every N epochs"},
       number(&RunConfig::checkpoint_interval)},
  };
  return entries;
}

const Entry& find_entry(std::string_view key) {
  for (const auto& e : table()) {
    if (key == e.spec.name) return e;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

const std::vector<KeySpec>& RunConfig::keys() {
  static const std::vector<KeySpec> specs = [] {
    std::vector<KeySpec> out;
    for (const auto& e : table()) out.push_back(e.spec);
    return out;
  }();
  return specs;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const Entry& e = find_entry(key);
  try {
    e.binding.set(*this, trim(value));
  } catch (const ConfigError& err) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
}

std::string RunConfig::get(std::string_view key) const { return find_entry(key).binding.get(*this); }

void RunConfig::load_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash_pos = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash_pos));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    try {
      set(trim(std::string_view(body).substr(0, eq)), std::string_view(body).substr(eq + 1));
    } catch (const ConfigError& err) {
      throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": " + err.what());
    }
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::experiment_echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : table()) {
    if (e.spec.kind == KeyKind::kExperiment) out.emplace_back(e.spec.name, e.binding.get(*this));
  }
  return out;
}

std::string RunConfig::hash() const {
  std::string canonical;
  for (const auto& [k, v] : experiment_echo()) canonical += k + "=" + v + "\n";
  return to_hex(fnv1a64(canonical));
}

std::vector<std::pair<std::string, std::string>> RunConfig::artifact_header() const {
  std::vector<std::pair<std::string, std::string>> out = {{"config_hash", hash()}};
  for (auto& kv : experiment_echo()) out.push_back(std::move(kv));
  return out;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig cfg;
  cfg.dims = dims;
  cfg.loss = loss;
  cfg.learning_rate = learning_rate;
  cfg.clip_norm = clip_norm;
  cfg.epochs = epochs;
  cfg.seed = seed;
  cfg.precision = precision;
  cfg.max_doc_tokens = max_doc_tokens;
  cfg.checkpoint_interval = checkpoint_interval;
  cfg.checkpoint_path = checkpoint;
  cfg.checkpoint_meta.seed = seed;
  cfg.checkpoint_meta.config_hash = hash();
  cfg.checkpoint_meta.config = experiment_echo();
  return cfg;
}

void RunConfig::validate() const {
  if (test_year < 2006 || test_year > 2009) {
    throw ConfigError("test_year must lie in 2006..2009, got " + std::to_string(test_year));
  }
  if (top_t == 0) throw ConfigError("top_t must be >= 1");
  train_config().validate();
}

}  // namespace catchphrase

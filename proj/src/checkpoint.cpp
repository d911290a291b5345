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

#include "catchphrase/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "catchphrase/errors.hpp"
#include "catchphrase/hashing.hpp"

namespace catchphrase {
namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "catchphrase-checkpoint";

template <class T>
constexpr Precision precision_of() {
  return std::is_same_v<T, float> ? Precision::kFloat : Precision::kDouble;
}

template <class T>
json tensor_to_json(const Tensor<T>& t) {
  json data = json::array();
  for (T v : t.values()) data.push_back(static_cast<double>(v));
  return {{"rows", t.rows()}, {"cols", t.cols()}, {"data", std::move(data)}};
}

template <class T>
Tensor<T> tensor_from_json(const json& j, const std::string& what) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& data = j.at("data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw IntegrityError("checkpoint tensor " + what + " has " + std::to_string(data.size()) +
                         " values, expected " + std::to_string(rows * cols));
  }
  std::vector<T> values;
  values.reserve(data.size());
  for (const auto& v : data) values.push_back(static_cast<T>(v.get<double>()));
  return Tensor<T>(rows, cols, std::move(values));
}

json dims_to_json(const ModelDims& d) {
  return {{"embedding_dim", d.embedding_dim},
          {"half_window", d.half_window},
          {"filters", d.filters},
          {"hidden", d.hidden}};
}

ModelDims dims_from_json(const json& j) {
  ModelDims d;
  d.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  d.half_window = j.at("half_window").get<std::size_t>();
  d.filters = j.at("filters").get<std::size_t>();
  d.hidden = j.at("hidden").get<std::size_t>();
  return d;
}

std::string dims_string(const ModelDims& d) {
  return "d=" + std::to_string(d.embedding_dim) + " k=" + std::to_string(d.half_window) +
         " c=" + std::to_string(d.filters) + " h=" + std::to_string(d.hidden);
}

struct RawCheckpoint {
  int version = 0;
  std::string body;
};

RawCheckpoint read_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::string header;
  if (!std::getline(in, header)) {
    throw IntegrityError("checkpoint " + path.string() + " is empty");
  }
  std::istringstream fields(header);
  std::string magic, checksum;
  RawCheckpoint raw;
  if (!(fields >> magic >> raw.version >> checksum) || magic != kMagic) {
    throw IntegrityError("checkpoint " + path.string() + " has no valid header");
  }
  if (raw.version != kCheckpointVersion) {
    throw IntegrityError("checkpoint " + path.string() + " has version " +
                         std::to_string(raw.version) + ", expected " +
                         std::to_string(kCheckpointVersion));
  }
  std::ostringstream body;
  body << in.rdbuf();
  raw.body = body.str();
  if (to_hex(fnv1a64(raw.body)) != checksum) {
    throw IntegrityError("checkpoint " + path.string() +
                         " failed its checksum (truncated or modified)");
  }
  return raw;
}

json parse_body(const RawCheckpoint& raw, const std::filesystem::path& path) {
  try {
    return json::parse(raw.body);
  } catch (const json::exception& e) {
    throw IntegrityError("checkpoint " + path.string() + " body is not valid JSON: " + e.what());
  }
}

}  // namespace

template <class T>
void save_checkpoint(const std::filesystem::path& path, const ModelParams<T>& params,
                     const AdamState<T>& adam, const CheckpointMeta& meta) {
  json body;
  body["precision"] = std::string(precision_name(precision_of<T>()));
  body["dims"] = dims_to_json(params.dims);
  json tensors = json::object();
  for (std::size_t slot = 0; slot < kParamSlotCount; ++slot) {
    tensors[std::string(param_slot_name(slot))] = tensor_to_json(params.tensors[slot]);
  }
  body["params"] = std::move(tensors);
  json first = json::array(), second = json::array();
  for (const auto& t : adam.first_moment) first.push_back(tensor_to_json(t));
  for (const auto& t : adam.second_moment) second.push_back(tensor_to_json(t));
  body["adam"] = {{"step", adam.step},
                  {"beta1", adam.beta1},
                  {"beta2", adam.beta2},
                  {"epsilon", adam.epsilon},
                  {"first_moment", std::move(first)},
                  {"second_moment", std::move(second)}};
  body["seed"] = meta.seed;
  body["config_hash"] = meta.config_hash;
  json config = json::array();
  for (const auto& [k, v] : meta.config) config.push_back({k, v});
  body["config"] = std::move(config);
  body["epochs_completed"] = meta.epochs_completed;

  const std::string text = body.dump();
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
    out << kMagic << ' ' << kCheckpointVersion << ' ' << to_hex(fnv1a64(text)) << '\n' << text;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("failed writing checkpoint " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move checkpoint into place at " + path.string());
  }
}

Precision checkpoint_precision(const std::filesystem::path& path) {
  const json body = parse_body(read_raw(path), path);
  try {
    return parse_precision(body.at("precision").get<std::string>());
  } catch (const json::exception& e) {
    throw IntegrityError("checkpoint " + path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw IntegrityError("checkpoint " + path.string() + ": " + e.what());
  }
}

template <class T>
Checkpoint<T> load_checkpoint(const std::filesystem::path& path, const ModelDims* expected_dims) {
  const json body = parse_body(read_raw(path), path);
  try {
    const auto stored = body.at("precision").get<std::string>();
    if (stored != precision_name(precision_of<T>())) {
      throw ConfigError("checkpoint " + path.string() + " holds " + stored +
                        " parameters, requested " +
                        std::string(precision_name(precision_of<T>())));
    }
    Checkpoint<T> cp;
    cp.params.dims = dims_from_json(body.at("dims"));
    if (expected_dims && !(*expected_dims == cp.params.dims)) {
      throw ConfigError("checkpoint " + path.string() + " has dims " +
                        dims_string(cp.params.dims) + ", expected " + dims_string(*expected_dims));
    }
    const auto& tensors = body.at("params");
    for (std::size_t slot = 0; slot < kParamSlotCount; ++slot) {
      const std::string name(param_slot_name(slot));
      cp.params.tensors[slot] = tensor_from_json<T>(tensors.at(name), name);
    }
    try {
      cp.params.validate();
    } catch (const Error& e) {
      throw IntegrityError("checkpoint " + path.string() + ": " + e.what());
    }
    const auto& adam = body.at("adam");
    cp.adam.step = adam.at("step").get<std::uint64_t>();
    cp.adam.beta1 = adam.at("beta1").get<double>();
    cp.adam.beta2 = adam.at("beta2").get<double>();
    cp.adam.epsilon = adam.at("epsilon").get<double>();
    for (const auto& t : adam.at("first_moment")) {
      cp.adam.first_moment.push_back(tensor_from_json<T>(t, "adam first moment"));
    }
    for (const auto& t : adam.at("second_moment")) {
      cp.adam.second_moment.push_back(tensor_from_json<T>(t, "adam second moment"));
    }
    if (cp.adam.first_moment.size() != kParamSlotCount ||
        cp.adam.second_moment.size() != kParamSlotCount) {
      throw IntegrityError("checkpoint " + path.string() + " has incomplete optimizer state");
    }
    for (std::size_t slot = 0; slot < kParamSlotCount; ++slot) {
      if (!cp.adam.first_moment[slot].same_shape(cp.params.tensors[slot]) ||
          !cp.adam.second_moment[slot].same_shape(cp.params.tensors[slot])) {
        throw IntegrityError("checkpoint " + path.string() +
                             " optimizer state does not match parameter shapes");
      }
    }
    cp.meta.seed = body.at("seed").get<std::uint64_t>();
    cp.meta.config_hash = body.at("config_hash").get<std::string>();
    for (const auto& kv : body.at("config")) {
      cp.meta.config.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    }
    cp.meta.epochs_completed = body.at("epochs_completed").get<std::size_t>();
    return cp;
  } catch (const json::exception& e) {
    throw IntegrityError("checkpoint " + path.string() + " is missing data: " + e.what());
  } catch (const DimensionError& e) {
    throw IntegrityError("checkpoint " + path.string() + ": " + e.what());
  }
}

template void save_checkpoint<float>(const std::filesystem::path&, const ModelParams<float>&,
                                     const AdamState<float>&, const CheckpointMeta&);
template void save_checkpoint<double>(const std::filesystem::path&, const ModelParams<double>&,
                                      const AdamState<double>&, const CheckpointMeta&);
template Checkpoint<float> load_checkpoint<float>(const std::filesystem::path&, const ModelDims*);
template Checkpoint<double> load_checkpoint<double>(const std::filesystem::path&,
                                                    const ModelDims*);

}  // namespace catchphrase

// Copyright 2026 The OLA Authors
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

#include "ola/sensitivity.h"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "ola/error.h"
#include "ola/parallel.h"

namespace ola {

void Welford::Add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void Welford::Merge(const Welford& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
}

std::string SensitivityProfile::ToJson() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const LayerStats& s : layers) {
    nlohmann::ordered_json j;
    j["layer"] = s.layer;
    j["mu"] = s.mu;
    j["sigma"] = s.sigma;
    j["A"] = s.A;
    j["n_nodes"] = s.n_nodes;
    j["n_train"] = n_train;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

SensitivityProfile SensitivityProfile::FromJson(const std::string& text) {
  SensitivityProfile profile;
  try {
    const nlohmann::json arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw Error(ErrorKind::kParse, "stats JSON must be an array");
    for (const auto& j : arr) {
      LayerStats s;
      s.layer = j.at("layer").get<int>();
      s.mu = j.at("mu").get<double>();
      s.sigma = j.at("sigma").get<double>();
      s.A = j.at("A").get<double>();
      s.n_nodes = j.at("n_nodes").get<int>();
      const int n_train = j.at("n_train").get<int>();
      if (!profile.layers.empty() && n_train != profile.n_train) {
        throw Error(ErrorKind::kValidation, "stats layers disagree on n_train");
      }
      profile.n_train = n_train;
      profile.layers.push_back(s);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("stats JSON: ") + e.what());
  }
  if (profile.n_train < 1) throw Error(ErrorKind::kValidation, "stats n_train must be >= 1");
  if (profile.layers.empty()) throw Error(ErrorKind::kValidation, "stats has no layers");
  for (size_t i = 0; i < profile.layers.size(); ++i) {
    const LayerStats& s = profile.layers[i];
    if (s.layer != static_cast<int>(i) + 1) {
      throw Error(ErrorKind::kValidation, "stats layers must be numbered 1..N contiguously");
    }
    if (!(s.sigma > 0.0) || !(s.A >= 0.0) || s.n_nodes < 1) {
      throw Error(ErrorKind::kValidation,
                  "stats layer " + std::to_string(s.layer) + " has an invalid sigma, A or n_nodes");
    }
  }
  return profile;
}

SensitivityProfile CollectStats(const NetModel& model, const Dataset& data) {
  const int n_layers = model.num_activation_layers();
  if (n_layers < 1) {
    throw Error(ErrorKind::kInvalidArgument, "model has no activation layers");
  }
  if (data.empty()) throw Error(ErrorKind::kInvalidArgument, "dataset is empty");

  struct Partial {
    std::vector<Welford> inputs;
    std::vector<double> alpha_sum;
  };
  const size_t chunks = (data.size() + kSampleChunk - 1) / kSampleChunk;
  std::vector<Partial> partials(chunks);
  ParallelFor(chunks, [&](size_t c) {
    Partial& p = partials[c];
    p.inputs.resize(n_layers);
    p.alpha_sum.assign(n_layers, 0.0);
    const size_t begin = c * kSampleChunk;
    const size_t end = std::min(data.size(), begin + kSampleChunk);
    for (size_t s = begin; s < end; ++s) {
      const Sample& sample = data.samples()[s];
      const ForwardResult fwd = Forward(model, sample.features);
      const BackwardResult bwd = Backward(model, sample.features, sample.label);
      for (int i = 0; i < n_layers; ++i) {
        for (double x : fwd.pre_activations[i]) p.inputs[i].Add(x);
        double alpha = 0.0;
        for (double g : bwd.activation_grads[i]) alpha += g * g;
        p.alpha_sum[i] += alpha;
      }
    }
  });

  std::vector<Welford> inputs(n_layers);
  std::vector<double> alpha_sum(n_layers, 0.0);
  for (const Partial& p : partials) {
    for (int i = 0; i < n_layers; ++i) {
      inputs[i].Merge(p.inputs[i]);
      alpha_sum[i] += p.alpha_sum[i];
    }
  }

  SensitivityProfile profile;
  profile.n_train = static_cast<int>(data.size());
  for (int i = 0; i < n_layers; ++i) {
    LayerStats s;
    s.layer = i + 1;
    s.mu = inputs[i].mean();
    s.sigma = std::sqrt(inputs[i].variance());
    if (!(s.sigma > 0.0)) throw DegenerateLayerError(s.layer);
    s.A = alpha_sum[i] / static_cast<double>(data.size());
    if (!std::isfinite(s.A)) {
      throw Error(ErrorKind::kNumeric,
                  "layer " + std::to_string(s.layer) + " sensitivity is not finite");
    }
    s.n_nodes = model.hidden()[i].out;
    profile.layers.push_back(s);
  }
  return profile;
}

double LookupMse(const MseTable& table, int degree, int layer) {
  if (degree == -1) return std::numeric_limits<double>::infinity();
  auto it = table.find(degree);
  if (it == table.end()) {
    throw Error(ErrorKind::kLookup, "layer " + std::to_string(layer) +
                                        " has no MSE entry for degree " +
                                        std::to_string(degree));
  }
  return it->second;
}

double LayerLoss(double A, const MseTable& table, int degree, int layer) {
  if (degree == -1) return std::numeric_limits<double>::infinity();
  return A * LookupMse(table, degree, layer);
}

double LossVariance(const SensitivityProfile& profile,
                    std::span<const MseTable> mse_tables,
                    std::span<const int> degrees) {
  const size_t n = profile.layers.size();
  if (mse_tables.size() != n || degrees.size() != n) {
    throw Error(ErrorKind::kInvalidArgument,
                "loss variance needs one MSE table and one degree per layer");
  }
  double v = 0.0;
  for (size_t i = 0; i < n; ++i) {
    v += LayerLoss(profile.layers[i].A, mse_tables[i], degrees[i], static_cast<int>(i) + 1);
  }
  return v;
}

}  // namespace ola

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

#include "ola/trainer.h"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "ola/error.h"
#include "ola/parallel.h"

namespace ola {
namespace {

template <typename Config, typename Apply>
Config ParseConfig(const std::string& text, const char* what, Apply apply) {
  Config c;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorKind::kParse, std::string(what) + " must be an object");
    for (const auto& [key, value] : j.items()) {
      if (!apply(c, key, value)) {
        throw Error(ErrorKind::kParse, std::string(what) + ": unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string(what) + ": " + e.what());
  }
  return c;
}

}  // namespace

ToyDataConfig ToyDataConfig::FromJson(const std::string& text) {
  return ParseConfig<ToyDataConfig>(
      text, "toy data config", [](ToyDataConfig& c, const std::string& k, const nlohmann::json& v) {
        if (k == "kind") c.kind = v.get<std::string>();
        else if (k == "samples") c.samples = v.get<int>();
        else if (k == "classes") c.classes = v.get<int>();
        else if (k == "feature_dim") c.feature_dim = v.get<int>();
        else if (k == "radius") c.radius = v.get<double>();
        else if (k == "noise") c.noise = v.get<double>();
        else if (k == "turns") c.turns = v.get<double>();
        else if (k == "tail_fraction") c.tail_fraction = v.get<double>();
        else if (k == "tail_min") c.tail_min = v.get<double>();
        else if (k == "tail_max") c.tail_max = v.get<double>();
        else if (k == "seed") c.seed = v.get<uint64_t>();
        else return false;
        return true;
      });
}

TrainConfig TrainConfig::FromJson(const std::string& text) {
  return ParseConfig<TrainConfig>(
      text, "train config", [](TrainConfig& c, const std::string& k, const nlohmann::json& v) {
        if (k == "hidden_sizes") c.hidden_sizes = v.get<std::vector<int>>();
        else if (k == "activation") c.activation = v.get<std::string>();
        else if (k == "epochs") c.epochs = v.get<int>();
        else if (k == "batch_size") c.batch_size = v.get<int>();
        else if (k == "learning_rate") c.learning_rate = v.get<double>();
        else if (k == "momentum") c.momentum = v.get<double>();
        else if (k == "weight_decay") c.weight_decay = v.get<double>();
        else if (k == "seed") c.seed = v.get<uint64_t>();
        else return false;
        return true;
      });
}

Dataset MakeToyData(const ToyDataConfig& config) {
  if (config.samples < 1 || config.classes < 2 || config.feature_dim < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "toy data needs samples >= 1, classes >= 2 and feature_dim >= 2");
  }
  if (!(config.tail_fraction >= 0.0 && config.tail_fraction <= 1.0) ||
      !(config.tail_min <= config.tail_max)) {
    throw Error(ErrorKind::kInvalidArgument, "invalid tail parameters");
  }
  const bool spiral = config.kind == "spiral";
  if (!spiral && config.kind != "blobs") {
    throw Error(ErrorKind::kInvalidArgument, "unknown toy data kind '" + config.kind + "'");
  }
  Rng rng(config.seed);
  std::vector<Sample> samples;
  samples.reserve(config.samples);
  for (int i = 0; i < config.samples; ++i) {
    const int label = i % config.classes;
    const double offset = 2.0 * std::numbers::pi * label / config.classes;
    const bool tail = rng.Uniform() < config.tail_fraction;
    double x = 0.0;
    double y = 0.0;
    if (spiral) {
      const double t = tail ? rng.Uniform(config.tail_min, config.tail_max) : rng.Uniform();
      const double angle = offset + 2.0 * std::numbers::pi * config.turns * t;
      x = config.radius * t * std::cos(angle);
      y = config.radius * t * std::sin(angle);
    } else {
      const double scale =
          config.radius * (tail ? rng.Uniform(config.tail_min, config.tail_max) : 1.0);
      x = scale * std::cos(offset);
      y = scale * std::sin(offset);
    }
    Sample s;
    s.label = label;
    s.features.resize(config.feature_dim);
    for (int j = 0; j < config.feature_dim; ++j) s.features[j] = config.noise * rng.Normal();
    s.features[0] += x;
    s.features[1] += y;
    samples.push_back(std::move(s));
  }
  return Dataset(std::move(samples));
}

NetModel InitModel(int input_dim, const std::vector<int>& hidden_sizes, int num_classes,
                   const ScalarActivation& activation, Rng& rng) {
  if (input_dim < 1 || num_classes < 2 || hidden_sizes.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "model needs inputs, hidden layers and >= 2 classes");
  }
  const auto make = [&rng](int in, int out, LayerActivation act) {
    DenseLayer layer;
    layer.in = in;
    layer.out = out;
    layer.activation = std::move(act);
    layer.bias.assign(out, 0.0);
    layer.weights.resize(static_cast<size_t>(in) * out);
    const double sd = std::sqrt(2.0 / in);
    for (double& w : layer.weights) w = sd * rng.Normal();
    return layer;
  };
  std::vector<DenseLayer> hidden;
  int in = input_dim;
  for (int width : hidden_sizes) {
    if (width < 1) throw Error(ErrorKind::kInvalidArgument, "hidden layer width must be >= 1");
    hidden.push_back(make(in, width, activation));
    in = width;
  }
  DenseLayer output = make(in, num_classes, ScalarActivation::Identity());
  return NetModel(std::move(hidden), std::move(output));
}

TrainResult Train(const Dataset& data, const TrainConfig& config) {
  if (data.empty()) throw Error(ErrorKind::kInvalidArgument, "training set is empty");
  if (config.epochs < 0 || config.batch_size < 1 || !(config.learning_rate > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "invalid training hyperparameters");
  }
  Rng rng(config.seed);
  NetModel model = InitModel(data.feature_dim(), config.hidden_sizes, data.num_classes(),
                             ScalarActivation::FromName(config.activation), rng);

  std::vector<DenseLayer> layers = model.hidden();
  layers.push_back(model.output());
  std::vector<std::vector<double>> vel_w(layers.size());
  std::vector<std::vector<double>> vel_b(layers.size());
  for (size_t l = 0; l < layers.size(); ++l) {
    vel_w[l].assign(layers[l].weights.size(), 0.0);
    vel_b[l].assign(layers[l].bias.size(), 0.0);
  }

  std::vector<size_t> order(data.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result{model, {}, 0.0};
  std::vector<BackwardResult> grads(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.Index(i)]);
    double loss_sum = 0.0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t count = std::min<size_t>(config.batch_size, order.size() - start);
      ParallelFor(count, [&](size_t b) {
        const Sample& s = data.samples()[order[start + b]];
        grads[b] = Backward(model, s.features, s.label, /*parameter_grads=*/true);
      });
      const double scale = 1.0 / static_cast<double>(count);
      for (size_t l = 0; l < layers.size(); ++l) {
        std::vector<double> gw(layers[l].weights.size(), 0.0);
        std::vector<double> gb(layers[l].bias.size(), 0.0);
        for (size_t b = 0; b < count; ++b) {
          for (size_t p = 0; p < gw.size(); ++p) gw[p] += grads[b].weight_grads[l][p];
          for (size_t p = 0; p < gb.size(); ++p) gb[p] += grads[b].bias_grads[l][p];
        }
        for (size_t p = 0; p < gw.size(); ++p) {
          const double g = gw[p] * scale + config.weight_decay * layers[l].weights[p];
          vel_w[l][p] = config.momentum * vel_w[l][p] - config.learning_rate * g;
          layers[l].weights[p] += vel_w[l][p];
        }
        for (size_t p = 0; p < gb.size(); ++p) {
          vel_b[l][p] = config.momentum * vel_b[l][p] - config.learning_rate * gb[p] * scale;
          layers[l].bias[p] += vel_b[l][p];
        }
      }
      for (size_t b = 0; b < count; ++b) loss_sum += grads[b].loss;
      model = NetModel(std::vector<DenseLayer>(layers.begin(), layers.end() - 1), layers.back());
    }
    const double mean_loss = loss_sum / static_cast<double>(data.size());
    if (!std::isfinite(mean_loss)) {
      throw Error(ErrorKind::kNumeric, "training diverged at epoch " + std::to_string(epoch + 1));
    }
    result.epoch_loss.push_back(mean_loss);
  }
  result.model = model;
  result.train_accuracy = Accuracy(model, data);
  return result;
}

}  // namespace ola

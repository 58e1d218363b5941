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

#ifndef OLA_TRAINER_H_
#define OLA_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ola/net.h"
#include "ola/random.h"

namespace ola {

// Two generators. "blobs": Gaussian blobs on a circle, one per class.
// "spiral": interleaved arms, one per class. In both, a fraction of the
// samples is pushed far out along its class direction (blobs) or arm
// (spiral), which gives the hidden layers heavy-tailed inputs.
struct ToyDataConfig {
  std::string kind = "spiral";
  int samples = 1500;
  int classes = 3;
  int feature_dim = 2;
  double radius = 4.0;
  double noise = 0.15;
  // Spiral only: number of turns of each arm over radius [0, radius].
  double turns = 1.0;
  double tail_fraction = 0.03;
  // Tail samples sit at radius * U(tail_min, tail_max); for the spiral the
  // arm parameter is extended to that range instead.
  double tail_min = 1.2;
  double tail_max = 2.0;
  uint64_t seed = 7;

  // Object with any subset of the field names; missing keys keep defaults.
  static ToyDataConfig FromJson(const std::string& text);
};

Dataset MakeToyData(const ToyDataConfig& config);

struct TrainConfig {
  std::vector<int> hidden_sizes = {32, 32, 32};
  std::string activation = "relu";
  int epochs = 80;
  int batch_size = 32;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  uint64_t seed = 11;

  // Object with any subset of the field names; missing keys keep defaults.
  static TrainConfig FromJson(const std::string& text);
};

// He-normal weights, zero biases.
NetModel InitModel(int input_dim, const std::vector<int>& hidden_sizes, int num_classes,
                   const ScalarActivation& activation, Rng& rng);

struct TrainResult {
  NetModel model;
  std::vector<double> epoch_loss;
  double train_accuracy = 0.0;
};

// Mini-batch SGD with momentum on the mean cross-entropy. Per-sample
// gradients are reduced in sample order, so the result does not depend on
// the thread count.
TrainResult Train(const Dataset& data, const TrainConfig& config);

}  // namespace ola

#endif  // OLA_TRAINER_H_

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

#include <gtest/gtest.h>

#include "ola/error.h"

namespace ola {
namespace {

ToyDataConfig SmallData() {
  ToyDataConfig c;
  c.samples = 300;
  return c;
}

TrainConfig SmallTraining() {
  TrainConfig c;
  c.hidden_sizes = {8, 8};
  c.epochs = 15;
  return c;
}

TEST(MakeToyData, IsDeterministicAndBalanced) {
  const Dataset a = MakeToyData(SmallData());
  const Dataset b = MakeToyData(SmallData());
  EXPECT_EQ(a.ToCsv(), b.ToCsv());
  ASSERT_EQ(a.size(), 300u);
  EXPECT_EQ(a.feature_dim(), 2);
  EXPECT_EQ(a.num_classes(), 3);
  std::vector<int> counts(3, 0);
  for (const Sample& s : a.samples()) ++counts[s.label];
  EXPECT_EQ(counts, (std::vector<int>{100, 100, 100}));
  ToyDataConfig other = SmallData();
  other.seed = 8;
  EXPECT_NE(MakeToyData(other).ToCsv(), a.ToCsv());
}

TEST(MakeToyData, TailSamplesLieOutsideTheCore) {
  ToyDataConfig c = SmallData();
  c.samples = 3000;
  c.noise = 0.0;
  const Dataset data = MakeToyData(c);
  int outside = 0;
  for (const Sample& s : data.samples()) {
    if (std::hypot(s.features[0], s.features[1]) > c.radius * 1.0 + 1e-12) ++outside;
  }
  EXPECT_GT(outside, 0);
  EXPECT_LT(outside, 3000 * 0.1);
}

TEST(ToyDataConfig, ParsesPartialJson) {
  const ToyDataConfig c = ToyDataConfig::FromJson(R"({"kind": "blobs", "samples": 50})");
  EXPECT_EQ(c.kind, "blobs");
  EXPECT_EQ(c.samples, 50);
  EXPECT_EQ(c.classes, 3);
  EXPECT_EQ(MakeToyData(c).size(), 50u);
  EXPECT_THROW(ToyDataConfig::FromJson(R"({"sample": 50})"), Error);
  EXPECT_THROW(TrainConfig::FromJson(R"({"epoch": 5})"), Error);
  EXPECT_EQ(TrainConfig::FromJson(R"({"hidden_sizes": [4, 5]})").hidden_sizes,
            (std::vector<int>{4, 5}));
}

TEST(InitModel, HeNormalWeightsAndZeroBiases) {
  Rng rng(3);
  const NetModel m = InitModel(50, {400}, 2, ScalarActivation::ReLU(), rng);
  ASSERT_EQ(m.num_activation_layers(), 1);
  EXPECT_EQ(m.input_dim(), 50);
  EXPECT_EQ(m.num_classes(), 2);
  double sum_sq = 0.0;
  for (double w : m.hidden()[0].weights) sum_sq += w * w;
  const double var = sum_sq / static_cast<double>(m.hidden()[0].weights.size());
  EXPECT_NEAR(var, 2.0 / 50.0, 0.05 * 2.0 / 50.0);
  for (double b : m.hidden()[0].bias) EXPECT_EQ(b, 0.0);
}

TEST(Train, IsDeterministicAndReducesLoss) {
  const Dataset data = MakeToyData(SmallData());
  const TrainResult a = Train(data, SmallTraining());
  const TrainResult b = Train(data, SmallTraining());
  EXPECT_EQ(a.model.ToJson(), b.model.ToJson());
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
  ASSERT_EQ(a.epoch_loss.size(), 15u);
  EXPECT_LT(a.epoch_loss.back(), 0.8 * a.epoch_loss.front());
  EXPECT_EQ(a.train_accuracy, Accuracy(a.model, data));
  EXPECT_GT(a.train_accuracy, 1.0 / 3.0);
}

TEST(Train, RejectsBadConfiguration) {
  const Dataset data = MakeToyData(SmallData());
  TrainConfig c = SmallTraining();
  c.epochs = 0;
  EXPECT_TRUE(Train(data, c).epoch_loss.empty());
  c = SmallTraining();
  c.batch_size = 0;
  EXPECT_THROW(Train(data, c), Error);
  c = SmallTraining();
  c.learning_rate = -1.0;
  EXPECT_THROW(Train(data, c), Error);
  c = SmallTraining();
  c.hidden_sizes = {};
  EXPECT_THROW(Train(data, c), Error);
  EXPECT_THROW(Train(Dataset(), SmallTraining()), Error);
}

}  // namespace
}  // namespace ola

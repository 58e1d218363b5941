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

#ifndef OLA_NET_H_
#define OLA_NET_H_

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ola/activation.h"
#include "ola/series.h"

namespace ola {

// Polynomial on [lo, hi] (boundaries included), exact activation elsewhere.
struct RegionHybrid {
  ScalarActivation base;
  HermiteSeries series;
  double lo;
  double hi;

  bool Contains(double x) const { return x >= lo && x <= hi; }
  double operator()(double x) const { return Contains(x) ? series(x) : base(x); }
  double Derivative(double x) const {
    return Contains(x) ? series.Derivative(x) : base.Derivative(x);
  }
};

using LayerActivation = std::variant<ScalarActivation, HermiteSeries, RegionHybrid>;

double Activate(const LayerActivation& act, double x);
double ActivateDerivative(const LayerActivation& act, double x);

struct DenseLayer {
  // Row-major, out x in.
  std::vector<double> weights;
  std::vector<double> bias;
  int in = 0;
  int out = 0;
  LayerActivation activation = ScalarActivation::Identity();

  double Weight(int row, int col) const { return weights[static_cast<size_t>(row) * in + col]; }
};

struct Sample {
  std::vector<double> features;
  int label = 0;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Sample> samples);

  const std::vector<Sample>& samples() const { return samples_; }
  size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  int feature_dim() const { return feature_dim_; }
  // One past the largest label.
  int num_classes() const { return num_classes_; }

  // Header-free CSV: features, then the integer label.
  static Dataset FromCsv(const std::string& text);
  static Dataset Load(const std::string& path);
  std::string ToCsv() const;

 private:
  std::vector<Sample> samples_;
  int feature_dim_ = 0;
  int num_classes_ = 0;
};

// Dense feed-forward network: hidden layers with scalar activations, then a
// linear output layer feeding softmax cross-entropy. Models are immutable;
// substitution builds a new model.
class NetModel {
 public:
  NetModel(std::vector<DenseLayer> hidden, DenseLayer output);

  const std::vector<DenseLayer>& hidden() const { return hidden_; }
  const DenseLayer& output() const { return output_; }
  int num_activation_layers() const { return static_cast<int>(hidden_.size()); }
  int input_dim() const;
  int num_classes() const { return output_.out; }

  // Returns the hidden layer's activation when it is a plain scalar one.
  const ScalarActivation& ScalarActivationAt(int index) const;

  // {"layers": [{"weights": [[..]], "bias": [..], "activation": ".."}]}; the
  // last entry is the output layer and must be "identity".
  static NetModel FromJson(const std::string& text);
  static NetModel Load(const std::string& path);
  std::string ToJson() const;

  NetModel WithActivation(int index, LayerActivation act) const;

 private:
  std::vector<DenseLayer> hidden_;
  DenseLayer output_;
};

struct ForwardResult {
  std::vector<double> logits;
  // Per hidden layer: inputs to the activation and its outputs.
  std::vector<std::vector<double>> pre_activations;
  std::vector<std::vector<double>> activations;
};

// Throws Error(kNumeric) on non-finite intermediate values.
ForwardResult Forward(const NetModel& model, std::span<const double> input);

// Like Forward but reports non-finite values through the return value.
bool TryForward(const NetModel& model, std::span<const double> input,
                ForwardResult* result);

// Softmax cross-entropy, computed stably.
double CrossEntropy(std::span<const double> logits, int label);

struct BackwardResult {
  double loss = 0.0;
  // dL/da for every activation output a_{i,j}.
  std::vector<std::vector<double>> activation_grads;
  // dL/dW (row-major) and dL/db per layer, hidden layers first, output last.
  std::vector<std::vector<double>> weight_grads;
  std::vector<std::vector<double>> bias_grads;
};

// Exact reverse-mode gradients of the cross-entropy loss.
BackwardResult Backward(const NetModel& model, std::span<const double> input,
                        int label, bool parameter_grads = false);

// Replaces every hidden activation with the matching series. Weights and
// biases are copied unchanged.
NetModel Substitute(const NetModel& model, std::span<const HermiteSeries> series);

// Top-1 accuracy; ties go to the lower class index. Samples whose forward
// pass is non-finite count as misclassified.
double Accuracy(const NetModel& model, const Dataset& data);

// Mean cross-entropy over the dataset. Non-finite forward passes yield +inf.
double MeanLoss(const NetModel& model, const Dataset& data);

// Mean loss with a RegionHybrid(base, series, [lo, hi]) installed at the
// 1-based activation layer `layer` and exact activations elsewhere.
double RegionProbe(const NetModel& model, const Dataset& data, int layer,
                   double lo, double hi, const HermiteSeries& series);

size_t ArgMax(std::span<const double> values);

}  // namespace ola

#endif  // OLA_NET_H_

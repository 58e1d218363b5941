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

#include "ola/net.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ola/error.h"
#include "ola/io.h"
#include "ola/parallel.h"

namespace ola {
namespace {

void CheckLayer(const DenseLayer& layer, const std::string& where) {
  if (layer.in <= 0 || layer.out <= 0) {
    throw Error(ErrorKind::kValidation, where + ": layer dimensions must be positive");
  }
  if (layer.weights.size() != static_cast<size_t>(layer.in) * layer.out ||
      layer.bias.size() != static_cast<size_t>(layer.out)) {
    throw Error(ErrorKind::kValidation, where + ": weight or bias size mismatch");
  }
}

// y = W x + b.
void Affine(const DenseLayer& layer, std::span<const double> x, std::vector<double>& y) {
  y.assign(layer.bias.begin(), layer.bias.end());
  for (int r = 0; r < layer.out; ++r) {
    const double* row = layer.weights.data() + static_cast<size_t>(r) * layer.in;
    double sum = 0.0;
    for (int c = 0; c < layer.in; ++c) sum += row[c] * x[c];
    y[r] += sum;
  }
}

bool AllFinite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

template <class PerSample>
std::vector<double> ChunkedSums(const Dataset& data, PerSample per_sample) {
  const size_t chunks = (data.size() + kSampleChunk - 1) / kSampleChunk;
  std::vector<double> sums(chunks, 0.0);
  ParallelFor(chunks, [&](size_t c) {
    const size_t begin = c * kSampleChunk;
    const size_t end = std::min(data.size(), begin + kSampleChunk);
    double s = 0.0;
    for (size_t i = begin; i < end; ++i) s += per_sample(data.samples()[i]);
    sums[c] = s;
  });
  return sums;
}

}  // namespace

double Activate(const LayerActivation& act, double x) {
  return std::visit([x](const auto& f) { return f(x); }, act);
}

double ActivateDerivative(const LayerActivation& act, double x) {
  return std::visit([x](const auto& f) { return f.Derivative(x); }, act);
}

size_t ArgMax(std::span<const double> values) {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

// ---------------------------------------------------------------- Dataset

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) return;
  feature_dim_ = static_cast<int>(samples_.front().features.size());
  for (const Sample& s : samples_) {
    if (static_cast<int>(s.features.size()) != feature_dim_) {
      throw Error(ErrorKind::kValidation, "dataset rows have differing feature counts");
    }
    if (s.label < 0) throw Error(ErrorKind::kValidation, "dataset label is negative");
    num_classes_ = std::max(num_classes_, s.label + 1);
  }
}

Dataset Dataset::FromCsv(const std::string& text) {
  std::vector<Sample> samples;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> values;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw Error(ErrorKind::kParse,
                    "dataset line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      values.push_back(v);
    }
    if (values.size() < 2) {
      throw Error(ErrorKind::kParse,
                  "dataset line " + std::to_string(line_no) + ": need features and a label");
    }
    const double label = values.back();
    values.pop_back();
    if (label != std::floor(label)) {
      throw Error(ErrorKind::kParse,
                  "dataset line " + std::to_string(line_no) + ": label is not an integer");
    }
    samples.push_back({std::move(values), static_cast<int>(label)});
  }
  return Dataset(std::move(samples));
}

Dataset Dataset::Load(const std::string& path) { return FromCsv(ReadFile(path)); }

std::string Dataset::ToCsv() const {
  std::string out;
  for (const Sample& s : samples_) {
    for (double v : s.features) {
      out += FormatExact(v);
      out += ',';
    }
    out += std::to_string(s.label);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- NetModel

NetModel::NetModel(std::vector<DenseLayer> hidden, DenseLayer output)
    : hidden_(std::move(hidden)), output_(std::move(output)) {
  int prev = -1;
  for (size_t i = 0; i < hidden_.size(); ++i) {
    CheckLayer(hidden_[i], "hidden layer " + std::to_string(i + 1));
    if (prev >= 0 && hidden_[i].in != prev) {
      throw Error(ErrorKind::kValidation,
                  "hidden layer " + std::to_string(i + 1) + " input size does not match");
    }
    prev = hidden_[i].out;
  }
  CheckLayer(output_, "output layer");
  if (prev >= 0 && output_.in != prev) {
    throw Error(ErrorKind::kValidation, "output layer input size does not match");
  }
}

int NetModel::input_dim() const {
  return hidden_.empty() ? output_.in : hidden_.front().in;
}

const ScalarActivation& NetModel::ScalarActivationAt(int index) const {
  if (index < 0 || index >= num_activation_layers()) {
    throw Error(ErrorKind::kInvalidArgument, "activation layer index out of range");
  }
  const auto* act = std::get_if<ScalarActivation>(&hidden_[index].activation);
  if (act == nullptr) {
    throw Error(ErrorKind::kInvalidArgument,
                "activation layer " + std::to_string(index + 1) + " is already substituted");
  }
  return *act;
}

NetModel NetModel::WithActivation(int index, LayerActivation act) const {
  if (index < 0 || index >= num_activation_layers()) {
    throw Error(ErrorKind::kInvalidArgument, "activation layer index out of range");
  }
  std::vector<DenseLayer> hidden = hidden_;
  hidden[index].activation = std::move(act);
  return NetModel(std::move(hidden), output_);
}

NetModel NetModel::FromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("model JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("layers") || !j["layers"].is_array() ||
      j["layers"].empty()) {
    throw Error(ErrorKind::kParse, "model JSON needs a non-empty 'layers' array");
  }
  std::vector<DenseLayer> layers;
  try {
    for (const auto& jl : j["layers"]) {
      DenseLayer layer;
      const auto& rows = jl.at("weights");
      layer.out = static_cast<int>(rows.size());
      layer.in = layer.out > 0 ? static_cast<int>(rows.front().size()) : 0;
      for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != layer.in) {
          throw Error(ErrorKind::kParse, "model JSON: ragged weight matrix");
        }
        for (const auto& v : row) layer.weights.push_back(v.get<double>());
      }
      for (const auto& v : jl.at("bias")) layer.bias.push_back(v.get<double>());
      layer.activation =
          ScalarActivation::FromName(jl.value("activation", std::string("identity")));
      layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("model JSON: ") + e.what());
  }
  DenseLayer output = std::move(layers.back());
  layers.pop_back();
  if (std::get<ScalarActivation>(output.activation).kind() != ActivationKind::kIdentity) {
    throw Error(ErrorKind::kParse, "model JSON: output layer activation must be identity");
  }
  return NetModel(std::move(layers), std::move(output));
}

NetModel NetModel::Load(const std::string& path) { return FromJson(ReadFile(path)); }

std::string NetModel::ToJson() const {
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  auto emit = [&layers](const DenseLayer& layer, const std::string& activation) {
    nlohmann::ordered_json jl;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < layer.out; ++r) {
      rows.push_back(std::vector<double>(
          layer.weights.begin() + static_cast<size_t>(r) * layer.in,
          layer.weights.begin() + static_cast<size_t>(r + 1) * layer.in));
    }
    jl["weights"] = std::move(rows);
    jl["bias"] = layer.bias;
    jl["activation"] = activation;
    layers.push_back(std::move(jl));
  };
  for (int i = 0; i < num_activation_layers(); ++i) {
    emit(hidden_[i], ScalarActivationAt(i).name());
  }
  emit(output_, "identity");
  nlohmann::ordered_json j;
  j["layers"] = std::move(layers);
  return j.dump(1);
}

// ---------------------------------------------------------------- passes

bool TryForward(const NetModel& model, std::span<const double> input,
                ForwardResult* result) {
  if (static_cast<int>(input.size()) != model.input_dim()) {
    throw Error(ErrorKind::kInvalidArgument, "input dimension does not match the model");
  }
  const int n = model.num_activation_layers();
  result->pre_activations.resize(n);
  result->activations.resize(n);
  std::span<const double> x = input;
  for (int i = 0; i < n; ++i) {
    const DenseLayer& layer = model.hidden()[i];
    std::vector<double>& pre = result->pre_activations[i];
    Affine(layer, x, pre);
    std::vector<double>& act = result->activations[i];
    act.resize(pre.size());
    for (size_t j = 0; j < pre.size(); ++j) act[j] = Activate(layer.activation, pre[j]);
    if (!AllFinite(act)) return false;
    x = act;
  }
  Affine(model.output(), x, result->logits);
  return AllFinite(result->logits);
}

ForwardResult Forward(const NetModel& model, std::span<const double> input) {
  ForwardResult result;
  if (!TryForward(model, input, &result)) {
    throw Error(ErrorKind::kNumeric, "forward pass produced a non-finite value");
  }
  return result;
}

double CrossEntropy(std::span<const double> logits, int label) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - m);
  return m + std::log(sum) - logits[label];
}

BackwardResult Backward(const NetModel& model, std::span<const double> input,
                        int label, bool parameter_grads) {
  if (label < 0 || label >= model.num_classes()) {
    throw Error(ErrorKind::kInvalidArgument, "label outside the model's classes");
  }
  const ForwardResult fwd = Forward(model, input);
  const int n = model.num_activation_layers();

  BackwardResult out;
  out.loss = CrossEntropy(fwd.logits, label);
  out.activation_grads.resize(n);
  if (parameter_grads) {
    out.weight_grads.resize(n + 1);
    out.bias_grads.resize(n + 1);
  }

  // delta = dL/d(pre-activation) of the layer being processed.
  std::vector<double> delta = Softmax(fwd.logits);
  delta[label] -= 1.0;

  auto accumulate = [&](int slot, const DenseLayer& layer, std::span<const double> layer_input) {
    if (!parameter_grads) return;
    std::vector<double>& gw = out.weight_grads[slot];
    gw.assign(layer.weights.size(), 0.0);
    for (int r = 0; r < layer.out; ++r) {
      for (int c = 0; c < layer.in; ++c) {
        gw[static_cast<size_t>(r) * layer.in + c] = delta[r] * layer_input[c];
      }
    }
    out.bias_grads[slot] = delta;
  };

  const DenseLayer* upper = &model.output();
  accumulate(n, model.output(),
             n > 0 ? std::span<const double>(fwd.activations[n - 1]) : input);
  for (int i = n - 1; i >= 0; --i) {
    std::vector<double>& grad_a = out.activation_grads[i];
    grad_a.assign(upper->in, 0.0);
    for (int r = 0; r < upper->out; ++r) {
      const double d = delta[r];
      const double* row = upper->weights.data() + static_cast<size_t>(r) * upper->in;
      for (int c = 0; c < upper->in; ++c) grad_a[c] += row[c] * d;
    }
    const DenseLayer& layer = model.hidden()[i];
    delta.resize(layer.out);
    for (int j = 0; j < layer.out; ++j) {
      delta[j] = grad_a[j] * ActivateDerivative(layer.activation, fwd.pre_activations[i][j]);
    }
    accumulate(i, layer, i > 0 ? std::span<const double>(fwd.activations[i - 1]) : input);
    upper = &layer;
  }

  for (const auto& g : out.activation_grads) {
    if (!AllFinite(g)) throw Error(ErrorKind::kNumeric, "backward pass produced a non-finite gradient");
  }
  return out;
}

NetModel Substitute(const NetModel& model, std::span<const HermiteSeries> series) {
  if (static_cast<int>(series.size()) != model.num_activation_layers()) {
    throw Error(ErrorKind::kInvalidArgument,
                "substitution needs " + std::to_string(model.num_activation_layers()) +
                    " series, got " + std::to_string(series.size()));
  }
  std::vector<DenseLayer> hidden = model.hidden();
  for (size_t i = 0; i < hidden.size(); ++i) hidden[i].activation = series[i];
  return NetModel(std::move(hidden), model.output());
}

double Accuracy(const NetModel& model, const Dataset& data) {
  if (data.empty()) return 0.0;
  const std::vector<double> sums = ChunkedSums(data, [&](const Sample& s) {
    ForwardResult fwd;
    if (!TryForward(model, s.features, &fwd)) return 0.0;
    return static_cast<int>(ArgMax(fwd.logits)) == s.label ? 1.0 : 0.0;
  });
  double correct = 0.0;
  for (double s : sums) correct += s;
  return correct / static_cast<double>(data.size());
}

double MeanLoss(const NetModel& model, const Dataset& data) {
  if (data.empty()) return 0.0;
  const std::vector<double> sums = ChunkedSums(data, [&](const Sample& s) {
    ForwardResult fwd;
    if (!TryForward(model, s.features, &fwd)) return std::numeric_limits<double>::infinity();
    return CrossEntropy(fwd.logits, s.label);
  });
  double total = 0.0;
  for (double s : sums) total += s;
  return total / static_cast<double>(data.size());
}

double RegionProbe(const NetModel& model, const Dataset& data, int layer,
                   double lo, double hi, const HermiteSeries& series) {
  if (layer < 1 || layer > model.num_activation_layers()) {
    throw Error(ErrorKind::kInvalidArgument, "probe layer out of range");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw Error(ErrorKind::kInvalidArgument, "probe region must be a finite interval");
  }
  const ScalarActivation& base = model.ScalarActivationAt(layer - 1);
  const NetModel probed =
      model.WithActivation(layer - 1, RegionHybrid{base, series, lo, hi});
  return MeanLoss(probed, data);
}

}  // namespace ola

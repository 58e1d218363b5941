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

#ifndef OLA_SENSITIVITY_H_
#define OLA_SENSITIVITY_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ola/net.h"

namespace ola {

// One-pass mean and population variance with an associative merge.
class Welford {
 public:
  void Add(double x);
  void Merge(const Welford& other);

  int64_t count() const { return count_; }
  double mean() const { return mean_; }
  // Population variance (divides by the count).
  double variance() const { return count_ > 0 ? m2_ / static_cast<double>(count_) : 0.0; }

 private:
  int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct LayerStats {
  int layer = 0;  // 1-based
  double mu = 0.0;
  double sigma = 0.0;
  // Dataset mean of sum_j (dL/da_{i,j})^2.
  double A = 0.0;
  int n_nodes = 0;
};

struct SensitivityProfile {
  std::vector<LayerStats> layers;
  int n_train = 0;

  // JSON array of {layer, mu, sigma, A, n_nodes, n_train}; n_train repeats
  // in every element.
  std::string ToJson() const;
  static SensitivityProfile FromJson(const std::string& text);
};

// Pools the activation inputs of each hidden layer over all nodes and samples
// and averages the squared activation gradients of the clean model.
// Throws DegenerateLayerError for a layer with zero input variance.
SensitivityProfile CollectStats(const NetModel& model, const Dataset& data);

// Degree -> E_i(d).
using MseTable = std::map<int, double>;

// E_i(d) with the sentinel degree -1 mapping to +infinity. Throws
// Error(kLookup) for a degree missing from the table.
double LookupMse(const MseTable& table, int degree, int layer);

// Contribution A_i E_i(d) of one layer. The sentinel gives +infinity even for
// A_i = 0.
double LayerLoss(double A, const MseTable& table, int degree, int layer);

// V(d) = sum_i A_i E_i(d_i), summed in layer order.
double LossVariance(const SensitivityProfile& profile,
                    std::span<const MseTable> mse_tables,
                    std::span<const int> degrees);

}  // namespace ola

#endif  // OLA_SENSITIVITY_H_

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

#ifndef OLA_ACTIVATION_H_
#define OLA_ACTIVATION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ola {

enum class ActivationKind { kReLU, kGELU, kIdentity, kTabulated };

struct TablePoint {
  double x;
  double y;
};

// An x-interval on which the function varies on a fixed length scale. Used to
// pick quadrature resolution for smooth but sharp activations.
struct FeatureWindow {
  double lo;
  double hi;
  double length_scale;
};

// Scalar activation function. GELU is the exact form x * Phi(x). Tabulated
// activations interpolate linearly between table points and extrapolate the
// end segments.
class ScalarActivation {
 public:
  static ScalarActivation ReLU();
  static ScalarActivation GELU();
  static ScalarActivation Identity();
  // Requires at least two points with strictly increasing x.
  static ScalarActivation Tabulated(std::vector<TablePoint> table);

  // Accepts "relu", "gelu", "identity".
  static ScalarActivation FromName(std::string_view name);

  ActivationKind kind() const { return kind_; }
  const std::vector<TablePoint>& table() const { return table_; }
  std::string name() const;

  double operator()(double x) const;
  // Right derivative at kinks, except ReLU'(0) = 0.
  double Derivative(double x) const;

  // Points where the function is not differentiable.
  std::vector<double> Kinks() const;
  std::optional<FeatureWindow> Feature() const;

 private:
  explicit ScalarActivation(ActivationKind kind) : kind_(kind) {}

  size_t Segment(double x) const;

  ActivationKind kind_;
  std::vector<TablePoint> table_;
};

// Standard normal CDF.
double NormalCdf(double x);

}  // namespace ola

#endif  // OLA_ACTIVATION_H_

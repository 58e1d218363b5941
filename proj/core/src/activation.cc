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

#include "ola/activation.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ola/error.h"

namespace ola {

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

ScalarActivation ScalarActivation::ReLU() {
  return ScalarActivation(ActivationKind::kReLU);
}

ScalarActivation ScalarActivation::GELU() {
  return ScalarActivation(ActivationKind::kGELU);
}

ScalarActivation ScalarActivation::Identity() {
  return ScalarActivation(ActivationKind::kIdentity);
}

ScalarActivation ScalarActivation::Tabulated(std::vector<TablePoint> table) {
  if (table.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "tabulated activation needs at least two points");
  }
  for (size_t i = 0; i < table.size(); ++i) {
    if (!std::isfinite(table[i].x) || !std::isfinite(table[i].y)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "tabulated activation has a non-finite entry");
    }
    if (i > 0 && !(table[i].x > table[i - 1].x)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "tabulated activation x values must be strictly increasing");
    }
  }
  ScalarActivation act(ActivationKind::kTabulated);
  act.table_ = std::move(table);
  return act;
}

ScalarActivation ScalarActivation::FromName(std::string_view name) {
  if (name == "relu") return ReLU();
  if (name == "gelu") return GELU();
  if (name == "identity") return Identity();
  throw Error(ErrorKind::kParse,
              "unknown activation '" + std::string(name) + "'");
}

std::string ScalarActivation::name() const {
  switch (kind_) {
    case ActivationKind::kReLU:
      return "relu";
    case ActivationKind::kGELU:
      return "gelu";
    case ActivationKind::kIdentity:
      return "identity";
    case ActivationKind::kTabulated:
      return "tabulated";
  }
  return "unknown";
}

size_t ScalarActivation::Segment(double x) const {
  // Index i of the segment [x_i, x_{i+1}] used for x; end segments extend.
  auto it = std::upper_bound(table_.begin(), table_.end(), x,
                             [](double v, const TablePoint& p) { return v < p.x; });
  size_t i = it == table_.begin() ? 0 : static_cast<size_t>(it - table_.begin()) - 1;
  return std::min(i, table_.size() - 2);
}

double ScalarActivation::operator()(double x) const {
  switch (kind_) {
    case ActivationKind::kReLU:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::kGELU:
      return x * NormalCdf(x);
    case ActivationKind::kIdentity:
      return x;
    case ActivationKind::kTabulated: {
      const size_t i = Segment(x);
      const TablePoint& a = table_[i];
      const TablePoint& b = table_[i + 1];
      return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
    }
  }
  return 0.0;
}

double ScalarActivation::Derivative(double x) const {
  switch (kind_) {
    case ActivationKind::kReLU:
      return x > 0.0 ? 1.0 : 0.0;
    case ActivationKind::kGELU:
      return NormalCdf(x) +
             x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case ActivationKind::kIdentity:
      return 1.0;
    case ActivationKind::kTabulated: {
      const size_t i = Segment(x);
      const TablePoint& a = table_[i];
      const TablePoint& b = table_[i + 1];
      return (b.y - a.y) / (b.x - a.x);
    }
  }
  return 0.0;
}

std::vector<double> ScalarActivation::Kinks() const {
  switch (kind_) {
    case ActivationKind::kReLU:
      return {0.0};
    case ActivationKind::kTabulated: {
      // End segments extend, so only interior points are kinks.
      std::vector<double> xs;
      for (size_t i = 1; i + 1 < table_.size(); ++i) xs.push_back(table_[i].x);
      return xs;
    }
    case ActivationKind::kGELU:
    case ActivationKind::kIdentity:
      break;
  }
  return {};
}

std::optional<FeatureWindow> ScalarActivation::Feature() const {
  // Phi(x) saturates to double precision outside |x| <= 10.
  if (kind_ == ActivationKind::kGELU) return FeatureWindow{-10.0, 10.0, 1.0};
  return std::nullopt;
}

}  // namespace ola

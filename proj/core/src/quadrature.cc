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

#include "ola/quadrature.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include <Eigen/Eigenvalues>

#include "ola/error.h"

namespace ola {
namespace {

// Evaluates h_{n-1}(x) and h_n(x) up to a common factor exp(log_scale); the
// raw recurrence overflows for large n in the tails.
struct ScaledPair {
  double prev;
  double cur;
  double log_scale;
};

ScaledPair ScaledHermitePair(int n, double x) {
  constexpr double kLimit = 1e150;
  double prev = 1.0;
  double cur = x;
  double log_scale = 0.0;
  for (int l = 1; l < n; ++l) {
    const double next = (x * cur - std::sqrt(static_cast<double>(l)) * prev) /
                        std::sqrt(static_cast<double>(l + 1));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kLimit) {
      prev /= kLimit;
      cur /= kLimit;
      log_scale += std::log(kLimit);
    }
  }
  return {prev, cur, log_scale};
}

double StandardNormalDensity(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

QuadratureRule ComputeGaussHermiteRule(int num_nodes) {
  if (num_nodes < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "Gauss-Hermite rule needs at least one node");
  }
  const int n = num_nodes;
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {1.0};
    return rule;
  }

  // Golub-Welsch: the Jacobi matrix of the orthonormal recurrence has zero
  // diagonal and sqrt(k) off the diagonal.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumeric, "Gauss-Hermite eigenvalue solve failed");
  }

  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    // Newton polish on h_n, using h_n' = sqrt(n) h_{n-1}.
    for (int iter = 0; iter < 3; ++iter) {
      const ScaledPair p = ScaledHermitePair(n, x);
      x -= p.cur / (sqrt_n * p.prev);
    }
    const ScaledPair p = ScaledHermitePair(n, x);
    const double log_w = -std::log(static_cast<double>(n)) -
                         2.0 * (std::log(std::abs(p.prev)) + p.log_scale);
    rule.nodes[i] = x;
    rule.weights[i] = std::exp(log_w);
  }

  // Enforce the exact symmetry of the rule.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const QuadratureRule& GaussHermiteRule(int num_nodes) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[num_nodes];
  if (!slot) {
    slot = std::make_unique<QuadratureRule>(ComputeGaussHermiteRule(num_nodes));
  }
  return *slot;
}

QuadratureRule ComputeGaussLegendreRule(int num_nodes) {
  if (num_nodes < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "Gauss-Legendre rule needs at least one node");
  }
  const int n = num_nodes;
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Returns (P_n(x), P_n'(x)).
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule CompositeNormalRule(std::span<const double> breakpoints,
                                   double panel_width,
                                   std::optional<PanelRefinement> refinement,
                                   int points_per_panel) {
  if (!(panel_width > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "panel width must be positive");
  }
  const double lo = -kNormalTruncation;
  const double hi = kNormalTruncation;

  std::vector<double> edges;
  const int base_panels = static_cast<int>(std::ceil((hi - lo) / panel_width));
  for (int i = 0; i <= base_panels; ++i) {
    edges.push_back(std::min(hi, lo + i * (hi - lo) / base_panels));
  }
  for (double b : breakpoints) {
    if (b > lo && b < hi) edges.push_back(b);
  }
  if (refinement && refinement->panel_width > 0.0) {
    const double a = std::max(lo, refinement->lo);
    const double b = std::min(hi, refinement->hi);
    if (b > a) {
      const int m = static_cast<int>(std::ceil((b - a) / refinement->panel_width));
      for (int i = 0; i <= m; ++i) edges.push_back(a + i * (b - a) / m);
    }
  }
  std::sort(edges.begin(), edges.end());
  std::vector<double> unique_edges;
  for (double e : edges) {
    if (unique_edges.empty() || e - unique_edges.back() > 1e-12) {
      unique_edges.push_back(e);
    }
  }

  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> legendre_cache;
  const QuadratureRule* legendre = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = legendre_cache[points_per_panel];
    if (!slot) {
      slot = std::make_unique<QuadratureRule>(
          ComputeGaussLegendreRule(points_per_panel));
    }
    legendre = slot.get();
  }

  QuadratureRule rule;
  rule.nodes.reserve(unique_edges.size() * points_per_panel);
  rule.weights.reserve(unique_edges.size() * points_per_panel);
  for (size_t p = 0; p + 1 < unique_edges.size(); ++p) {
    const double a = unique_edges[p];
    const double b = unique_edges[p + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (size_t k = 0; k < legendre->size(); ++k) {
      const double z = mid + half * legendre->nodes[k];
      const double w = half * legendre->weights[k] * StandardNormalDensity(z);
      if (w == 0.0) continue;
      rule.nodes.push_back(z);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

}  // namespace ola

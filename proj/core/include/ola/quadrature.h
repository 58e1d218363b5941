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

#ifndef OLA_QUADRATURE_H_
#define OLA_QUADRATURE_H_

#include <optional>
#include <span>
#include <vector>

namespace ola {

// Nodes in the standardized coordinate z. Weights already include the
// standard normal density, so sum_k w_k g(z_k) approximates E[g(Z)].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  size_t size() const { return nodes.size(); }
};

inline constexpr int kDefaultGaussHermiteNodes = 512;

// Gauss-Hermite rule for the standard normal weight. Rules are computed once
// per node count and shared; the returned reference stays valid for the
// lifetime of the program.
const QuadratureRule& GaussHermiteRule(int num_nodes);

// Uncached computation, exposed for tests and benchmarks.
QuadratureRule ComputeGaussHermiteRule(int num_nodes);

// Gauss-Legendre nodes and weights on [-1, 1].
QuadratureRule ComputeGaussLegendreRule(int num_nodes);

// Beyond this |z| the standard normal density underflows to zero.
inline constexpr double kNormalTruncation = 40.0;

struct PanelRefinement {
  double lo;
  double hi;
  double panel_width;
};

// Composite Gauss-Legendre rule for the standard normal weight on
// [-kNormalTruncation, kNormalTruncation]. Panel edges are placed on a uniform
// grid of `panel_width` plus every entry of `breakpoints`, so integrands that
// are smooth between breakpoints converge geometrically in the panel order.
QuadratureRule CompositeNormalRule(std::span<const double> breakpoints,
                                   double panel_width,
                                   std::optional<PanelRefinement> refinement,
                                   int points_per_panel = 20);

}  // namespace ola

#endif  // OLA_QUADRATURE_H_

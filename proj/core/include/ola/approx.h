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

#ifndef OLA_APPROX_H_
#define OLA_APPROX_H_

#include <map>
#include <vector>

#include "ola/activation.h"
#include "ola/quadrature.h"
#include "ola/series.h"

namespace ola {

// The fitting weight N(mu, (r sigma)^2). r >= 1 widens the distribution the
// fit is accurate on.
class GaussianWeight {
 public:
  GaussianWeight(double mu, double sigma, double r = 1.0);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double r() const { return r_; }
  double sigma_eff() const { return r_ * sigma_; }

 private:
  double mu_;
  double sigma_;
  double r_;
};

struct FitOptions {
  int gauss_hermite_nodes = kDefaultGaussHermiteNodes;
  // Absolute tolerance on each coefficient between the default and the
  // refined rule, scaled by max(1, ||f||).
  double refinement_tolerance = 1e-10;
  bool verify_refinement = true;
};

// Values in [-kMseClampThreshold, 0) clamp to zero; anything more negative is
// a quadrature inconsistency.
inline constexpr double kMseClampThreshold = 1e-9;

// Quadrature rule, in the standardized coordinate of `w`, that fit and mse
// use for `f`. Kinked activations get a composite rule split at every kink;
// smooth activations use Gauss-Hermite unless the weight is so wide that the
// activation's feature scale is under-resolved by the Gauss-Hermite nodes.
QuadratureRule RuleFor(const ScalarActivation& f, const GaussianWeight& w,
                       bool refined, const FitOptions& options = {});

// Least-squares polynomial of degree `degree` under the weight `w`:
//   c_l = E[f(mu + sigma_eff Z) h_l(Z)],  Z ~ N(0, 1).
// Throws QuadratureError if a coefficient moves by more than the tolerance
// when the rule is refined.
HermiteSeries Fit(const ScalarActivation& f, const GaussianWeight& w, int degree,
                  const FitOptions& options = {});

// <f, f> under the weight.
double Energy(const ScalarActivation& f, const GaussianWeight& w,
              const FitOptions& options = {});

// Parseval form <f, f> - sum_l c_l^2. `p` must come from Fit(f, w, .).
double Mse(const ScalarActivation& f, const GaussianWeight& w,
           const HermiteSeries& p, const FitOptions& options = {});

// Direct quadrature of E[(f - p)^2] on the refined rule.
double DirectMse(const ScalarActivation& f, const GaussianWeight& w,
                 const HermiteSeries& p, const FitOptions& options = {});

// E[f - p] on the refined rule. Zero for a least-squares fit.
double MeanResidual(const ScalarActivation& f, const GaussianWeight& w,
                    const HermiteSeries& p, const FitOptions& options = {});

struct MseReport {
  std::map<int, double> by_degree;
  double total_energy = 0.0;
};

// MSE of the least-squares fit at every degree 0..max_degree from a single
// max_degree fit.
MseReport MseByDegree(const ScalarActivation& f, const GaussianWeight& w,
                      int max_degree, const FitOptions& options = {});

}  // namespace ola

#endif  // OLA_APPROX_H_

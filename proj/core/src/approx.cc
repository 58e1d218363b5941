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

#include "ola/approx.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ola/error.h"
#include "ola/hermite.h"

namespace ola {
namespace {

constexpr double kPanelWidth = 0.5;
// Gauss-Hermite resolves a smooth feature only while sigma_eff stays within
// this multiple of the feature's length scale.
constexpr double kMaxFeatureStretch = 4.0;

struct Projection {
  std::vector<double> coeffs;
  double energy = 0.0;
};

Projection Project(const ScalarActivation& f, const GaussianWeight& w,
                   int degree, const QuadratureRule& rule) {
  Projection out;
  out.coeffs.assign(degree + 1, 0.0);
  std::vector<double> basis(degree + 1);
  for (size_t k = 0; k < rule.size(); ++k) {
    const double z = rule.nodes[k];
    const double fv = f(w.mu() + w.sigma_eff() * z);
    const double wf = rule.weights[k] * fv;
    out.energy += wf * fv;
    HermiteOrthoAll(z, basis);
    for (int l = 0; l <= degree; ++l) out.coeffs[l] += wf * basis[l];
  }
  return out;
}

void CheckDegree(int degree) {
  if (degree < 0 || degree > kMaxDegree) {
    throw Error(ErrorKind::kInvalidArgument,
                "degree " + std::to_string(degree) + " outside [0, " +
                    std::to_string(kMaxDegree) + "]");
  }
}

void CheckSeriesMatchesWeight(const HermiteSeries& p, const GaussianWeight& w) {
  if (p.mu() != w.mu() || p.sigma_eff() != w.sigma_eff()) {
    throw Error(ErrorKind::kInvalidArgument,
                "series was not fitted under the given weight");
  }
}

double ClampMse(double value) {
  if (value >= 0.0) return value;
  if (value >= -kMseClampThreshold) return 0.0;
  throw Error(ErrorKind::kQuadrature,
              "Parseval MSE is negative (" + FormatExact(value) +
                  "); quadrature is inconsistent");
}

}  // namespace

GaussianWeight::GaussianWeight(double mu, double sigma, double r)
    : mu_(mu), sigma_(sigma), r_(r) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "weight needs finite mu and positive sigma");
  }
  if (!std::isfinite(r) || !(r >= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "scale ratio r must be >= 1");
  }
}

QuadratureRule RuleFor(const ScalarActivation& f, const GaussianWeight& w,
                       bool refined, const FitOptions& options) {
  const double s = w.sigma_eff();
  std::vector<double> breakpoints;
  for (double kink : f.Kinks()) breakpoints.push_back((kink - w.mu()) / s);

  std::optional<PanelRefinement> refinement;
  if (auto feature = f.Feature(); feature && s > kMaxFeatureStretch * feature->length_scale) {
    refinement = PanelRefinement{
        (feature->lo - w.mu()) / s, (feature->hi - w.mu()) / s,
        std::min(kPanelWidth, kPanelWidth * feature->length_scale / s)};
  }

  if (breakpoints.empty() && !refinement) {
    const int n = options.gauss_hermite_nodes * (refined ? 2 : 1);
    return GaussHermiteRule(n);
  }
  const double scale = refined ? 0.5 : 1.0;
  if (refinement) refinement->panel_width *= scale;
  return CompositeNormalRule(breakpoints, kPanelWidth * scale, refinement);
}

HermiteSeries Fit(const ScalarActivation& f, const GaussianWeight& w, int degree,
                  const FitOptions& options) {
  CheckDegree(degree);
  Projection coarse = Project(f, w, degree, RuleFor(f, w, false, options));
  if (options.verify_refinement) {
    const Projection fine = Project(f, w, degree, RuleFor(f, w, true, options));
    const double tol =
        options.refinement_tolerance * std::max(1.0, std::sqrt(coarse.energy));
    for (int l = 0; l <= degree; ++l) {
      if (!(std::abs(coarse.coeffs[l] - fine.coeffs[l]) <= tol)) {
        throw QuadratureError(l, coarse.coeffs[l], fine.coeffs[l]);
      }
    }
  }
  return HermiteSeries(w.mu(), w.sigma_eff(), std::move(coarse.coeffs));
}

double Energy(const ScalarActivation& f, const GaussianWeight& w,
              const FitOptions& options) {
  return Project(f, w, 0, RuleFor(f, w, false, options)).energy;
}

double Mse(const ScalarActivation& f, const GaussianWeight& w,
           const HermiteSeries& p, const FitOptions& options) {
  CheckSeriesMatchesWeight(p, w);
  double value = Energy(f, w, options);
  for (double c : p.coeffs()) value -= c * c;
  return ClampMse(value);
}

double DirectMse(const ScalarActivation& f, const GaussianWeight& w,
                 const HermiteSeries& p, const FitOptions& options) {
  const QuadratureRule rule = RuleFor(f, w, true, options);
  double sum = 0.0;
  for (size_t k = 0; k < rule.size(); ++k) {
    const double x = w.mu() + w.sigma_eff() * rule.nodes[k];
    const double r = f(x) - p(x);
    sum += rule.weights[k] * r * r;
  }
  return sum;
}

double MeanResidual(const ScalarActivation& f, const GaussianWeight& w,
                    const HermiteSeries& p, const FitOptions& options) {
  const QuadratureRule rule = RuleFor(f, w, true, options);
  double sum = 0.0;
  for (size_t k = 0; k < rule.size(); ++k) {
    const double x = w.mu() + w.sigma_eff() * rule.nodes[k];
    sum += rule.weights[k] * (f(x) - p(x));
  }
  return sum;
}

MseReport MseByDegree(const ScalarActivation& f, const GaussianWeight& w,
                      int max_degree, const FitOptions& options) {
  const HermiteSeries p = Fit(f, w, max_degree, options);
  MseReport report;
  report.total_energy = Energy(f, w, options);
  double captured = 0.0;
  for (int d = 0; d <= max_degree; ++d) {
    const double c = p.coeffs()[d];
    captured += c * c;
    report.by_degree[d] = ClampMse(report.total_energy - captured);
  }
  return report;
}

}  // namespace ola

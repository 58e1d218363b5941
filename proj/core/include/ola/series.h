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

#ifndef OLA_SERIES_H_
#define OLA_SERIES_H_

#include <span>
#include <string>
#include <vector>

namespace ola {

inline constexpr int kMaxDegree = 255;

// Polynomial stored in the shifted and scaled orthonormal Hermite basis:
//   p(x) = sum_l c_l h_l((x - mu) / sigma_eff).
// The series is never converted to monomial coefficients.
class HermiteSeries {
 public:
  HermiteSeries(double mu, double sigma_eff, std::vector<double> coeffs);

  double mu() const { return mu_; }
  double sigma_eff() const { return sigma_eff_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const { return coeffs_; }

  double operator()(double x) const;
  double Derivative(double x) const;

  // The first degree+1 coefficients. Orthonormality makes this the
  // least-squares fit of that degree when the series itself is one.
  HermiteSeries Truncated(int degree) const;

  // {"mu": "..", "sigma_eff": "..", "degree": d, "coeffs": ["..", ..]} with
  // 17 significant digits per value.
  std::string ToJson() const;
  static HermiteSeries FromJson(const std::string& text);

  friend bool operator==(const HermiteSeries&, const HermiteSeries&) = default;

 private:
  double mu_;
  double sigma_eff_;
  std::vector<double> coeffs_;
};

// "%.17g" rendering; parses back to the identical double.
std::string FormatExact(double value);

}  // namespace ola

#endif  // OLA_SERIES_H_

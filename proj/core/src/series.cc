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

#include "ola/series.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "ola/error.h"

namespace ola {
namespace {

double ParseNumber(const nlohmann::json& value, const char* field) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string& s = value.get_ref<const std::string&>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() && *end == '\0') return v;
  }
  throw Error(ErrorKind::kParse, std::string("series field '") + field +
                                     "' is not a decimal number");
}

// sqrt(l) for l = 0 .. kMaxDegree + 1.
const std::array<double, kMaxDegree + 2>& Roots() {
  static const std::array<double, kMaxDegree + 2> table = [] {
    std::array<double, kMaxDegree + 2> t{};
    for (size_t i = 0; i < t.size(); ++i) t[i] = std::sqrt(static_cast<double>(i));
    return t;
  }();
  return table;
}

}  // namespace

std::string FormatExact(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

HermiteSeries::HermiteSeries(double mu, double sigma_eff,
                             std::vector<double> coeffs)
    : mu_(mu), sigma_eff_(sigma_eff), coeffs_(std::move(coeffs)) {
  if (!std::isfinite(mu_) || !(sigma_eff_ > 0.0) || !std::isfinite(sigma_eff_)) {
    throw Error(ErrorKind::kInvalidArgument,
                "series needs finite mu and positive sigma_eff");
  }
  if (coeffs_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "series needs at least one coefficient");
  }
  if (degree() > kMaxDegree) {
    throw Error(ErrorKind::kInvalidArgument,
                "series degree " + std::to_string(degree()) +
                    " exceeds the supported maximum " + std::to_string(kMaxDegree));
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) {
      throw Error(ErrorKind::kNumeric, "series coefficient is not finite");
    }
  }
}

double HermiteSeries::operator()(double x) const {
  const double z = (x - mu_) / sigma_eff_;
  double sum = coeffs_[0];
  if (coeffs_.size() == 1) return sum;
  const auto& roots = Roots();
  double prev = 1.0;
  double cur = z;
  sum += coeffs_[1] * cur;
  for (size_t l = 1; l + 1 < coeffs_.size(); ++l) {
    const double next = (z * cur - roots[l] * prev) / roots[l + 1];
    prev = cur;
    cur = next;
    sum += coeffs_[l + 1] * cur;
  }
  return sum;
}

double HermiteSeries::Derivative(double x) const {
  // h_l' = sqrt(l) h_{l-1}.
  const double z = (x - mu_) / sigma_eff_;
  if (coeffs_.size() == 1) return 0.0;
  const auto& roots = Roots();
  double sum = coeffs_[1];
  double prev = 1.0;
  double cur = z;
  for (size_t l = 1; l + 1 < coeffs_.size(); ++l) {
    sum += coeffs_[l + 1] * roots[l + 1] * cur;
    const double next = (z * cur - roots[l] * prev) / roots[l + 1];
    prev = cur;
    cur = next;
  }
  return sum / sigma_eff_;
}

HermiteSeries HermiteSeries::Truncated(int degree) const {
  if (degree < 0 || degree > this->degree()) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot truncate a degree-" + std::to_string(this->degree()) +
                    " series to degree " + std::to_string(degree));
  }
  return HermiteSeries(mu_, sigma_eff_,
                       std::vector<double>(coeffs_.begin(),
                                           coeffs_.begin() + degree + 1));
}

std::string HermiteSeries::ToJson() const {
  nlohmann::ordered_json j;
  j["mu"] = FormatExact(mu_);
  j["sigma_eff"] = FormatExact(sigma_eff_);
  j["degree"] = degree();
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
  for (double c : coeffs_) coeffs.push_back(FormatExact(c));
  j["coeffs"] = std::move(coeffs);
  return j.dump(2);
}

HermiteSeries HermiteSeries::FromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("series JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("mu") || !j.contains("sigma_eff") ||
      !j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw Error(ErrorKind::kParse,
                "series JSON needs 'mu', 'sigma_eff' and a 'coeffs' array");
  }
  std::vector<double> coeffs;
  for (const auto& c : j["coeffs"]) coeffs.push_back(ParseNumber(c, "coeffs"));
  HermiteSeries series(ParseNumber(j["mu"], "mu"),
                       ParseNumber(j["sigma_eff"], "sigma_eff"), std::move(coeffs));
  if (j.contains("degree") && j["degree"].get<int>() != series.degree()) {
    throw Error(ErrorKind::kParse, "series 'degree' disagrees with coefficient count");
  }
  return series;
}

}  // namespace ola

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

#include "ola/hermite.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

namespace ola {
namespace {

TEST(HermiteOrtho, LowDegreesMatchExpandedForms) {
  EXPECT_EQ(HermiteOrtho(0, 3.7), 1.0);
  EXPECT_EQ(HermiteOrtho(1, 2.0), 2.0);
  EXPECT_NEAR(HermiteOrtho(2, 2.0), 3.0 / std::sqrt(2.0), 1e-15);
  for (double x : {-3.0, -0.5, 0.0, 0.25, 1.7, 4.0}) {
    EXPECT_NEAR(HermiteOrtho(2, x), (x * x - 1) / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(HermiteOrtho(3, x), (x * x * x - 3 * x) / std::sqrt(6.0), 1e-13);
    EXPECT_NEAR(HermiteOrtho(4, x), (std::pow(x, 4) - 6 * x * x + 3) / std::sqrt(24.0), 1e-13);
  }
}

// Probabilists' He_n from its own recurrence He_{n+1} = x He_n - n He_{n-1},
// normalized by sqrt(n!).
double Reference(int n, double x) {
  double prev = 1.0;
  double cur = x;
  if (n == 0) return 1.0;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur / std::sqrt(std::tgamma(n + 1.0));
}

TEST(HermiteOrtho, MatchesUnnormalizedRecurrence) {
  for (int n = 0; n <= 30; ++n) {
    for (double x : {-2.5, 0.3, 1.0, 3.3}) {
      const double ref = Reference(n, x);
      EXPECT_NEAR(HermiteOrtho(n, x), ref, 1e-11 * std::max(1.0, std::abs(ref))) << n << " " << x;
    }
  }
}

TEST(HermiteOrtho, ParityProperty) {
  for (int n = 0; n <= 40; ++n) {
    for (double x : {0.1, 1.3, 5.0}) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      EXPECT_EQ(HermiteOrtho(n, -x), sign * HermiteOrtho(n, x));
    }
  }
}

TEST(HermiteOrthoAll, AgreesWithSingleEvaluation) {
  std::vector<double> all(256);
  for (double x : {-7.0, -1.1, 0.0, 2.2, 9.5}) {
    HermiteOrthoAll(x, all);
    for (int n = 0; n < 256; ++n) EXPECT_EQ(all[n], HermiteOrtho(n, x)) << n;
  }
}

}  // namespace
}  // namespace ola

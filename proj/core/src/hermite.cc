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

#include <array>
#include <cmath>

namespace ola {
namespace {

constexpr int kRootTableSize = 2048;

const std::array<double, kRootTableSize>& RootTable() {
  static const std::array<double, kRootTableSize> table = [] {
    std::array<double, kRootTableSize> t{};
    for (int i = 0; i < kRootTableSize; ++i) t[i] = std::sqrt(static_cast<double>(i));
    return t;
  }();
  return table;
}

inline double Root(const std::array<double, kRootTableSize>& table, size_t i) {
  return i < table.size() ? table[i] : std::sqrt(static_cast<double>(i));
}

}  // namespace

double HermiteOrtho(int degree, double x) {
  if (degree <= 0) return 1.0;
  const auto& roots = RootTable();
  double prev = 1.0;
  double cur = x;
  for (int l = 1; l < degree; ++l) {
    const double next = (x * cur - Root(roots, l) * prev) / Root(roots, l + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

void HermiteOrthoAll(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  const auto& roots = RootTable();
  for (size_t l = 1; l + 1 < out.size(); ++l) {
    out[l + 1] = (x * out[l] - Root(roots, l) * out[l - 1]) / Root(roots, l + 1);
  }
}

}  // namespace ola

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

#ifndef OLA_HERMITE_H_
#define OLA_HERMITE_H_

#include <span>

namespace ola {

// Degree-l Hermite polynomial orthonormal under the standard normal weight,
// evaluated with the three-term recurrence
//   h_0 = 1, h_1 = x, h_{l+1} = (x h_l - sqrt(l) h_{l-1}) / sqrt(l + 1).
double HermiteOrtho(int degree, double x);

// Writes h_0(x) .. h_{out.size()-1}(x) into `out`.
void HermiteOrthoAll(double x, std::span<double> out);

}  // namespace ola

#endif  // OLA_HERMITE_H_

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

#ifndef OLA_RUNTIME_MODEL_H_
#define OLA_RUNTIME_MODEL_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ola {

// Degree meaning "no feasible polynomial": zero cost, infinite MSE.
inline constexpr int kSentinelDegree = -1;

// Candidate degrees, strictly increasing within [1, kMaxDegree]. The sentinel
// is implicit.
class DegreeSpace {
 public:
  explicit DegreeSpace(std::vector<int> degrees);

  // {3, 7, 15, 31, 63, 88, 127, 154, 210, 255}: the 2^m - 1 degrees plus
  // three fill-ins that even out the runtime spacing.
  static DegreeSpace Default();
  // Comma-separated list, e.g. "3,7,15".
  static DegreeSpace Parse(std::string_view text);

  const std::vector<int>& degrees() const { return degrees_; }
  size_t size() const { return degrees_.size(); }
  int max_degree() const { return degrees_.back(); }
  bool Contains(int degree) const;

 private:
  std::vector<int> degrees_;
};

// Measured or synthetic per-layer latency T_i(d) in seconds.
class RuntimeProfile {
 public:
  // Validates coverage of `space`, positivity and monotonicity in degree.
  RuntimeProfile(std::vector<std::map<int, double>> per_layer,
                 const DegreeSpace& space, bool synthetic = false,
                 std::vector<std::string> comments = {});

  // CSV with header "layer,degree,seconds", one row per (layer, degree),
  // layers numbered from 1. Lines starting with '#' are comments; a comment
  // containing "synthetic" marks the profile as synthetic.
  static RuntimeProfile FromCsv(const std::string& text, const DegreeSpace& space);
  static RuntimeProfile Load(const std::string& path, const DegreeSpace& space);
  std::string ToCsv() const;

  size_t num_layers() const { return per_layer_.size(); }
  const std::map<int, double>& layer(size_t index) const { return per_layer_[index]; }
  double Seconds(size_t index, int degree) const;
  bool synthetic() const { return synthetic_; }
  const std::vector<std::string>& comments() const { return comments_; }

 private:
  std::vector<std::map<int, double>> per_layer_;
  bool synthetic_;
  std::vector<std::string> comments_;
};

// Constants of the bundled synthetic profile.
struct SyntheticProfileParams {
  // Polynomial evaluation: eval_seconds * sqrt(d).
  double eval_seconds = 0.04;
  // Bootstrapping cost indexed by polynomial depth ceil(log2(d + 1)), for
  // depths 1..8. Layers after the first pay it.
  std::vector<double> bootstrap_seconds = {1.40, 1.60, 1.85, 2.15, 2.50, 2.95, 3.50, 4.20};
};

// T_1(d) = eval * sqrt(d); T_i(d) = boot(depth(d)) + eval * sqrt(d) for i >= 2.
RuntimeProfile SyntheticProfile(int num_layers, const DegreeSpace& space,
                                const SyntheticProfileParams& params = {});

int PolynomialDepth(int degree);

inline constexpr double kDefaultNu = 0.25;

// Integer costs tau_i(d) = round-half-even(T_i(d) / nu), with tau_i(-1) = 0.
class DiscreteCostTable {
 public:
  double nu() const { return nu_; }
  size_t num_layers() const { return per_layer_.size(); }
  const std::map<int, int>& layer(size_t index) const { return per_layer_[index]; }
  // Throws Error(kLookup) for a degree outside the table.
  int Cost(size_t index, int degree) const;

  std::string ToJson() const;

 private:
  friend DiscreteCostTable Discretize(const RuntimeProfile&, double);
  friend DiscreteCostTable MakeCostTable(std::vector<std::map<int, int>>);

  double nu_ = kDefaultNu;
  std::vector<std::map<int, int>> per_layer_;
};

DiscreteCostTable Discretize(const RuntimeProfile& profile, double nu);

// Builds a table directly from integer costs (validated non-negative and
// non-decreasing; the sentinel entry is added).
DiscreteCostTable MakeCostTable(std::vector<std::map<int, int>> per_layer);

// tau(d) = sum_i tau_i(d_i).
int TotalCost(const DiscreteCostTable& table, std::span<const int> degrees);

}  // namespace ola

#endif  // OLA_RUNTIME_MODEL_H_

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

#ifndef OLA_PIPELINE_H_
#define OLA_PIPELINE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ola/dp_optimizer.h"
#include "ola/net.h"
#include "ola/runtime_model.h"
#include "ola/sensitivity.h"
#include "ola/series.h"

namespace ola {

// Per-layer MSE tables E_i(d) for d in the space, fitted under N(mu_i, sigma_i^2).
std::vector<MseTable> BuildMseTables(const SensitivityProfile& stats,
                                     const std::vector<ScalarActivation>& activations,
                                     const DegreeSpace& space);

DpProblem BuildDpProblem(const SensitivityProfile& stats,
                         const std::vector<ScalarActivation>& activations,
                         const RuntimeProfile& profile, double nu, const DegreeSpace& space);

// Budget that affords the largest degree at every layer.
int MaxDegreeBudget(const DiscreteCostTable& tau, const DegreeSpace& space);

struct PipelineOptions {
  double nu = kDefaultNu;
  DegreeSpace space = DegreeSpace::Default();
  // Defaults to MaxDegreeBudget.
  std::optional<int> budget;
  double acc_drop_pct = 1.0;
  std::vector<double> r_grid = DefaultRGrid();
  bool uniform_comparison = true;
};

struct PipelineInputs {
  NetModel model;
  Dataset data;
  RuntimeProfile profile;
};

struct LayerReport {
  LayerStats stats;
  std::string activation;
  int degree = kSentinelDegree;
  double E = 0.0;
  int tau = 0;
  MseTable E_table;
  std::map<int, int> tau_table;
  std::string series_file;
};

struct UniformComparison {
  int degree = 0;
  int cost = 0;
  double accuracy = 0.0;
  double r = 1.0;
};

struct RunReport {
  std::string status = "ok";  // or "bound_unreachable"
  std::string message;
  Solution solution;
  double baseline_accuracy = 0.0;
  double approx_accuracy = 0.0;
  double accuracy_threshold = 0.0;
  int max_budget = 0;
  std::vector<LayerReport> layers;
  // Smallest single degree meeting the bound, if any.
  std::optional<UniformComparison> uniform;
  bool uniform_requested = false;
  SearchResult search;
  std::vector<std::pair<double, double>> r_curve;
  bool synthetic_profile = false;
  double nu = kDefaultNu;
  std::vector<int> space;
  // Fitted series of the returned solution, one per layer; empty when the
  // solution uses the sentinel.
  std::vector<HermiteSeries> series;
  // Filled by the file-based runner.
  std::string config_echo;
  std::map<std::string, double> timings;
  std::string generated_at;

  // Recomputes cost and V from the per-layer tables; throws
  // Error(kValidation) when they disagree with the solution.
  void Verify() const;
  std::string ToJson() const;
  // (r, accuracy) of the returned solution as CSV.
  std::string RCurveCsv() const;
};

// Steps 1 to 4 in memory. A bound that cannot be met gives a report with
// status "bound_unreachable" holding the best attempt.
RunReport RunPipeline(const PipelineInputs& inputs, const PipelineOptions& options);

struct PipelineConfig {
  std::string model_path;
  std::string dataset_path;
  std::string profile_path;
  std::string output_path = "report.json";
  PipelineOptions options;
  uint64_t seed = 0;
  bool timestamps = true;

  // JSON object with the keys model, dataset, profile, output, nu, degrees,
  // budget, acc_drop, r_grid, seed, uniform_comparison. Relative paths are
  // resolved against `base_dir`.
  static PipelineConfig FromJson(const std::string& text, const std::string& base_dir = "");
  // Echo without the output path.
  std::string EchoJson() const;
  // Throws Error(kIo) for a missing input file.
  void Validate() const;
};

// Loads the inputs, runs the pipeline and writes the report, the per-layer
// series files and r_curve.csv next to the report. Throws
// Error(kBoundUnreachable) after writing when the bound cannot be met.
RunReport RunPipelineToFiles(const PipelineConfig& config);

struct ProbeOptions {
  int layer = 1;  // 1-based
  int degree = 7;
  std::vector<double> r_grid = DefaultRGrid();
};

struct ProbeRegion {
  double lo = 0.0;
  double hi = 0.0;
  double loss = 0.0;
};

struct ProbeReport {
  int layer = 1;
  int degree = 0;
  double mu = 0.0;
  double sigma = 0.0;
  double observed_min = 0.0;
  double observed_max = 0.0;
  int tail_samples = 0;  // activation inputs inside the tail region
  double clean_loss = 0.0;
  ProbeRegion central_r1;
  ProbeRegion tail_r1;
  double tuned_r = 1.0;
  ProbeRegion central_tuned;
  ProbeRegion tail_tuned;
  std::vector<std::pair<double, double>> r_curve;

  std::string ToJson() const;
};

// Region probe at one layer: central region |x - mu| <= sigma and the upper
// tail [mu + 3 sigma, max observed] (the lower one if the upper is empty).
// The tuned r maximizes accuracy with the layer fully substituted.
ProbeReport RunRegionProbe(const NetModel& model, const Dataset& data,
                           const ProbeOptions& options);

}  // namespace ola

#endif  // OLA_PIPELINE_H_

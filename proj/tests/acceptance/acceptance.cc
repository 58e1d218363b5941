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

// Runs every acceptance criterion and prints one PASS/FAIL line per
// criterion. Usage: ola_acceptance [data_dir] [work_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ola/approx.h"
#include "ola/dp_optimizer.h"
#include "ola/error.h"
#include "ola/hermite.h"
#include "ola/io.h"
#include "ola/net.h"
#include "ola/pipeline.h"
#include "ola/quadrature.h"
#include "ola/random.h"
#include "ola/runtime_model.h"

#ifndef OLA_DATA_DIR
#define OLA_DATA_DIR "data"
#endif

namespace ola {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// ------------------------------------------------------------ numerics

Outcome Orthonormality() {
  const QuadratureRule& rule = GaussHermiteRule(512);
  constexpr int kMax = 12;
  std::vector<double> h(kMax + 1);
  std::vector<std::vector<double>> gram(kMax + 1, std::vector<double>(kMax + 1, 0.0));
  for (size_t k = 0; k < rule.size(); ++k) {
    HermiteOrthoAll(rule.nodes[k], h);
    for (int i = 0; i <= kMax; ++i) {
      for (int j = 0; j <= kMax; ++j) gram[i][j] += rule.weights[k] * h[i] * h[j];
    }
  }
  double worst = 0.0;
  for (int i = 0; i <= kMax; ++i) {
    for (int j = 0; j <= kMax; ++j) worst = std::max(worst, std::abs(gram[i][j] - (i == j)));
  }
  return {worst < 1e-8, Fmt("max |<h_i,h_j> - delta_ij| = %.3e (< 1e-8)", worst)};
}

Outcome ReluCoefficients() {
  const HermiteSeries p = Fit(ScalarActivation::ReLU(), GaussianWeight(0.0, 1.0), 2);
  const double pi = std::numbers::pi;
  const double expected[3] = {1.0 / std::sqrt(2.0 * pi), 0.5, 1.0 / (2.0 * std::sqrt(pi))};
  double worst = 0.0;
  for (int l = 0; l < 3; ++l) worst = std::max(worst, std::abs(p.coeffs()[l] - expected[l]));
  return {worst < 1e-9, Fmt("max coefficient error = %.3e (< 1e-9)", worst)};
}

struct GridResult {
  double parseval_gap = 0.0;
  double residual = 0.0;
  bool monotone = true;
};

const GridResult& FitGrid() {
  static const GridResult result = [] {
    GridResult r;
    for (const ScalarActivation& f : {ScalarActivation::ReLU(), ScalarActivation::GELU()}) {
      for (double mu : {-1.0, 0.0, 1.0}) {
        for (double sigma : {0.5, 2.0}) {
          const GaussianWeight w(mu, sigma);
          double prev = kInf;
          for (int d : {3, 7, 31, 127}) {
            const HermiteSeries p = Fit(f, w, d);
            const double mse = Mse(f, w, p);
            r.parseval_gap = std::max(r.parseval_gap, std::abs(mse - DirectMse(f, w, p)));
            r.residual = std::max(r.residual, std::abs(MeanResidual(f, w, p)));
            if (mse > prev) r.monotone = false;
            prev = mse;
          }
        }
      }
    }
    return r;
  }();
  return result;
}

Outcome ParsevalConsistency() {
  const GridResult& g = FitGrid();
  return {g.parseval_gap < 1e-8 && g.monotone,
          Fmt("max |parseval - direct| = %.3e (< 1e-8), non-increasing in d: ", g.parseval_gap) +
              (g.monotone ? "yes" : "no")};
}

Outcome MeanZeroResidual() {
  const GridResult& g = FitGrid();
  return {g.residual < 1e-8, Fmt("max |E[f - P]| = %.3e (< 1e-8)", g.residual)};
}

// ----------------------------------------------------------------- DP

DpProblem RandomDpProblem(Rng& rng, bool exact) {
  const int n_l = 1 + static_cast<int>(rng.Index(4));
  const int m = 1 + static_cast<int>(rng.Index(4));
  std::vector<int> degrees;
  int d = 0;
  for (int j = 0; j < m; ++j) degrees.push_back(d += 1 + static_cast<int>(rng.Index(5)));
  std::vector<double> A;
  std::vector<MseTable> E;
  std::vector<std::map<int, int>> tau;
  for (int i = 0; i < n_l; ++i) {
    A.push_back(exact ? static_cast<double>(rng.Index(4)) : rng.Uniform(0.0, 3.0));
    MseTable e;
    std::map<int, int> t;
    double ev = exact ? 8.0 * (1 + rng.Index(4)) : rng.Uniform(1.0, 2.0);
    int tv = static_cast<int>(rng.Index(4));
    for (int deg : degrees) {
      e[deg] = exact ? ev / 8.0 : ev;
      t[deg] = tv;
      ev = exact ? std::max(0.0, ev - static_cast<double>(rng.Index(3)))
                 : ev * rng.Uniform(0.3, 1.0);
      tv += static_cast<int>(rng.Index(6));
    }
    E.push_back(std::move(e));
    tau.push_back(std::move(t));
  }
  return DpProblem{std::move(A), std::move(E), MakeCostTable(std::move(tau)),
                   DegreeSpace(std::move(degrees))};
}

Outcome DpOracleEquivalence() {
  int mismatches = 0;
  int compared = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const DpProblem p = RandomDpProblem(rng, seed % 2 == 0);
    const int n_k = 1 + static_cast<int>(rng.Index(40));
    const DpTable t = SolveDp(p, n_k);
    for (int k = 0; k <= n_k; ++k) {
      const Solution oracle = BruteForce(p, k);
      const Solution dp = t.SolutionAt(k);
      ++compared;
      if (dp.objective != oracle.objective || dp.degrees != oracle.degrees) ++mismatches;
    }
  }
  return {mismatches == 0, "200 instances, " + std::to_string(compared) +
                               " (instance, budget) pairs, mismatches = " +
                               std::to_string(mismatches)};
}

Outcome DpScaling() {
  Rng rng(31);
  const DegreeSpace space = DegreeSpace::Default();
  constexpr int kLayers = 31;
  constexpr int kBudget = 5000;
  std::vector<double> A;
  std::vector<MseTable> E(kLayers);
  std::vector<std::map<int, int>> tau(kLayers);
  for (int i = 0; i < kLayers; ++i) {
    A.push_back(rng.Uniform(0.0, 2.0));
    double e = rng.Uniform(0.05, 0.2);
    int c = 1 + static_cast<int>(rng.Index(30));
    for (int d : space.degrees()) {
      E[i][d] = e;
      tau[i][d] = c;
      e *= rng.Uniform(0.2, 0.8);
      c += static_cast<int>(rng.Index(40));
    }
  }
  const DpProblem p{A, E, MakeCostTable(tau), space};
  const auto start = std::chrono::steady_clock::now();
  const DpTable t = SolveDp(p, kBudget);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool feasible = true;
  bool monotone = true;
  for (int k = 0; k <= kBudget; ++k) {
    if (k > 0 && t.Value(kLayers, k) > t.Value(kLayers, k - 1)) monotone = false;
    if (!std::isfinite(t.Value(kLayers, k))) continue;
    const Solution s = t.SolutionAt(k);
    if (s.cost > k || s.cost != TotalCost(p.tau, s.degrees)) feasible = false;
  }
  return {seconds < 5.0 && feasible && monotone,
          Fmt("N_L=31, |S|=10, N_K=5000 solved in %.3f s (< 5 s); ", seconds) +
              "feasible: " + (feasible ? "yes" : "no") + ", monotone: " + (monotone ? "yes" : "no")};
}

// ------------------------------------------------------------ gradient

Outcome GradientCheck() {
  Rng rng(42);
  const std::vector<int> sizes = {4, 12, 12, 12, 3};
  std::vector<DenseLayer> layers;
  int params = 0;
  for (size_t i = 0; i + 1 < sizes.size(); ++i) {
    DenseLayer l;
    l.in = sizes[i];
    l.out = sizes[i + 1];
    l.activation = i + 2 < sizes.size() ? ScalarActivation::GELU() : ScalarActivation::Identity();
    for (int j = 0; j < l.in * l.out; ++j) l.weights.push_back(rng.Normal(0.0, 1.0 / std::sqrt(l.in)));
    for (int j = 0; j < l.out; ++j) l.bias.push_back(rng.Normal(0.0, 0.3));
    params += l.in * l.out + l.out;
    layers.push_back(std::move(l));
  }
  const DenseLayer output = layers.back();
  layers.pop_back();
  const NetModel model(layers, output);
  std::vector<double> x(4);
  for (double& v : x) v = rng.Normal();
  const int label = 1;
  const BackwardResult b = Backward(model, x, label, true);

  // Relative error |g - fd| / max(|g|, |fd|); entries where both are below
  // 1e-7 are compared absolutely against 1e-10 instead.
  const double h = 1e-5;
  double worst_rel = 0.0;
  double worst_abs_small = 0.0;
  const int n_slots = model.num_activation_layers() + 1;
  for (int slot = 0; slot < n_slots; ++slot) {
    for (int kind = 0; kind < 2; ++kind) {
      const DenseLayer& ref = slot < n_slots - 1 ? model.hidden()[slot] : model.output();
      const size_t count = kind == 0 ? ref.weights.size() : ref.bias.size();
      for (size_t idx = 0; idx < count; ++idx) {
        const auto loss_at = [&](double delta) {
          std::vector<DenseLayer> hidden = model.hidden();
          DenseLayer out = model.output();
          DenseLayer& target = slot < n_slots - 1 ? hidden[slot] : out;
          (kind == 0 ? target.weights : target.bias)[idx] += delta;
          return CrossEntropy(Forward(NetModel(hidden, out), x).logits, label);
        };
        const double fd = (loss_at(h) - loss_at(-h)) / (2 * h);
        const double g = (kind == 0 ? b.weight_grads : b.bias_grads)[slot][idx];
        const double scale = std::max(std::abs(g), std::abs(fd));
        if (scale < 1e-7) {
          worst_abs_small = std::max(worst_abs_small, std::abs(g - fd));
        } else {
          worst_rel = std::max(worst_rel, std::abs(g - fd) / scale);
        }
      }
    }
  }
  return {params <= 1000 && worst_rel < 1e-5 && worst_abs_small < 1e-10,
          Fmt("3 hidden GELU layers, %.0f parameters; max relative error = %.3e (< 1e-5)",
              params, worst_rel)};
}

// ------------------------------------------------------- end to end

struct EndToEnd {
  std::optional<RunReport> report;
  std::string bytes;
  std::string error;
};

PipelineConfig ToyConfig(const std::string& data_dir, const std::string& out_dir) {
  PipelineConfig c =
      PipelineConfig::FromJson(ReadFile(data_dir + "/toy_config.json"), data_dir);
  c.output_path = out_dir + "/report.json";
  c.timestamps = false;
  return c;
}

EndToEnd RunToy(const std::string& data_dir, const std::string& out_dir) {
  EndToEnd e;
  try {
    const PipelineConfig c = ToyConfig(data_dir, out_dir);
    e.report = RunPipelineToFiles(c);
    e.bytes = ReadFile(c.output_path);
  } catch (const std::exception& ex) {
    e.error = ex.what();
  }
  return e;
}

Outcome EndToEndComparison(const EndToEnd& run) {
  if (!run.report) return {false, "pipeline failed: " + run.error};
  const RunReport& r = *run.report;
  if (!r.uniform) return {false, "no uniform degree meets the bound"};
  const bool cheaper = r.solution.cost < r.uniform->cost;
  const bool accurate = r.approx_accuracy >= r.baseline_accuracy - 0.01 - 1e-12;
  std::ostringstream degrees;
  for (size_t i = 0; i < r.solution.degrees.size(); ++i) {
    degrees << (i ? "," : "") << r.solution.degrees[i];
  }
  std::ostringstream detail;
  detail << "OLA d=(" << degrees.str() << ") tau=" << r.solution.cost << " vs uniform d="
         << r.uniform->degree << " tau=" << r.uniform->cost << "; accuracy "
         << r.approx_accuracy << " vs baseline " << r.baseline_accuracy << " (>= -1 pp)";
  return {cheaper && accurate && std::isfinite(r.solution.objective), detail.str()};
}

Outcome RegionProbeCriterion(const std::string& data_dir) {
  const NetModel model = NetModel::Load(data_dir + "/toy_model.json");
  const Dataset data = Dataset::Load(data_dir + "/toy_train.csv");
  ProbeOptions o;
  o.layer = 2;
  o.degree = 31;
  const ProbeReport p = RunRegionProbe(model, data, o);
  const double gap = p.tail_r1.loss / p.central_r1.loss;
  const double drop = p.tail_r1.loss / p.tail_tuned.loss;
  const bool in_range = p.tail_r1.lo >= p.observed_min && p.tail_r1.hi <= p.observed_max;
  const bool tail = p.tail_r1.lo >= p.mu + 3 * p.sigma || p.tail_r1.hi <= p.mu - 3 * p.sigma;
  return {gap >= 10.0 && drop >= 10.0 && in_range && tail && p.tail_samples > 0,
          Fmt("layer 2, d=31: tail/central loss at r=1 = %.3e (>= 10); ", gap) +
              Fmt("tail loss r=1 / r=%.2f = %.3e (>= 10)", p.tuned_r, drop)};
}

int Main(int argc, char** argv) {
  const std::string data_dir = argc > 1 ? argv[1] : OLA_DATA_DIR;
  const std::filesystem::path work =
      argc > 2 ? std::filesystem::path(argv[2])
               : std::filesystem::temp_directory_path() / "ola_acceptance";
  std::filesystem::create_directories(work);

  EndToEnd first;
  const std::vector<Criterion> criteria = {
      {"hermite-orthonormality", 1.0, Orthonormality},
      {"analytic-relu-coefficients", 1.0, ReluCoefficients},
      {"parseval-consistency", 10.0, ParsevalConsistency},
      {"mean-zero-residual", 10.0, MeanZeroResidual},
      {"dp-oracle-equivalence", 30.0, DpOracleEquivalence},
      {"dp-scaling", 5.0, DpScaling},
      {"gradient-correctness", 10.0, GradientCheck},
      {"end-to-end-toy-comparison", 300.0,
       [&] {
         first = RunToy(data_dir, (work / "run1").string());
         return EndToEndComparison(first);
       }},
      {"region-probe", 120.0, [&] { return RegionProbeCriterion(data_dir); }},
      {"determinism", 600.0,
       [&] {
         // Second run on a different worker count; the first run is reused.
         const char* old = std::getenv("OLA_THREADS");
         const std::string saved = old ? old : "";
         setenv("OLA_THREADS", "2", 1);
         const EndToEnd second = RunToy(data_dir, (work / "run2").string());
         if (old) {
           setenv("OLA_THREADS", saved.c_str(), 1);
         } else {
           unsetenv("OLA_THREADS");
         }
         if (!first.report || !second.report) {
           return Outcome{false, "pipeline failed: " + first.error + second.error};
         }
         const bool same = first.bytes == second.bytes;
         return Outcome{same, std::to_string(first.bytes.size()) + "-byte reports " +
                                  (same ? "identical" : "differ")};
       }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.limit_seconds;
    const bool passed = o.passed && in_time;
    if (!passed) ++failures;
    std::printf("[%s] %s: %s; %.2f s (limit %.0f s)\n", passed ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), seconds, c.limit_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace ola

int main(int argc, char** argv) { return ola::Main(argc, argv); }

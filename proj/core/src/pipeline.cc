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

#include "ola/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <limits>

#include <nlohmann/json.hpp>

#include "ola/approx.h"
#include "ola/error.h"
#include "ola/io.h"
#include "ola/parallel.h"

namespace ola {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

Json Number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

Json SolutionJson(const Solution& s) { return Json::parse(s.ToJson()); }

Json CurveJson(const std::vector<std::pair<double, double>>& curve) {
  Json arr = Json::array();
  for (const auto& [r, acc] : curve) arr.push_back({{"r", r}, {"accuracy", acc}});
  return arr;
}

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string SeriesFileName(int layer) { return "series_layer_" + std::to_string(layer) + ".json"; }

bool PassesBound(double accuracy, double threshold) { return accuracy >= threshold - 1e-12; }

}  // namespace

std::vector<MseTable> BuildMseTables(const SensitivityProfile& stats,
                                     const std::vector<ScalarActivation>& activations,
                                     const DegreeSpace& space) {
  if (activations.size() != stats.layers.size()) {
    throw Error(ErrorKind::kInvalidArgument, "one activation per profiled layer is required");
  }
  std::vector<MseTable> tables(stats.layers.size());
  ParallelFor(tables.size(), [&](size_t i) {
    const LayerStats& s = stats.layers[i];
    const MseReport report =
        MseByDegree(activations[i], GaussianWeight(s.mu, s.sigma), space.max_degree());
    for (int d : space.degrees()) tables[i][d] = report.by_degree.at(d);
  });
  return tables;
}

DpProblem BuildDpProblem(const SensitivityProfile& stats,
                         const std::vector<ScalarActivation>& activations,
                         const RuntimeProfile& profile, double nu, const DegreeSpace& space) {
  if (profile.num_layers() != stats.layers.size()) {
    throw Error(ErrorKind::kValidation,
                "runtime profile has " + std::to_string(profile.num_layers()) +
                    " layers but the model has " + std::to_string(stats.layers.size()));
  }
  DpProblem problem{{}, BuildMseTables(stats, activations, space), Discretize(profile, nu), space};
  for (const LayerStats& s : stats.layers) problem.A.push_back(s.A);
  return problem;
}

int MaxDegreeBudget(const DiscreteCostTable& tau, const DegreeSpace& space) {
  const std::vector<int> top(tau.num_layers(), space.max_degree());
  return TotalCost(tau, top);
}

// ---------------------------------------------------------------- report

void RunReport::Verify() const {
  if (solution.degrees.size() != layers.size()) {
    throw Error(ErrorKind::kValidation, "report solution and layer tables differ in length");
  }
  int cost = 0;
  double v = 0.0;
  for (size_t i = 0; i < layers.size(); ++i) {
    const int d = solution.degrees[i];
    auto t = layers[i].tau_table.find(d);
    if (t == layers[i].tau_table.end()) {
      throw Error(ErrorKind::kValidation, "report has no tau entry for the chosen degree");
    }
    cost += t->second;
    v += LayerLoss(layers[i].stats.A, layers[i].E_table, d, static_cast<int>(i) + 1);
  }
  if (cost != solution.cost || cost > solution.budget) {
    throw Error(ErrorKind::kValidation, "report cost check failed: recomputed " +
                                            std::to_string(cost) + ", budget " +
                                            std::to_string(solution.budget));
  }
  const bool same = (std::isinf(v) && std::isinf(solution.objective)) ||
                    std::abs(v - solution.objective) <= 1e-12 * std::max(1.0, std::abs(v));
  if (!same) throw Error(ErrorKind::kValidation, "report objective does not match its tables");
}

std::string RunReport::ToJson() const {
  Json j;
  j["status"] = status;
  if (!message.empty()) j["message"] = message;
  j["solution"] = SolutionJson(solution);
  j["uses_sentinel"] = solution.uses_sentinel();
  j["baseline_accuracy"] = baseline_accuracy;
  j["approx_accuracy"] = approx_accuracy;
  j["accuracy_threshold"] = accuracy_threshold;
  j["max_budget"] = max_budget;

  Json per_layer = Json::array();
  for (const LayerReport& l : layers) {
    Json jl;
    jl["layer"] = l.stats.layer;
    jl["activation"] = l.activation;
    jl["mu"] = l.stats.mu;
    jl["sigma"] = l.stats.sigma;
    jl["A"] = l.stats.A;
    jl["n_nodes"] = l.stats.n_nodes;
    jl["degree"] = l.degree;
    jl["E"] = Number(l.E);
    jl["tau"] = l.tau;
    Json e = Json::object();
    for (const auto& [d, v] : l.E_table) e[std::to_string(d)] = v;
    jl["E_table"] = std::move(e);
    Json t = Json::object();
    for (const auto& [d, c] : l.tau_table) t[std::to_string(d)] = c;
    jl["tau_table"] = std::move(t);
    jl["series_file"] = l.series_file.empty() ? Json(nullptr) : Json(l.series_file);
    per_layer.push_back(std::move(jl));
  }
  j["per_layer"] = std::move(per_layer);

  if (uniform_requested) {
    Json u;
    u["ola_cost"] = solution.cost;
    if (uniform) {
      u["degree"] = uniform->degree;
      u["cost"] = uniform->cost;
      u["accuracy"] = uniform->accuracy;
      u["r"] = uniform->r;
      u["ola_cheaper"] = solution.cost < uniform->cost;
    } else {
      u["degree"] = nullptr;
      u["cost"] = nullptr;
    }
    j["uniform_comparison"] = std::move(u);
  }

  Json s;
  s["k_min"] = search.k_min;
  s["anomaly"] = search.anomaly;
  if (search.anomaly) s["anomaly_detail"] = search.anomaly_detail;
  Json probes = Json::array();
  for (const BudgetProbe& p : search.probes) {
    probes.push_back({{"k", p.k},
                      {"degrees", p.degrees},
                      {"accuracy", p.accuracy},
                      {"r", p.r},
                      {"passed", p.passed}});
  }
  s["evaluations"] = std::move(probes);
  j["search"] = std::move(s);
  j["r_curve"] = CurveJson(r_curve);
  j["profile"] = {{"synthetic", synthetic_profile}, {"nu", nu}, {"degrees", space}};
  if (!config_echo.empty()) j["config"] = Json::parse(config_echo);
  if (!timings.empty()) {
    Json t;
    for (const auto& [k, v] : timings) t[k] = v;
    j["timings_seconds"] = std::move(t);
  }
  if (!generated_at.empty()) j["generated_at"] = generated_at;
  return j.dump(2) + "\n";
}

std::string RunReport::RCurveCsv() const {
  std::string out = "r,accuracy\n";
  for (const auto& [r, acc] : r_curve) out += FormatExact(r) + "," + FormatExact(acc) + "\n";
  return out;
}

// -------------------------------------------------------------- pipeline

RunReport RunPipeline(const PipelineInputs& inputs, const PipelineOptions& options) {
  const NetModel& model = inputs.model;
  const Dataset& data = inputs.data;
  const DegreeSpace& space = options.space;
  const int n_l = model.num_activation_layers();

  std::vector<ScalarActivation> activations;
  for (int i = 0; i < n_l; ++i) activations.push_back(model.ScalarActivationAt(i));

  RunReport report;
  report.nu = options.nu;
  report.space = space.degrees();
  report.synthetic_profile = inputs.profile.synthetic();
  report.uniform_requested = options.uniform_comparison;
  report.baseline_accuracy = Accuracy(model, data);

  // Step 1: input statistics and sensitivities.
  const SensitivityProfile stats = CollectStats(model, data);
  // Step 2: MSE and cost tables.
  const DpProblem problem = BuildDpProblem(stats, activations, inputs.profile, options.nu, space);
  report.max_budget = options.budget.value_or(MaxDegreeBudget(problem.tau, space));
  if (report.max_budget < 0) throw Error(ErrorKind::kInvalidArgument, "budget must be >= 0");
  // Step 3: one DP run covers every k <= N_K.
  const DpTable table = SolveDp(problem, report.max_budget);

  // Step 4: accuracy-bounded search with r tuned per candidate.
  const std::vector<double>& grid = options.r_grid;
  std::vector<std::vector<HermiteSeries>> fits(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    fits[g] = std::vector<HermiteSeries>(n_l, HermiteSeries(0.0, 1.0, {0.0}));
    ParallelFor(n_l, [&](size_t i) {
      const LayerStats& s = stats.layers[i];
      fits[g][i] = Fit(activations[i], GaussianWeight(s.mu, s.sigma, grid[g]), space.max_degree());
    });
  }
  const auto series_for = [&](size_t g, const std::vector<int>& degrees) {
    std::vector<HermiteSeries> out;
    for (int i = 0; i < n_l; ++i) out.push_back(fits[g][i].Truncated(degrees[i]));
    return out;
  };

  std::map<std::vector<int>, TuneResult> tuned;
  const auto tune = [&](const std::vector<int>& degrees) -> const TuneResult& {
    auto it = tuned.find(degrees);
    if (it != tuned.end()) return it->second;
    TuneResult t;
    if (std::find(degrees.begin(), degrees.end(), kSentinelDegree) != degrees.end()) {
      t.accuracy = 0.0;
    } else {
      t = TuneR(grid, [&](double r) {
        const size_t g = std::find(grid.begin(), grid.end(), r) - grid.begin();
        const std::vector<HermiteSeries> series = series_for(g, degrees);
        return Accuracy(Substitute(model, series), data);
      });
    }
    return tuned.emplace(degrees, std::move(t)).first->second;
  };
  const EvaluateFn evaluate = [&](const std::vector<int>& degrees) {
    const TuneResult& t = tune(degrees);
    return Evaluation{t.accuracy, t.r};
  };

  try {
    report.search = SearchBudget(table, evaluate, report.baseline_accuracy, options.acc_drop_pct);
  } catch (const BoundUnreachableError& e) {
    report.status = "bound_unreachable";
    report.message = e.what();
    report.search = e.best();
  }
  report.solution = report.search.solution;
  report.approx_accuracy = report.search.accuracy;
  report.accuracy_threshold = report.search.threshold;
  if (!report.solution.uses_sentinel()) {
    const TuneResult& t = tune(report.solution.degrees);
    report.r_curve = t.curve;
    const size_t g = std::find(grid.begin(), grid.end(), t.r) - grid.begin();
    report.series = series_for(g, report.solution.degrees);
  }

  if (options.uniform_comparison) {
    for (int d : space.degrees()) {
      const std::vector<int> uniform(n_l, d);
      const TuneResult& t = tune(uniform);
      if (PassesBound(t.accuracy, report.search.threshold)) {
        report.uniform = UniformComparison{d, TotalCost(problem.tau, uniform), t.accuracy, t.r};
        break;
      }
    }
  }

  for (int i = 0; i < n_l; ++i) {
    LayerReport l;
    l.stats = stats.layers[i];
    l.activation = activations[i].name();
    l.degree = report.solution.degrees[i];
    l.E = LookupMse(problem.E[i], l.degree, i + 1);
    l.tau = problem.tau.Cost(i, l.degree);
    l.E_table = problem.E[i];
    l.tau_table = problem.tau.layer(i);
    if (!report.series.empty()) l.series_file = SeriesFileName(i + 1);
    report.layers.push_back(std::move(l));
  }
  report.Verify();
  return report;
}

// ----------------------------------------------------------- file config

PipelineConfig PipelineConfig::FromJson(const std::string& text, const std::string& base_dir) {
  PipelineConfig c;
  const auto resolve = [&](const std::string& p) {
    if (p.empty() || base_dir.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (std::filesystem::path(base_dir) / p).lexically_normal().string();
  };
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorKind::kParse, "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "model") {
        c.model_path = resolve(value.get<std::string>());
      } else if (key == "dataset") {
        c.dataset_path = resolve(value.get<std::string>());
      } else if (key == "profile") {
        c.profile_path = resolve(value.get<std::string>());
      } else if (key == "output") {
        c.output_path = resolve(value.get<std::string>());
      } else if (key == "nu") {
        c.options.nu = value.get<double>();
      } else if (key == "degrees") {
        c.options.space = value.is_string() ? DegreeSpace::Parse(value.get<std::string>())
                                            : DegreeSpace(value.get<std::vector<int>>());
      } else if (key == "budget") {
        if (!value.is_null()) c.options.budget = value.get<int>();
      } else if (key == "acc_drop") {
        c.options.acc_drop_pct = value.get<double>();
      } else if (key == "r_grid") {
        c.options.r_grid = value.get<std::vector<double>>();
      } else if (key == "seed") {
        c.seed = value.get<uint64_t>();
      } else if (key == "uniform_comparison") {
        c.options.uniform_comparison = value.get<bool>();
      } else {
        throw Error(ErrorKind::kParse, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("config: ") + e.what());
  }
  return c;
}

std::string PipelineConfig::EchoJson() const {
  Json j;
  j["model"] = model_path;
  j["dataset"] = dataset_path;
  j["profile"] = profile_path;
  j["nu"] = options.nu;
  j["degrees"] = options.space.degrees();
  j["budget"] = options.budget ? Json(*options.budget) : Json(nullptr);
  j["acc_drop"] = options.acc_drop_pct;
  j["r_grid"] = options.r_grid;
  j["seed"] = seed;
  j["uniform_comparison"] = options.uniform_comparison;
  return j.dump();
}

void PipelineConfig::Validate() const {
  if (!(options.nu > 0.0) || !std::isfinite(options.nu)) {
    throw Error(ErrorKind::kInvalidArgument, "nu must be positive");
  }
  if (!(options.acc_drop_pct >= 0.0 && options.acc_drop_pct <= 100.0)) {
    throw Error(ErrorKind::kInvalidArgument, "acc_drop must lie in [0, 100]");
  }
  if (options.budget && *options.budget < 0) {
    throw Error(ErrorKind::kInvalidArgument, "budget must be >= 0");
  }
  ValidateRGrid(options.r_grid);
  for (const auto& [what, path] : {std::pair<const char*, const std::string&>{"model", model_path},
                                   {"dataset", dataset_path},
                                   {"profile", profile_path}}) {
    if (path.empty()) throw Error(ErrorKind::kInvalidArgument, std::string(what) + " path is required");
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorKind::kIo, std::string(what) + " file not found: " + path);
    }
  }
}

RunReport RunPipelineToFiles(const PipelineConfig& config) {
  config.Validate();
  const auto start = Clock::now();
  auto t = Clock::now();
  PipelineInputs inputs{NetModel::Load(config.model_path), Dataset::Load(config.dataset_path),
                        RuntimeProfile::Load(config.profile_path, config.options.space)};
  const double load_seconds = Seconds(t);
  t = Clock::now();
  RunReport report = RunPipeline(inputs, config.options);
  const double run_seconds = Seconds(t);

  report.config_echo = config.EchoJson();
  if (config.timestamps) {
    report.generated_at = UtcNow();
    report.timings["load"] = load_seconds;
    report.timings["pipeline"] = run_seconds;
    report.timings["total"] = Seconds(start);
  }

  const std::filesystem::path out(config.output_path);
  const std::filesystem::path dir = out.has_parent_path() ? out.parent_path() : ".";
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < report.series.size(); ++i) {
    WriteFile((dir / report.layers[i].series_file).string(), report.series[i].ToJson() + "\n");
  }
  WriteFile((dir / "r_curve.csv").string(), report.RCurveCsv());
  WriteFile(out.string(), report.ToJson());
  if (report.status != "ok") throw Error(ErrorKind::kBoundUnreachable, report.message);
  return report;
}

// ----------------------------------------------------------- region probe

std::string ProbeReport::ToJson() const {
  const auto region = [](const ProbeRegion& r) {
    return Json{{"lo", r.lo}, {"hi", r.hi}, {"loss", Number(r.loss)}};
  };
  Json j;
  j["layer"] = layer;
  j["degree"] = degree;
  j["mu"] = mu;
  j["sigma"] = sigma;
  j["observed_min"] = observed_min;
  j["observed_max"] = observed_max;
  j["tail_samples"] = tail_samples;
  j["clean_loss"] = clean_loss;
  j["r1"] = {{"central", region(central_r1)}, {"tail", region(tail_r1)}};
  j["tuned_r"] = tuned_r;
  j["tuned"] = {{"central", region(central_tuned)}, {"tail", region(tail_tuned)}};
  j["r_curve"] = CurveJson(r_curve);
  return j.dump(2) + "\n";
}

ProbeReport RunRegionProbe(const NetModel& model, const Dataset& data,
                           const ProbeOptions& options) {
  const int n_l = model.num_activation_layers();
  if (options.layer < 1 || options.layer > n_l) {
    throw Error(ErrorKind::kInvalidArgument, "probe layer must lie in [1, " + std::to_string(n_l) + "]");
  }
  if (options.degree < 0 || options.degree > kMaxDegree) {
    throw Error(ErrorKind::kInvalidArgument, "probe degree out of range");
  }
  const int index = options.layer - 1;
  const ScalarActivation& f = model.ScalarActivationAt(index);
  const SensitivityProfile stats = CollectStats(model, data);

  ProbeReport p;
  p.layer = options.layer;
  p.degree = options.degree;
  p.mu = stats.layers[index].mu;
  p.sigma = stats.layers[index].sigma;
  p.observed_min = std::numeric_limits<double>::infinity();
  p.observed_max = -std::numeric_limits<double>::infinity();
  std::vector<double> inputs;
  for (const Sample& s : data.samples()) {
    const ForwardResult fwd = Forward(model, s.features);
    for (double x : fwd.pre_activations[index]) {
      p.observed_min = std::min(p.observed_min, x);
      p.observed_max = std::max(p.observed_max, x);
      inputs.push_back(x);
    }
  }
  p.clean_loss = MeanLoss(model, data);

  const ProbeRegion central{p.mu - p.sigma, p.mu + p.sigma, 0.0};
  ProbeRegion tail{p.mu + 3.0 * p.sigma, p.observed_max, 0.0};
  if (!(p.observed_max > tail.lo)) tail = {p.observed_min, p.mu - 3.0 * p.sigma, 0.0};
  for (double x : inputs) p.tail_samples += (x >= tail.lo && x <= tail.hi) ? 1 : 0;

  const auto fit = [&](double r) {
    return Fit(f, GaussianWeight(p.mu, p.sigma, r), options.degree);
  };
  const auto probe = [&](ProbeRegion region, const HermiteSeries& series) {
    region.loss = RegionProbe(model, data, options.layer, region.lo, region.hi, series);
    return region;
  };

  const HermiteSeries at_r1 = fit(1.0);
  p.central_r1 = probe(central, at_r1);
  p.tail_r1 = probe(tail, at_r1);

  const TuneResult tuned = TuneR(options.r_grid, [&](double r) {
    return Accuracy(model.WithActivation(index, fit(r)), data);
  });
  p.tuned_r = tuned.r;
  p.r_curve = tuned.curve;
  const HermiteSeries at_tuned = fit(tuned.r);
  p.central_tuned = probe(central, at_tuned);
  p.tail_tuned = probe(tail, at_tuned);
  return p;
}

}  // namespace ola

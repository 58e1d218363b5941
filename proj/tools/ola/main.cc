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

// Command-line front end for the OLA library.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ola/approx.h"
#include "ola/dp_optimizer.h"
#include "ola/error.h"
#include "ola/io.h"
#include "ola/net.h"
#include "ola/pipeline.h"
#include "ola/runtime_model.h"
#include "ola/sensitivity.h"
#include "ola/trainer.h"

namespace {

// Exit code of an error family; 0 is success and 1 an unexpected failure.
int ExitCode(ola::ErrorKind kind) { return 10 + static_cast<int>(kind); }

std::vector<double> ParseDoubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw ola::Error(ola::ErrorKind::kInvalidArgument, "'" + item + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<int> ParseInts(const std::string& text) {
  std::vector<int> out;
  for (double v : ParseDoubles(text)) {
    if (v != static_cast<int>(v)) {
      throw ola::Error(ola::ErrorKind::kInvalidArgument, "expected integers in '" + text + "'");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    ola::WriteFile(path, text);
  }
}

std::vector<ola::ScalarActivation> Activations(const ola::NetModel& model) {
  std::vector<ola::ScalarActivation> out;
  for (int i = 0; i < model.num_activation_layers(); ++i) out.push_back(model.ScalarActivationAt(i));
  return out;
}

// Value of `--name value` or `--name=value` anywhere on the command line.
// Used for --task, which has to be read before the remaining flags so that
// explicit flags override the file.
std::string Prescan(int argc, char** argv, const std::string& name) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == name && i + 1 < argc) return argv[i + 1];
    if (arg.rfind(name + "=", 0) == 0) return arg.substr(name.size() + 1);
  }
  return "";
}

// Section `key` of the toy task file, or "{}" when absent.
std::string TaskSection(const std::string& path, const std::string& key) {
  if (path.empty()) return "{}";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ola::ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw ola::Error(ola::ErrorKind::kParse, path + ": " + e.what());
  }
  return j.contains(key) ? j.at(key).dump() : "{}";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layerwise polynomial approximation of activations under a runtime budget"};
  app.require_subcommand(1);

  // The toy task file holds {"toy_data": {..}, "train": {..}}.
  std::string task_path;
  ola::ToyDataConfig toy;
  ola::TrainConfig train;
  try {
    task_path = Prescan(argc, argv, "--task");
    toy = ola::ToyDataConfig::FromJson(TaskSection(task_path, "toy_data"));
    train = ola::TrainConfig::FromJson(TaskSection(task_path, "train"));
  } catch (const ola::Error& e) {
    std::cerr << "error (" << ola::ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return ExitCode(e.kind());
  }

  // toy-data
  std::string toy_out;
  auto* toy_cmd = app.add_subcommand("toy-data", "Generate the bundled toy classification set");
  toy_cmd->add_option("--task", task_path, "Toy task JSON; explicit flags override it");
  toy_cmd->add_option("--kind", toy.kind, "spiral or blobs")->capture_default_str();
  toy_cmd->add_option("--samples", toy.samples)->capture_default_str();
  toy_cmd->add_option("--turns", toy.turns)->capture_default_str();
  toy_cmd->add_option("--classes", toy.classes)->capture_default_str();
  toy_cmd->add_option("--features", toy.feature_dim)->capture_default_str();
  toy_cmd->add_option("--radius", toy.radius)->capture_default_str();
  toy_cmd->add_option("--noise", toy.noise)->capture_default_str();
  toy_cmd->add_option("--tail-fraction", toy.tail_fraction)->capture_default_str();
  toy_cmd->add_option("--tail-min", toy.tail_min)->capture_default_str();
  toy_cmd->add_option("--tail-max", toy.tail_max)->capture_default_str();
  toy_cmd->add_option("--seed", toy.seed)->capture_default_str();
  toy_cmd->add_option("-o,--out", toy_out, "CSV output (default stdout)");

  // train
  std::string train_data, train_out, train_hidden;
  auto* train_cmd = app.add_subcommand("train", "Train a dense network with SGD");
  train_cmd->add_option("--task", task_path, "Toy task JSON; explicit flags override it");
  train_cmd->add_option("--data", train_data)->required();
  auto* hidden_opt = train_cmd->add_option("--hidden", train_hidden, "Comma-separated widths");
  train_cmd->add_option("--activation", train.activation)->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs)->capture_default_str();
  train_cmd->add_option("--batch", train.batch_size)->capture_default_str();
  train_cmd->add_option("--lr", train.learning_rate)->capture_default_str();
  train_cmd->add_option("--momentum", train.momentum)->capture_default_str();
  train_cmd->add_option("--weight-decay", train.weight_decay)->capture_default_str();
  train_cmd->add_option("--seed", train.seed)->capture_default_str();
  train_cmd->add_option("-o,--out", train_out, "Model JSON output")->required();

  // stats
  std::string stats_model, stats_data, stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "Per-layer input statistics and sensitivities");
  stats_cmd->add_option("--model", stats_model)->required();
  stats_cmd->add_option("--data", stats_data)->required();
  stats_cmd->add_option("-o,--out", stats_out);

  // fit
  std::string fit_activation = "relu", fit_out;
  double fit_mu = 0.0, fit_sigma = 1.0, fit_r = 1.0;
  int fit_degree = 7;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one activation under a Gaussian weight");
  fit_cmd->add_option("--activation", fit_activation)->capture_default_str();
  fit_cmd->add_option("--mu", fit_mu)->capture_default_str();
  fit_cmd->add_option("--sigma", fit_sigma)->capture_default_str();
  fit_cmd->add_option("-r,--ratio", fit_r)->capture_default_str();
  fit_cmd->add_option("--degree", fit_degree)->capture_default_str();
  fit_cmd->add_option("-o,--out", fit_out, "Series JSON output");

  // synth-profile
  int synth_layers = 3;
  std::string synth_degrees, synth_out;
  auto* synth_cmd = app.add_subcommand("synth-profile", "Write the synthetic latency profile");
  synth_cmd->add_option("--layers", synth_layers)->capture_default_str();
  synth_cmd->add_option("--degrees", synth_degrees, "Degree space (default built-in)");
  synth_cmd->add_option("-o,--out", synth_out);

  // optimize
  std::string opt_model, opt_stats, opt_profile, opt_degrees, opt_out;
  double opt_nu = ola::kDefaultNu;
  std::optional<int> opt_budget;
  auto* opt_cmd = app.add_subcommand("optimize", "Solve the degree allocation at one budget");
  opt_cmd->add_option("--model", opt_model, "Model JSON (for the activation kinds)")->required();
  opt_cmd->add_option("--stats", opt_stats, "Output of 'stats'")->required();
  opt_cmd->add_option("--profile", opt_profile)->required();
  opt_cmd->add_option("--nu", opt_nu)->capture_default_str();
  opt_cmd->add_option("--degrees", opt_degrees);
  opt_cmd->add_option("--budget", opt_budget, "Default: every layer at the largest degree");
  opt_cmd->add_option("-o,--out", opt_out);

  // eval
  std::string eval_model, eval_data;
  std::vector<std::string> eval_series;
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy and loss, optionally with substituted series");
  eval_cmd->add_option("--model", eval_model)->required();
  eval_cmd->add_option("--data", eval_data)->required();
  eval_cmd->add_option("--series", eval_series, "One series JSON per activation layer");

  // run
  std::string run_config, run_model, run_data, run_profile, run_degrees, run_out = "report.json";
  std::string run_r_grid;
  double run_nu = ola::kDefaultNu, run_drop = 1.0;
  std::optional<int> run_budget;
  uint64_t run_seed = 0;
  bool run_no_timestamps = false, run_no_uniform = false;
  auto* run_cmd = app.add_subcommand("run", "Full pipeline: stats, tables, DP and search");
  run_cmd->add_option("--config", run_config, "Pipeline JSON config; flags override it");
  run_cmd->add_option("--model", run_model);
  run_cmd->add_option("--data", run_data);
  run_cmd->add_option("--profile", run_profile);
  auto* nu_opt = run_cmd->add_option("--nu", run_nu);
  auto* degrees_opt = run_cmd->add_option("--degrees", run_degrees);
  run_cmd->add_option("--budget", run_budget);
  auto* drop_opt = run_cmd->add_option("--acc-drop", run_drop, "Percentage points");
  run_cmd->add_option("--r-grid", run_r_grid, "Comma-separated ratios");
  auto* seed_opt = run_cmd->add_option("--seed", run_seed);
  auto* out_opt = run_cmd->add_option("-o,--out", run_out, "Report path");
  run_cmd->add_flag("--no-timestamps", run_no_timestamps);
  run_cmd->add_flag("--no-uniform", run_no_uniform, "Skip the uniform-degree comparison");

  // probe
  std::string probe_model, probe_data, probe_r_grid, probe_out;
  ola::ProbeOptions probe;
  auto* probe_cmd = app.add_subcommand("probe", "Region probe: polynomial only inside a region");
  probe_cmd->add_option("--model", probe_model)->required();
  probe_cmd->add_option("--data", probe_data)->required();
  probe_cmd->add_option("--layer", probe.layer)->capture_default_str();
  probe_cmd->add_option("--degree", probe.degree)->capture_default_str();
  probe_cmd->add_option("--r-grid", probe_r_grid);
  probe_cmd->add_option("-o,--out", probe_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*toy_cmd) {
      Emit(ola::MakeToyData(toy).ToCsv(), toy_out);
    } else if (*train_cmd) {
      if (*hidden_opt) train.hidden_sizes = ParseInts(train_hidden);
      const ola::TrainResult result = ola::Train(ola::Dataset::Load(train_data), train);
      ola::WriteFile(train_out, result.model.ToJson());
      std::cerr << "final loss " << result.epoch_loss.back() << ", train accuracy "
                << result.train_accuracy << "\n";
    } else if (*stats_cmd) {
      const ola::SensitivityProfile stats = ola::CollectStats(
          ola::NetModel::Load(stats_model), ola::Dataset::Load(stats_data));
      Emit(stats.ToJson() + "\n", stats_out);
    } else if (*fit_cmd) {
      const ola::ScalarActivation f = ola::ScalarActivation::FromName(fit_activation);
      const ola::GaussianWeight w(fit_mu, fit_sigma, fit_r);
      const ola::HermiteSeries p = ola::Fit(f, w, fit_degree);
      Emit(p.ToJson() + "\n", fit_out);
      std::cerr << "mse " << ola::FormatExact(ola::Mse(f, w, p)) << "\n";
    } else if (*synth_cmd) {
      const ola::DegreeSpace space =
          synth_degrees.empty() ? ola::DegreeSpace::Default() : ola::DegreeSpace::Parse(synth_degrees);
      Emit(ola::SyntheticProfile(synth_layers, space).ToCsv(), synth_out);
    } else if (*opt_cmd) {
      const ola::DegreeSpace space =
          opt_degrees.empty() ? ola::DegreeSpace::Default() : ola::DegreeSpace::Parse(opt_degrees);
      const ola::NetModel model = ola::NetModel::Load(opt_model);
      const ola::SensitivityProfile stats = ola::SensitivityProfile::FromJson(ola::ReadFile(opt_stats));
      const ola::DpProblem problem = ola::BuildDpProblem(
          stats, Activations(model), ola::RuntimeProfile::Load(opt_profile, space), opt_nu, space);
      const int budget = opt_budget.value_or(ola::MaxDegreeBudget(problem.tau, space));
      const ola::Solution s = ola::SolveDp(problem, budget).SolutionAt(budget);
      Emit(s.ToJson() + "\n", opt_out);
    } else if (*eval_cmd) {
      ola::NetModel model = ola::NetModel::Load(eval_model);
      if (!eval_series.empty()) {
        std::vector<ola::HermiteSeries> series;
        for (const std::string& path : eval_series) {
          series.push_back(ola::HermiteSeries::FromJson(ola::ReadFile(path)));
        }
        model = ola::Substitute(model, series);
      }
      const ola::Dataset data = ola::Dataset::Load(eval_data);
      nlohmann::ordered_json j;
      j["accuracy"] = ola::Accuracy(model, data);
      const double loss = ola::MeanLoss(model, data);
      j["mean_loss"] = std::isfinite(loss) ? nlohmann::ordered_json(loss) : "inf";
      std::cout << j.dump(2) << "\n";
    } else if (*run_cmd) {
      ola::PipelineConfig config;
      if (!run_config.empty()) {
        const std::string base = std::filesystem::path(run_config).parent_path().string();
        config = ola::PipelineConfig::FromJson(ola::ReadFile(run_config), base);
      }
      if (!run_model.empty()) config.model_path = run_model;
      if (!run_data.empty()) config.dataset_path = run_data;
      if (!run_profile.empty()) config.profile_path = run_profile;
      if (*nu_opt) config.options.nu = run_nu;
      if (*degrees_opt) config.options.space = ola::DegreeSpace::Parse(run_degrees);
      if (run_budget) config.options.budget = run_budget;
      if (*drop_opt) config.options.acc_drop_pct = run_drop;
      if (!run_r_grid.empty()) config.options.r_grid = ParseDoubles(run_r_grid);
      if (*seed_opt) config.seed = run_seed;
      if (*out_opt || run_config.empty()) config.output_path = run_out;
      if (run_no_uniform) config.options.uniform_comparison = false;
      config.timestamps = !run_no_timestamps;
      const ola::RunReport report = ola::RunPipelineToFiles(config);
      std::cerr << "degrees";
      for (int d : report.solution.degrees) std::cerr << " " << d;
      std::cerr << ", cost " << report.solution.cost << ", accuracy " << report.approx_accuracy
                << " (baseline " << report.baseline_accuracy << ")\n";
    } else if (*probe_cmd) {
      if (!probe_r_grid.empty()) probe.r_grid = ParseDoubles(probe_r_grid);
      const ola::ProbeReport report = ola::RunRegionProbe(
          ola::NetModel::Load(probe_model), ola::Dataset::Load(probe_data), probe);
      Emit(report.ToJson(), probe_out);
    }
  } catch (const ola::Error& e) {
    std::cerr << "error (" << ola::ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return ExitCode(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

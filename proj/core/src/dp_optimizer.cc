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

#include "ola/dp_optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace ola {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack for accuracy comparisons, which are ratios of sample counts.
constexpr double kAccuracySlack = 1e-12;

// True when a is smaller than b comparing from the last entry backwards.
bool ReverseLexLess(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace

void DpProblem::Validate() const {
  const size_t n = A.size();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "allocation problem has no layers");
  if (E.size() != n || tau.num_layers() != n) {
    throw Error(ErrorKind::kInvalidArgument,
                "A, E and tau must describe the same number of layers");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!(A[i] >= 0.0) || !std::isfinite(A[i])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "layer " + std::to_string(i + 1) + " has an invalid A");
    }
    for (int d : space.degrees()) {
      const double e = LookupMse(E[i], d, static_cast<int>(i) + 1);
      if (!(e >= 0.0)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "layer " + std::to_string(i + 1) + " has a negative MSE");
      }
      tau.Cost(i, d);
    }
  }
}

std::string Solution::ToJson() const {
  nlohmann::ordered_json j;
  j["degrees"] = degrees;
  if (std::isfinite(objective)) {
    j["objective"] = objective;
  } else {
    j["objective"] = "inf";
  }
  j["cost"] = cost;
  j["budget"] = budget;
  j["r"] = r;
  return j.dump(2);
}

bool Solution::uses_sentinel() const {
  return std::find(degrees.begin(), degrees.end(), kSentinelDegree) != degrees.end();
}

const DpTable::Cell& DpTable::cell(int l, int k) const {
  if (l < 1 || l > num_layers_ || k < 0 || k > max_budget_) {
    throw Error(ErrorKind::kInvalidArgument,
                "DP cell (" + std::to_string(l) + ", " + std::to_string(k) + ") out of range");
  }
  return cells_[static_cast<size_t>(l - 1) * (max_budget_ + 1) + k];
}

int DpTable::LastDegree(int l, int k) const {
  const Cell& c = cell(l, k);
  return c.last < 0 ? kSentinelDegree : degrees_[c.last];
}

std::vector<int> DpTable::Degrees(int l, int k) const {
  std::vector<int> out(l, kSentinelDegree);
  if (!std::isfinite(Value(l, k))) return out;
  for (int layer = l; layer >= 1; --layer) {
    const Cell& c = cell(layer, k);
    if (c.last < 0) {
      out[layer - 1] = kSentinelDegree;
      continue;
    }
    out[layer - 1] = degrees_[c.last];
    k -= costs_[layer - 1][c.last];
  }
  return out;
}

Solution DpTable::SolutionAt(int k) const {
  Solution s;
  s.degrees = Degrees(num_layers_, k);
  s.objective = Value(num_layers_, k);
  s.budget = k;
  s.cost = 0;
  for (int i = 0; i < num_layers_; ++i) {
    const int d = s.degrees[i];
    if (d == kSentinelDegree) continue;
    const auto it = std::lower_bound(degrees_.begin(), degrees_.end(), d);
    s.cost += costs_[i][it - degrees_.begin()];
  }
  return s;
}

DpTable SolveDp(const DpProblem& problem, int max_budget) {
  problem.Validate();
  if (max_budget < 0) throw Error(ErrorKind::kInvalidArgument, "budget must be non-negative");

  DpTable t;
  t.num_layers_ = static_cast<int>(problem.num_layers());
  t.max_budget_ = max_budget;
  t.degrees_ = problem.space.degrees();
  const size_t m = t.degrees_.size();
  const size_t width = static_cast<size_t>(max_budget) + 1;

  std::vector<std::vector<double>> loss(t.num_layers_, std::vector<double>(m));
  t.costs_.assign(t.num_layers_, std::vector<int>(m));
  for (int i = 0; i < t.num_layers_; ++i) {
    for (size_t j = 0; j < m; ++j) {
      const int d = t.degrees_[j];
      loss[i][j] = LayerLoss(problem.A[i], problem.E[i], d, i + 1);
      t.costs_[i][j] = problem.tau.Cost(i, d);
    }
  }
  t.cells_.assign(static_cast<size_t>(t.num_layers_) * width, DpTable::Cell{-1, kInf});

  // Row 1: the best single affordable degree.
  for (size_t k = 0; k < width; ++k) {
    DpTable::Cell& c = t.cells_[k];
    for (size_t j = 0; j < m; ++j) {
      if (t.costs_[0][j] > static_cast<int>(k)) continue;
      if (loss[0][j] < c.value) c = {static_cast<int>(j), loss[0][j]};
    }
  }
  // Rows 2..N_L: extend the best prefix at the remaining budget.
  for (int l = 1; l < t.num_layers_; ++l) {
    const DpTable::Cell* prev = &t.cells_[static_cast<size_t>(l - 1) * width];
    DpTable::Cell* row = &t.cells_[static_cast<size_t>(l) * width];
    for (size_t k = 0; k < width; ++k) {
      DpTable::Cell best{-1, kInf};
      for (size_t j = 0; j < m; ++j) {
        const int c = t.costs_[l][j];
        if (c > static_cast<int>(k)) continue;
        const double v = prev[k - c].value + loss[l][j];
        if (v < best.value) best = {static_cast<int>(j), v};
      }
      row[k] = best;
    }
  }
  return t;
}

Solution BruteForce(const DpProblem& problem, int max_budget) {
  problem.Validate();
  if (max_budget < 0) throw Error(ErrorKind::kInvalidArgument, "budget must be non-negative");
  const size_t n = problem.num_layers();
  const std::vector<int>& degrees = problem.space.degrees();
  const size_t m = degrees.size();
  long long combos = 1;
  for (size_t i = 0; i < n; ++i) {
    combos *= static_cast<long long>(m);
    if (combos > kBruteForceLimit) {
      throw Error(ErrorKind::kTooLarge, "brute force over more than " +
                                            std::to_string(kBruteForceLimit) + " vectors");
    }
  }

  Solution best;
  best.degrees.assign(n, kSentinelDegree);
  best.objective = kInf;
  best.budget = max_budget;
  std::vector<size_t> index(n, 0);
  std::vector<int> current(n);
  for (long long it = 0; it < combos; ++it) {
    int cost = 0;
    double value = 0.0;
    for (size_t i = 0; i < n; ++i) {
      current[i] = degrees[index[i]];
      cost += problem.tau.Cost(i, current[i]);
      value += LayerLoss(problem.A[i], problem.E[i], current[i], static_cast<int>(i) + 1);
    }
    if (cost <= max_budget && std::isfinite(value) &&
        (value < best.objective ||
         (value == best.objective && ReverseLexLess(current, best.degrees)))) {
      best.degrees = current;
      best.objective = value;
      best.cost = cost;
    }
    for (size_t i = 0; i < n; ++i) {
      if (++index[i] < m) break;
      index[i] = 0;
    }
  }
  return best;
}

SearchResult SearchBudget(const DpTable& table, const EvaluateFn& evaluate,
                          double baseline_acc, double acc_drop_pct) {
  if (!(acc_drop_pct >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "accuracy drop must be non-negative");
  }
  SearchResult result;
  result.threshold = baseline_acc - acc_drop_pct / 100.0;
  const int n_l = table.num_layers();
  const int n_k = table.max_budget();

  int k_min = -1;
  for (int k = 0; k <= n_k; ++k) {
    if (std::isfinite(table.Value(n_l, k))) {
      k_min = k;
      break;
    }
  }
  if (k_min < 0) {
    result.solution = table.SolutionAt(n_k);
    throw BoundUnreachableError(
        "no degree vector fits within budget " + std::to_string(n_k), result);
  }
  result.k_min = k_min;

  std::map<std::vector<int>, size_t> cache;
  const auto probe = [&](int k) -> const BudgetProbe& {
    std::vector<int> degrees = table.Degrees(n_l, k);
    auto it = cache.find(degrees);
    if (it == cache.end()) {
      const Evaluation e = evaluate(degrees);
      BudgetProbe p;
      p.k = k;
      p.degrees = degrees;
      p.accuracy = e.accuracy;
      p.r = e.r;
      p.passed = e.accuracy >= result.threshold - kAccuracySlack;
      result.probes.push_back(std::move(p));
      it = cache.emplace(std::move(degrees), result.probes.size() - 1).first;
    }
    return result.probes[it->second];
  };
  const auto finish = [&](int k) {
    const BudgetProbe& p = probe(k);
    result.solution = table.SolutionAt(k);
    result.solution.r = p.r;
    result.accuracy = p.accuracy;
    return result;
  };

  if (!probe(n_k).passed) {
    const auto best = std::max_element(
        result.probes.begin(), result.probes.end(),
        [](const BudgetProbe& a, const BudgetProbe& b) { return a.accuracy < b.accuracy; });
    result.solution = table.SolutionAt(best->k);
    result.solution.r = best->r;
    result.accuracy = best->accuracy;
    throw BoundUnreachableError("accuracy bound not met even at budget " + std::to_string(n_k),
                                result);
  }

  int lo = k_min;
  int hi = n_k;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (probe(mid).passed) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const int k_star = hi;

  for (long long step = 1; k_star + step <= n_k; step *= 2) {
    const int k = static_cast<int>(k_star + step);
    if (!probe(k).passed) {
      result.anomaly = true;
      result.anomaly_detail = "accuracy passes at k=" + std::to_string(k_star) +
                              " but fails at k=" + std::to_string(k) +
                              "; used a linear scan down from N_K";
      break;
    }
  }
  if (!result.anomaly) return finish(k_star);

  int smallest = n_k;
  for (int k = n_k; k >= k_min; --k) {
    if (probe(k).passed) smallest = k;
  }
  return finish(smallest);
}

std::vector<double> DefaultRGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(1.0 + 0.25 * i);
  return grid;
}

void ValidateRGrid(const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw Error(ErrorKind::kInvalidArgument, "r grid is empty");
  for (size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] >= 1.0) || !std::isfinite(r_grid[i]) ||
        (i > 0 && !(r_grid[i] > r_grid[i - 1]))) {
      throw Error(ErrorKind::kInvalidArgument, "r grid must be increasing with every r >= 1");
    }
  }
}

TuneResult TuneR(const std::vector<double>& r_grid,
                 const std::function<double(double r)>& fit_and_evaluate) {
  ValidateRGrid(r_grid);
  TuneResult result;
  result.accuracy = -kInf;
  for (double r : r_grid) {
    const double acc = fit_and_evaluate(r);
    result.curve.emplace_back(r, acc);
    if (acc > result.accuracy) {
      result.accuracy = acc;
      result.r = r;
    }
  }
  return result;
}

}  // namespace ola

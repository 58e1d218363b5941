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

#ifndef OLA_DP_OPTIMIZER_H_
#define OLA_DP_OPTIMIZER_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ola/error.h"
#include "ola/runtime_model.h"
#include "ola/sensitivity.h"

namespace ola {

// Inputs of the relaxed allocation problem: minimize sum_i A_i E_i(d_i)
// subject to sum_i tau_i(d_i) <= k.
struct DpProblem {
  std::vector<double> A;
  std::vector<MseTable> E;
  DiscreteCostTable tau;
  DegreeSpace space;

  size_t num_layers() const { return A.size(); }
  // Throws Error(kInvalidArgument) on inconsistent sizes and Error(kLookup)
  // when a table misses a degree of the space.
  void Validate() const;
};

struct Solution {
  std::vector<int> degrees;
  double objective = 0.0;
  int cost = 0;
  int budget = 0;
  double r = 1.0;

  // {degrees, objective, cost, budget, r}; an infinite objective is written
  // as the string "inf".
  std::string ToJson() const;
  bool uses_sentinel() const;
};

// Solutions of every subproblem (l, k), l in [1, N_L], k in [0, N_K]. Each
// cell keeps its last degree and value; vectors are rebuilt by backtracking.
class DpTable {
 public:
  int num_layers() const { return num_layers_; }
  int max_budget() const { return max_budget_; }

  // l is 1-based.
  double Value(int l, int k) const { return cell(l, k).value; }
  int LastDegree(int l, int k) const;
  // All-sentinel when the cell value is infinite.
  std::vector<int> Degrees(int l, int k) const;
  // D(N_L, k) with its objective and cost.
  Solution SolutionAt(int k) const;

 private:
  friend DpTable SolveDp(const DpProblem& problem, int max_budget);

  struct Cell {
    int last = -1;  // index into degrees_, -1 for the sentinel
    double value = 0.0;
  };
  const Cell& cell(int l, int k) const;

  int num_layers_ = 0;
  int max_budget_ = 0;
  std::vector<int> degrees_;
  std::vector<std::vector<int>> costs_;  // [layer][degree index]
  std::vector<Cell> cells_;              // row-major (l - 1, k)
};

// Fills the table row by row. Ties go to the smaller degree; an empty
// feasible set yields an infinite, all-sentinel cell.
DpTable SolveDp(const DpProblem& problem, int max_budget);

inline constexpr long long kBruteForceLimit = 1000000;

// Exhaustive minimum over S^N_L with the same tie-break as SolveDp: among
// minimizers the one whose last degree is smallest, then the one before it,
// and so on. Throws Error(kTooLarge) when |S|^N_L exceeds the limit.
Solution BruteForce(const DpProblem& problem, int max_budget);

// Result of one accuracy evaluation of a degree vector.
struct Evaluation {
  double accuracy = 0.0;
  double r = 1.0;
};

struct BudgetProbe {
  int k = 0;
  std::vector<int> degrees;
  double accuracy = 0.0;
  double r = 1.0;
  bool passed = false;
};

struct SearchResult {
  Solution solution;
  double accuracy = 0.0;
  double threshold = 0.0;
  int k_min = 0;
  bool anomaly = false;
  std::string anomaly_detail;
  // Distinct evaluations in the order they were made.
  std::vector<BudgetProbe> probes;
};

class BoundUnreachableError : public Error {
 public:
  BoundUnreachableError(const std::string& what, SearchResult best)
      : Error(ErrorKind::kBoundUnreachable, what), best_(std::move(best)) {}

  // Best attempt found: the probe with the highest accuracy.
  const SearchResult& best() const { return best_; }

 private:
  SearchResult best_;
};

using EvaluateFn = std::function<Evaluation(const std::vector<int>& degrees)>;

// Smallest k in [k_min, N_K] whose degree vector keeps accuracy at or above
// baseline - acc_drop_pct / 100. Binary search, then a check at k* + 2^j; a
// failure there marks the response as non-monotone and triggers a linear scan
// down from N_K. Evaluations are cached by degree vector.
SearchResult SearchBudget(const DpTable& table, const EvaluateFn& evaluate,
                          double baseline_acc, double acc_drop_pct = 1.0);

struct TuneResult {
  double r = 1.0;
  double accuracy = 0.0;
  std::vector<std::pair<double, double>> curve;  // (r, accuracy)
};

std::vector<double> DefaultRGrid();

// Throws Error(kInvalidArgument) unless the grid is non-empty, strictly
// increasing and every r >= 1.
void ValidateRGrid(const std::vector<double>& r_grid);

// Argmax of accuracy over the grid, ties toward the smaller r.
TuneResult TuneR(const std::vector<double>& r_grid,
                 const std::function<double(double r)>& fit_and_evaluate);

}  // namespace ola

#endif  // OLA_DP_OPTIMIZER_H_

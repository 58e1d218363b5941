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

#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "ola/random.h"

namespace ola {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DpProblem MakeProblem(std::vector<double> A, std::vector<MseTable> E,
                      std::vector<std::map<int, int>> tau, std::vector<int> degrees) {
  return DpProblem{std::move(A), std::move(E), MakeCostTable(std::move(tau)),
                   DegreeSpace(std::move(degrees))};
}

// Random instance. With `exact`, A is a small integer and E a multiple of
// 1/8, so every sum is exact and ties are frequent.
DpProblem RandomProblem(Rng& rng, bool exact) {
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
      ev = exact ? ev - static_cast<double>(rng.Index(3)) : ev * rng.Uniform(0.3, 1.0);
      if (ev < 0) ev = 0;
      tv += static_cast<int>(rng.Index(6));
    }
    E.push_back(std::move(e));
    tau.push_back(std::move(t));
  }
  return MakeProblem(std::move(A), std::move(E), std::move(tau), std::move(degrees));
}

TEST(SolveDp, FirstRowTakesLargestAffordableDegree) {
  const DpProblem p = MakeProblem({1.0}, {{{3, 0.5}, {7, 0.1}}}, {{{3, 2}, {7, 4}}}, {3, 7});
  const DpTable t = SolveDp(p, 6);
  EXPECT_EQ(t.Degrees(1, 3), std::vector<int>{3});
  EXPECT_EQ(t.Degrees(1, 4), std::vector<int>{7});
  EXPECT_EQ(t.Degrees(1, 1), std::vector<int>{kSentinelDegree});
  EXPECT_EQ(t.Value(1, 1), kInf);
  EXPECT_EQ(t.Value(1, 3), 0.5);
}

TEST(SolveDp, UnconstrainedOptimumUsesMaxDegrees) {
  const MseTable e = {{3, 0.4}, {7, 0.2}, {15, 0.05}};
  const std::map<int, int> c = {{3, 1}, {7, 2}, {15, 4}};
  const DpProblem p = MakeProblem({1.0, 1.0}, {e, e}, {c, c}, {3, 7, 15});
  const Solution s = SolveDp(p, 100).SolutionAt(100);
  EXPECT_EQ(s.degrees, (std::vector<int>{15, 15}));
  EXPECT_EQ(s.cost, 8);
  EXPECT_DOUBLE_EQ(s.objective, 0.1);
}

TEST(SolveDp, InfeasibleBudgetGivesAllSentinel) {
  const MseTable e = {{3, 0.4}};
  const std::map<int, int> c = {{3, 1}};
  const DpProblem p = MakeProblem({1.0, 0.0}, {e, e}, {c, c}, {3});
  const DpTable t = SolveDp(p, 1);
  EXPECT_EQ(t.Value(2, 1), kInf);
  EXPECT_EQ(t.Degrees(2, 1), (std::vector<int>{kSentinelDegree, kSentinelDegree}));
  const Solution s = t.SolutionAt(0);
  EXPECT_EQ(s.cost, 0);
  EXPECT_TRUE(s.uses_sentinel());
  const Solution b = BruteForce(p, 0);
  EXPECT_EQ(b.degrees, (std::vector<int>{kSentinelDegree, kSentinelDegree}));
  EXPECT_EQ(b.objective, kInf);
}

TEST(SolveDp, MatchesBruteForceOnRandomInstances) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const bool exact = seed % 2 == 0;
    const DpProblem p = RandomProblem(rng, exact);
    const int n_k = 1 + static_cast<int>(rng.Index(40));
    const DpTable t = SolveDp(p, n_k);
    for (int k = 0; k <= n_k; ++k) {
      const Solution oracle = BruteForce(p, k);
      const Solution dp = t.SolutionAt(k);
      ASSERT_EQ(dp.objective, oracle.objective) << "seed " << seed << " k " << k;
      ASSERT_EQ(dp.degrees, oracle.degrees) << "seed " << seed << " k " << k;
      ASSERT_EQ(dp.cost, oracle.cost) << "seed " << seed << " k " << k;
    }
  }
}

TEST(SolveDp, CellsAreFeasibleAndMonotoneInBudget) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(1000 + seed);
    const DpProblem p = RandomProblem(rng, false);
    const DpTable t = SolveDp(p, 60);
    for (int l = 1; l <= t.num_layers(); ++l) {
      for (int k = 0; k <= 60; ++k) {
        if (k > 0) ASSERT_LE(t.Value(l, k), t.Value(l, k - 1));
        if (!std::isfinite(t.Value(l, k))) continue;
        const std::vector<int> d = t.Degrees(l, k);
        int cost = 0;
        double v = 0.0;
        for (int i = 0; i < l; ++i) {
          cost += p.tau.Cost(i, d[i]);
          v += p.A[i] * p.E[i].at(d[i]);
        }
        ASSERT_LE(cost, k);
        ASSERT_EQ(v, t.Value(l, k));
      }
    }
  }
}

TEST(SolveDp, CellsSatisfyTheRecurrence) {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const DpProblem p = RandomProblem(rng, trial % 2 == 0);
    const DpTable t = SolveDp(p, 40);
    for (int sample = 0; sample < 20 && t.num_layers() > 1; ++sample) {
      const int l = 2 + static_cast<int>(rng.Index(t.num_layers() - 1));
      const int k = static_cast<int>(rng.Index(41));
      double best = kInf;
      int best_d = kSentinelDegree;
      for (int d : p.space.degrees()) {
        const int c = p.tau.Cost(l - 1, d);
        if (c > k) continue;
        const double v = t.Value(l - 1, k - c) + p.A[l - 1] * p.E[l - 1].at(d);
        if (v < best) {
          best = v;
          best_d = d;
        }
      }
      ASSERT_EQ(t.Value(l, k), best);
      ASSERT_EQ(t.LastDegree(l, k), best_d);
      if (std::isfinite(best)) {
        std::vector<int> spliced = t.Degrees(l - 1, k - p.tau.Cost(l - 1, best_d));
        spliced.push_back(best_d);
        ASSERT_EQ(t.Degrees(l, k), spliced);
      }
    }
  }
}

TEST(SolveDp, IsDeterministic) {
  Rng a(5);
  Rng b(5);
  const DpProblem pa = RandomProblem(a, true);
  const DpProblem pb = RandomProblem(b, true);
  const DpTable ta = SolveDp(pa, 40);
  const DpTable tb = SolveDp(pb, 40);
  for (int k = 0; k <= 40; ++k) EXPECT_EQ(ta.Degrees(ta.num_layers(), k), tb.Degrees(tb.num_layers(), k));
}

// Layer by layer, the largest degree that still leaves the cheapest option
// for every later layer.
double GreedyValue(const DpProblem& p, int budget) {
  double v = 0.0;
  for (size_t i = 0; i < p.num_layers(); ++i) {
    int reserve = 0;
    for (size_t j = i + 1; j < p.num_layers(); ++j) reserve += p.tau.Cost(j, p.space.degrees()[0]);
    int chosen = kSentinelDegree;
    for (int d : p.space.degrees()) {
      if (p.tau.Cost(i, d) <= budget - reserve) chosen = d;
    }
    if (chosen == kSentinelDegree) return kInf;
    budget -= p.tau.Cost(i, chosen);
    v += p.A[i] * p.E[i].at(chosen);
  }
  return v;
}

TEST(BruteForce, BeatsGreedyOnCraftedInstance) {
  // Layer 1 gains little from its upgrade, layer 2 gains a lot; greedy spends
  // the budget on layer 1 first.
  const DpProblem p = MakeProblem({1.0, 10.0, 1.0},
                                  {{{1, 1.0}, {2, 0.9}}, {{1, 1.0}, {2, 0.1}}, {{1, 1.0}, {2, 0.9}}},
                                  {{{1, 1}, {2, 3}}, {{1, 1}, {2, 3}}, {{1, 1}, {2, 1}}}, {1, 2});
  const Solution oracle = BruteForce(p, 5);
  EXPECT_EQ(oracle.degrees, (std::vector<int>{1, 2, 2}));
  EXPECT_LT(oracle.objective, GreedyValue(p, 5));
  EXPECT_EQ(SolveDp(p, 5).SolutionAt(5).degrees, oracle.degrees);
}

TEST(BruteForce, SingleLayerMatchesFirstRow) {
  const DpProblem p = MakeProblem({2.0}, {{{1, 0.5}, {4, 0.5}, {9, 0.25}}},
                                  {{{1, 1}, {4, 2}, {9, 5}}}, {1, 4, 9});
  const DpTable t = SolveDp(p, 6);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(BruteForce(p, k).degrees, t.Degrees(1, k));
}

TEST(BruteForce, RejectsLargeInstances) {
  std::vector<MseTable> E(7);
  std::vector<std::map<int, int>> tau(7);
  std::vector<int> degrees;
  for (int d = 1; d <= 10; ++d) degrees.push_back(d);
  for (int i = 0; i < 7; ++i) {
    for (int d : degrees) {
      E[i][d] = 1.0 / d;
      tau[i][d] = d;
    }
  }
  const DpProblem p = MakeProblem(std::vector<double>(7, 1.0), E, tau, degrees);
  try {
    BruteForce(p, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooLarge);
  }
}

TEST(SolveDp, ScalesToThirtyOneLayers) {
  Rng rng(31);
  const DegreeSpace space = DegreeSpace::Default();
  const int n_l = 31;
  std::vector<double> A;
  std::vector<MseTable> E(n_l);
  std::vector<std::map<int, int>> tau(n_l);
  for (int i = 0; i < n_l; ++i) {
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
  const DpTable t = SolveDp(p, 5000);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 5.0);
  for (int k = 0; k <= 5000; ++k) {
    if (k > 0) ASSERT_LE(t.Value(n_l, k), t.Value(n_l, k - 1));
    if (std::isfinite(t.Value(n_l, k))) ASSERT_LE(t.SolutionAt(k).cost, k);
  }
}

TEST(SolveDp, RejectsInconsistentInputs) {
  const DpProblem missing = MakeProblem({1.0}, {{{3, 0.5}}}, {{{3, 1}}}, {3, 7});
  EXPECT_THROW(SolveDp(missing, 3), Error);
  const DpProblem sizes = MakeProblem({1.0, 1.0}, {{{3, 0.5}}}, {{{3, 1}}}, {3});
  EXPECT_THROW(SolveDp(sizes, 3), Error);
  const DpProblem negative = MakeProblem({-1.0}, {{{3, 0.5}}}, {{{3, 1}}}, {3});
  EXPECT_THROW(SolveDp(negative, 3), Error);
  const DpProblem ok = MakeProblem({1.0}, {{{3, 0.5}}}, {{{3, 1}}}, {3});
  EXPECT_THROW(SolveDp(ok, -1), Error);
}

// Three layers over S = {1, 2, 3}, unit costs per degree step.
DpTable SearchTable(int n_k) {
  const MseTable e = {{1, 0.5}, {2, 0.25}, {3, 0.125}};
  const std::map<int, int> c = {{1, 1}, {2, 2}, {3, 3}};
  return SolveDp(MakeProblem({1.0, 2.0, 3.0}, {e, e, e}, {c, c, c}, {1, 2, 3}), n_k);
}

int Sum(const std::vector<int>& d) {
  int s = 0;
  for (int v : d) s += v;
  return s;
}

TEST(SearchBudget, AlwaysPassingReturnsSmallestFeasibleBudget) {
  const DpTable t = SearchTable(9);
  const SearchResult r =
      SearchBudget(t, [](const std::vector<int>&) { return Evaluation{0.9, 1.0}; }, 0.9);
  EXPECT_EQ(r.k_min, 3);
  EXPECT_EQ(r.solution.budget, 3);
  EXPECT_EQ(r.solution.degrees, (std::vector<int>{1, 1, 1}));
  EXPECT_FALSE(r.anomaly);
}

TEST(SearchBudget, MonotoneResponseMatchesLinearScan) {
  const DpTable t = SearchTable(9);
  for (int threshold = 3; threshold <= 9; ++threshold) {
    const auto eval = [threshold](const std::vector<int>& d) {
      return Evaluation{Sum(d) >= threshold ? 1.0 : 0.0, 1.0};
    };
    int expected = -1;
    for (int k = 0; k <= 9 && expected < 0; ++k) {
      if (std::isfinite(t.Value(3, k)) && Sum(t.Degrees(3, k)) >= threshold) expected = k;
    }
    const SearchResult r = SearchBudget(t, eval, 1.0);
    EXPECT_EQ(r.solution.budget, expected) << threshold;
    EXPECT_FALSE(r.anomaly);
    std::set<std::vector<int>> distinct;
    for (const BudgetProbe& p : r.probes) EXPECT_TRUE(distinct.insert(p.degrees).second);
  }
}

TEST(SearchBudget, NonMonotoneResponseFallsBackToLinearScan) {
  const DpTable t = SearchTable(9);
  // Degree sum equals the budget here. Binary search lands on k = 6, the
  // ladder sees k = 8 fail, and the scan finds the isolated pass at 3.
  const auto eval = [](const std::vector<int>& d) {
    const int s = Sum(d);
    return Evaluation{(s == 3 || s == 6 || s == 7 || s == 9) ? 1.0 : 0.0, 2.0};
  };
  const SearchResult r = SearchBudget(t, eval, 1.0);
  EXPECT_TRUE(r.anomaly);
  EXPECT_FALSE(r.anomaly_detail.empty());
  EXPECT_EQ(Sum(r.solution.degrees), 3);
  EXPECT_EQ(r.solution.budget, 3);
  EXPECT_EQ(r.solution.r, 2.0);
}

TEST(SearchBudget, UnreachableBoundCarriesBestAttempt) {
  const DpTable t = SearchTable(9);
  try {
    SearchBudget(t, [](const std::vector<int>& d) { return Evaluation{0.1 * Sum(d) / 9, 1.0}; },
                 0.9);
    FAIL();
  } catch (const BoundUnreachableError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBoundUnreachable);
    EXPECT_EQ(e.best().solution.degrees, (std::vector<int>{3, 3, 3}));
  }
  try {
    SearchBudget(SearchTable(2), [](const std::vector<int>&) { return Evaluation{1.0, 1.0}; }, 0.5);
    FAIL();
  } catch (const BoundUnreachableError& e) {
    EXPECT_TRUE(e.best().solution.uses_sentinel());
  }
}

TEST(SearchBudget, ThresholdUsesPercentagePoints) {
  const DpTable t = SearchTable(9);
  const auto eval = [](const std::vector<int>& d) { return Evaluation{0.80 + 0.01 * Sum(d), 1.0}; };
  // Baseline 0.9 with a 2 pp drop needs accuracy >= 0.88, i.e. degree sum 8.
  const SearchResult r = SearchBudget(t, eval, 0.9, 2.0);
  EXPECT_EQ(Sum(r.solution.degrees), 8);
  EXPECT_DOUBLE_EQ(r.threshold, 0.88);
}

TEST(TuneR, PicksArgmaxWithTiesToSmallerRatio) {
  EXPECT_EQ(TuneR({1.0}, [](double) { return 0.3; }).r, 1.0);
  const TuneResult peak = TuneR({1.0, 1.5, 2.0, 2.5}, [](double r) { return -std::abs(r - 2.0); });
  EXPECT_EQ(peak.r, 2.0);
  EXPECT_EQ(peak.curve.size(), 4u);
  const TuneResult tie = TuneR({1.0, 2.0, 3.0}, [](double r) { return r >= 2.0 ? 0.7 : 0.5; });
  EXPECT_EQ(tie.r, 2.0);
  EXPECT_EQ(tie.accuracy, 0.7);
  EXPECT_THROW(TuneR({}, [](double) { return 0.0; }), Error);
  EXPECT_THROW(TuneR({2.0, 1.0}, [](double) { return 0.0; }), Error);
  EXPECT_THROW(TuneR({0.5}, [](double) { return 0.0; }), Error);
}

TEST(DefaultRGrid, SpansOneToFourInQuarterSteps) {
  const std::vector<double> grid = DefaultRGrid();
  ASSERT_EQ(grid.size(), 13u);
  EXPECT_EQ(grid.front(), 1.0);
  EXPECT_EQ(grid[1], 1.25);
  EXPECT_EQ(grid.back(), 4.0);
}

TEST(Solution, JsonFields) {
  Solution s{{3, -1}, kInf, 2, 5, 1.5};
  const std::string j = s.ToJson();
  EXPECT_NE(j.find("\"objective\": \"inf\""), std::string::npos);
  EXPECT_NE(j.find("\"budget\": 5"), std::string::npos);
  EXPECT_TRUE(s.uses_sentinel());
}

}  // namespace
}  // namespace ola

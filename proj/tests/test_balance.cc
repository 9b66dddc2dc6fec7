// Copyright 2026 The Authors.
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

#include <gtest/gtest.h>

#include <cmath>

#include "tsm/balance.hpp"
#include "tsm/conditional_gradient.hpp"
#include "tsm/generators.hpp"

namespace tsm {
namespace {

// First-stage demands 0..nd-1 (ids), supplies by weight, edges as (demand, supply) ids.
TwoStageInstance first_stage_only(int nd, const std::vector<double>& weights,
                                  const std::vector<std::pair<int, int>>& edges) {
  std::vector<DemandVertex> d;
  for (int i = 0; i < nd; ++i) d.push_back({i, Stage::kFirst, 1.0, {}, {}});
  std::vector<SupplyVertex> s;
  for (int j = 0; j < static_cast<int>(weights.size()); ++j) s.push_back({j, weights[j]});
  std::vector<EdgeSpec> e;
  for (auto [a, b] : edges) e.push_back({a, b, {}});
  return TwoStageInstance(d, s, e);
}

double objective_at(const TwoStageInstance& inst, const std::vector<double>& y, ConvexG g = {}) {
  double f = 0.0;
  for (int j = 0; j < inst.num_supplies(); ++j) {
    const double w = inst.supply(j).weight;
    if (w > 0) f += g.value(w * (1.0 - y[j])) / w;
  }
  return f;
}

TEST(Balance, StarSplitsEvenly) {
  const auto inst = first_stage_only(1, {1, 1}, {{0, 0}, {0, 1}});
  const auto sol = solve_balance(inst);
  EXPECT_TRUE(sol.converged);
  EXPECT_NEAR(sol.x.value(0, 0), 0.5, 1e-9);
  EXPECT_NEAR(sol.x.value(0, 1), 0.5, 1e-9);
  EXPECT_NEAR(sol.residual[0], 0.5, 1e-9);
  EXPECT_NEAR(sol.residual[1], 0.5, 1e-9);
}

TEST(Balance, WeightedStarMatchesGridSearch) {
  const auto inst = first_stage_only(1, {1, 2}, {{0, 0}, {0, 1}});
  const auto sol = solve_balance(inst);
  // Grid search over x1 with x2 = 1 - x1 (full saturation is optimal as g is increasing).
  double best = 1e300, arg = 0;
  for (int k = 0; k <= 300000; ++k) {
    const double x1 = k / 300000.0;
    const double f = objective_at(inst, {x1, 1 - x1});
    if (f < best) {
      best = f;
      arg = x1;
    }
  }
  EXPECT_NEAR(sol.x.value(0, 0), arg, 1e-5);
  EXPECT_NEAR(sol.x.value(0, 0), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(sol.residual[0], 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(sol.residual[1], 2.0 / 3.0, 1e-9);
  const auto dec = decompose(inst, sol);
  ASSERT_EQ(dec.levels.size(), 1u);
  EXPECT_NEAR(dec.levels[0].c, 2.0 / 3.0, 1e-9);
  EXPECT_LE(closed_form_discrepancy(inst, dec), 1e-9);
}

TEST(Balance, EmptyFirstStage) {
  const auto inst = first_stage_only(0, {1, 3}, {});
  const auto sol = solve_balance(inst);
  EXPECT_EQ(sol.x.entries.size(), 0u);
  EXPECT_NEAR(sol.objective, objective_at(inst, {0, 0}), 1e-12);
  const auto dec = decompose(inst, sol);
  EXPECT_TRUE(dec.level0_supplies.empty());
  EXPECT_TRUE(verify_decomposition(inst, sol, dec).all_pass());
}

TEST(Decompose, SingleEdgeIsLevelZero) {
  const auto inst = first_stage_only(1, {1}, {{0, 0}});
  const auto sol = solve_balance(inst);
  const auto dec = decompose(inst, sol);
  EXPECT_EQ(dec.level0_supplies, std::vector<int>{0});
  EXPECT_EQ(dec.level0_demands, std::vector<int>{0});
  EXPECT_TRUE(dec.levels.empty());
}

TEST(Decompose, UnweightedStarHasOneLevel) {
  const auto inst = first_stage_only(1, {1, 1}, {{0, 0}, {0, 1}});
  const auto sol = solve_balance(inst);
  const auto dec = decompose(inst, sol);
  EXPECT_TRUE(dec.level0_supplies.empty());
  ASSERT_EQ(dec.levels.size(), 1u);
  EXPECT_NEAR(dec.levels[0].c, 0.5, 1e-9);
}

TEST(Decompose, DisjointUnionOfStars) {
  // K_{2,1}: demands 0,1 on supply 0.  K_{1,2}: demand 2 on supplies 1,2.
  const auto inst = first_stage_only(3, {1, 1, 1}, {{0, 0}, {1, 0}, {2, 1}, {2, 2}});
  const auto sol = solve_balance(inst);
  const auto dec = decompose(inst, sol);
  EXPECT_EQ(dec.level0_supplies, std::vector<int>{0});
  ASSERT_EQ(dec.levels.size(), 1u);
  EXPECT_NEAR(dec.levels[0].c, 0.5, 1e-9);
  EXPECT_TRUE(verify_decomposition(inst, sol, dec).all_pass());
}

TEST(Decompose, ZeroWeightSupply) {
  const auto inst = first_stage_only(1, {0, 1, 1}, {{0, 0}, {0, 1}, {0, 2}});
  const auto sol = solve_balance(inst);
  const auto dec = decompose(inst, sol);
  EXPECT_EQ(dec.zero_weight_supplies, std::vector<int>{0});
  EXPECT_TRUE(verify_decomposition(inst, sol, dec).all_pass());
}

TEST(Decompose, CorruptedSolutionFails) {
  const auto inst = first_stage_only(2, {1, 1, 2}, {{0, 0}, {0, 1}, {1, 1}, {1, 2}});
  auto sol = solve_balance(inst);
  auto dec = decompose(inst, sol);
  ASSERT_TRUE(verify_decomposition(inst, sol, dec).all_pass());
  // Move 0.1 of demand 0's mass from supply 0 to supply 1.
  for (auto& e : sol.x.entries) {
    if (e.demand == 0 && e.supply == 0) e.value -= 0.1;
    if (e.demand == 0 && e.supply == 1) e.value += 0.1;
  }
  sol.y[0] -= 0.1;
  sol.y[1] += 0.1;
  for (int j = 0; j < 3; ++j) sol.residual[j] = inst.supply(j).weight * (1 - sol.y[j]);
  EXPECT_FALSE(verify_decomposition(inst, sol, dec).all_pass());
}

RandomInstanceSpec random_spec(Rng& rng) {
  RandomInstanceSpec spec;
  spec.first_stage = 1 + static_cast<int>(rng.index(30));
  spec.second_stage = 1;
  spec.supplies = 1 + static_cast<int>(rng.index(30));
  spec.edge_prob = rng.uniform(0.05, 0.4);
  spec.weight_lo = 0.5;
  spec.weight_hi = 2.0;
  return spec;
}

TEST(Balance, RandomInstancesPassChecks) {
  Rng rng(17);
  for (uint64_t t = 0; t < 20; ++t) {
    const auto inst = gen_random(random_spec(rng), t);
    const auto sol = solve_balance(inst);
    EXPECT_TRUE(sol.converged);
    const auto dec = decompose(inst, sol);
    EXPECT_TRUE(verify_decomposition(inst, sol, dec).all_pass()) << "instance " << t;
    EXPECT_LE(closed_form_discrepancy(inst, dec), 1e-5);
    const double rb = refined_bound(sol);
    EXPECT_GE(rb, 0.75);
    EXPECT_LE(rb, 1.0);
  }
}

TEST(Balance, OptimalAgainstRandomFeasiblePoints) {
  // Any fractional matching built from greedy random matchings is feasible;
  // none may beat the solver's objective.
  Rng rng(23);
  for (uint64_t t = 0; t < 10; ++t) {
    RandomInstanceSpec spec;
    spec.first_stage = 5;
    spec.supplies = 6;
    spec.edge_prob = 0.5;
    spec.weight_lo = 0.5;
    spec.weight_hi = 2.0;
    const auto inst = gen_random(spec, 100 + t);
    const auto sol = solve_balance(inst);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> y(inst.num_supplies(), 0.0);
      const int k = 3;
      for (int m = 0; m < k; ++m) {
        std::vector<char> used(inst.num_supplies(), 0);
        std::vector<int> edges = inst.first_stage_edges();
        for (int i = static_cast<int>(edges.size()) - 1; i > 0; --i) {
          std::swap(edges[i], edges[rng.index(i + 1)]);
        }
        std::vector<char> dused(inst.num_demands(), 0);
        for (int e : edges) {
          const auto& ed = inst.edges()[e];
          if (used[ed.supply] || dused[ed.demand]) continue;
          used[ed.supply] = dused[ed.demand] = 1;
          y[ed.supply] += 1.0 / k;
        }
      }
      EXPECT_GE(objective_at(inst, y) + 1e-9, sol.objective);
    }
  }
}

TEST(GInvariance, StarAndWeightedStar) {
  EXPECT_LE(check_g_invariance(first_stage_only(1, {1, 1}, {{0, 0}, {0, 1}})), 1e-6);
  EXPECT_LE(check_g_invariance(first_stage_only(1, {1, 2}, {{0, 0}, {0, 1}})), 1e-4);
}

TEST(GInvariance, RandomEightByEight) {
  for (uint64_t t = 0; t < 5; ++t) {
    RandomInstanceSpec spec;
    spec.first_stage = 8;
    spec.supplies = 8;
    spec.edge_prob = 0.4;
    spec.weight_lo = 0.5;
    spec.weight_hi = 2.0;
    EXPECT_LE(check_g_invariance(gen_random(spec, 500 + t)), 1e-4);
  }
}

TEST(ConditionalGradient, InteriorOptimum) {
  SeparableProblem p;
  p.num_left = 2;
  p.num_right = 2;
  p.arcs = {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}};
  const double target[] = {0.3, 0.9};
  p.right_value = [&](int j, double y) { return -(target[j] - y) * (target[j] - y); };
  p.right_slope = [&](int j, double y) { return 2 * (target[j] - y); };
  const auto r = maximize_separable_concave(p, {1e-12, 20000});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0] + r.x[2], 0.3, 1e-5);
  EXPECT_NEAR(r.x[1] + r.x[3], 0.9, 1e-5);
  EXPECT_NEAR(r.objective, 0.0, 1e-10);
}

TEST(ConditionalGradient, WaterFillingAndActiveSet) {
  // max log(1 + y0) + log(1 + 2 y1), y0 + y1 <= 1: y = (1/4, 3/4).
  SeparableProblem p;
  p.num_left = 1;
  p.num_right = 2;
  p.arcs = {{0, 0, 0}, {0, 1, 0}};
  const double c[] = {1, 2};
  p.right_value = [&](int j, double y) { return std::log1p(c[j] * y); };
  p.right_slope = [&](int j, double y) { return c[j] / (1 + c[j] * y); };
  const auto r = maximize_separable_concave(p, {1e-12, 20000});
  EXPECT_NEAR(r.x[0], 0.25, 1e-6);
  EXPECT_NEAR(r.x[1], 0.75, 1e-6);
  double total = 0.0;
  std::vector<double> rebuilt(2, 0.0);
  for (std::size_t a = 0; a < r.atoms.size(); ++a) {
    total += r.weights[a];
    for (int e : r.atoms[a]) rebuilt[e] += r.weights[a];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(rebuilt[0], r.x[0], 1e-12);
  EXPECT_NEAR(rebuilt[1], r.x[1], 1e-12);
}

TEST(ConvexG, Derivatives) {
  for (GKind k : {GKind::kQuadratic, GKind::kExponential}) {
    const ConvexG g{k};
    for (double x : {0.0, 0.3, 1.7}) {
      const double h = 1e-6;
      EXPECT_NEAR(g.derivative(x), (g.value(x + h) - g.value(x - h)) / (2 * h), 1e-5);
    }
  }
}

}  // namespace
}  // namespace tsm

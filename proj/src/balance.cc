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

#include "tsm/balance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsm/conditional_gradient.hpp"

namespace tsm {

double ConvexG::value(double x) const {
  return kind == GKind::kQuadratic ? 0.5 * x * x : std::exp(x);
}

double ConvexG::derivative(double x) const {
  return kind == GKind::kQuadratic ? x : std::exp(x);
}

namespace {

double balance_objective(const TwoStageInstance& inst, const ConvexG& g,
                         const std::vector<double>& y) {
  double s = 0.0;
  for (int j = 0; j < inst.num_supplies(); ++j) {
    const double w = inst.supply(j).weight;
    if (w > 0.0) s += g.value(w * (1.0 - y[j])) / w;
  }
  return s;
}

}  // namespace

BalanceSolution solve_balance(const TwoStageInstance& instance, ConvexG g, double tol,
                              int max_iter) {
  const auto& fs = instance.first_stage_edges();
  SeparableProblem prob;
  prob.num_left = instance.num_demands();
  prob.num_right = instance.num_supplies();
  for (int e : fs) {
    const Edge& ed = instance.edges()[e];
    prob.arcs.push_back({ed.demand, ed.supply, 0.0});
  }
  prob.right_value = [&](int j, double load) {
    const double w = instance.supply(j).weight;
    return w > 0.0 ? -g.value(w * (1.0 - load)) / w : 0.0;
  };
  prob.right_slope = [&](int j, double load) {
    const double w = instance.supply(j).weight;
    return w > 0.0 ? g.derivative(w * (1.0 - load)) : 0.0;
  };
  const CgResult cg = maximize_separable_concave(prob, {tol, max_iter});

  BalanceSolution sol;
  sol.y.assign(instance.num_supplies(), 0.0);
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Edge& ed = instance.edges()[fs[k]];
    const double v = cg.x.empty() ? 0.0 : cg.x[k];
    if (v > 0.0) sol.x.entries.push_back({ed.demand, ed.supply, v});
    sol.y[ed.supply] += v;
  }
  sol.residual.resize(instance.num_supplies());
  for (int j = 0; j < instance.num_supplies(); ++j) {
    sol.residual[j] = instance.supply(j).weight * (1.0 - sol.y[j]);
  }
  sol.objective = balance_objective(instance, g, sol.y);
  sol.solver_gap = cg.gap;
  sol.iterations = cg.iterations;
  sol.converged = cg.converged;
  return sol;
}

Decomposition decompose(const TwoStageInstance& instance, const BalanceSolution& solution,
                        double group_tol) {
  const int nd = instance.num_demands();
  const int ns = instance.num_supplies();
  const double support_tol = group_tol / 10.0;
  Decomposition dec;

  std::vector<char> s0(ns, 0), zero(ns, 0), d0(nd, 0);
  for (int j = 0; j < ns; ++j) {
    if (instance.supply(j).weight <= 0.0) {
      zero[j] = 1;
      dec.zero_weight_supplies.push_back(j);
    } else if (solution.residual[j] <= group_tol) {
      s0[j] = 1;
      dec.level0_supplies.push_back(j);
    }
  }
  std::vector<FractionalEntry> support;
  for (const auto& e : solution.x.entries) {
    if (e.value > support_tol) support.push_back(e);
  }
  for (const auto& e : support) {
    if (s0[e.supply]) d0[e.demand] = 1;
  }
  for (int i = 0; i < nd; ++i) {
    if (d0[i]) dec.level0_demands.push_back(i);
  }

  // Union-find over demands [0, nd) and supplies [nd, nd + ns).
  std::vector<int> parent(nd + ns);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::vector<char> touched(nd, 0);
  for (const auto& e : support) {
    if (d0[e.demand] || s0[e.supply] || zero[e.supply]) continue;
    touched[e.demand] = 1;
    parent[find(e.demand)] = find(nd + e.supply);
  }
  std::vector<int> root_level(nd + ns, -1);
  std::vector<Level> comps;
  for (int j = 0; j < ns; ++j) {
    if (s0[j] || zero[j]) continue;
    const int r = find(nd + j);
    if (root_level[r] < 0) {
      root_level[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[root_level[r]].supplies.push_back(j);
  }
  for (int i = 0; i < nd; ++i) {
    if (!touched[i]) continue;
    comps[root_level[find(i)]].demands.push_back(i);
  }
  for (auto& l : comps) {
    double s = 0.0;
    for (int j : l.supplies) s += solution.residual[j];
    l.c = s / static_cast<double>(l.supplies.size());
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const Level& a, const Level& b) { return a.c < b.c; });
  // Merge neighbours whose c agree within group_tol (chained).
  for (auto& l : comps) {
    if (!dec.levels.empty() && l.c - dec.levels.back().c <= group_tol) {
      Level& m = dec.levels.back();
      m.demands.insert(m.demands.end(), l.demands.begin(), l.demands.end());
      m.supplies.insert(m.supplies.end(), l.supplies.begin(), l.supplies.end());
    } else {
      dec.levels.push_back(std::move(l));
    }
  }
  for (auto& l : dec.levels) {
    std::sort(l.demands.begin(), l.demands.end());
    std::sort(l.supplies.begin(), l.supplies.end());
    double s = 0.0;
    for (int j : l.supplies) s += solution.residual[j];
    l.c = s / static_cast<double>(l.supplies.size());
  }
  return dec;
}

DecompositionReport verify_decomposition(const TwoStageInstance& instance,
                                         const BalanceSolution& solution,
                                         const Decomposition& dec, double tol) {
  DecompositionReport rep;
  const int nd = instance.num_demands();
  const int ns = instance.num_supplies();
  auto note = [&](PropertyCheck& p, double violation) {
    if (violation > tol) p.pass = false;
    p.worst = std::max(p.worst, violation);
  };

  auto spread = [&](const std::vector<int>& supplies) {
    if (supplies.empty()) return 0.0;
    double lo = solution.residual[supplies[0]], hi = lo;
    for (int j : supplies) {
      lo = std::min(lo, solution.residual[j]);
      hi = std::max(hi, solution.residual[j]);
    }
    return hi - lo;
  };
  note(rep.uniformity, spread(dec.level0_supplies));
  for (const auto& l : dec.levels) note(rep.uniformity, spread(l.supplies));

  // c per vertex; NaN for demands outside every level.
  const double none = std::nan("");
  std::vector<double> cd(nd, none), cs(ns, none);
  for (int i : dec.level0_demands) cd[i] = 0.0;
  for (int j : dec.level0_supplies) cs[j] = 0.0;
  for (int j : dec.zero_weight_supplies) cs[j] = 0.0;
  for (const auto& l : dec.levels) {
    for (int i : l.demands) cd[i] = l.c;
    for (int j : l.supplies) cs[j] = l.c;
  }
  for (int e : instance.first_stage_edges()) {
    const Edge& ed = instance.edges()[e];
    if (std::isnan(cd[ed.demand]) || std::isnan(cs[ed.supply])) continue;
    note(rep.monotonicity, std::max(0.0, cs[ed.supply] - cd[ed.demand]));
  }

  std::vector<double> load(nd, 0.0);
  for (const auto& e : solution.x.entries) load[e.demand] += e.value;
  for (const auto& l : dec.levels) {
    for (int i : l.demands) note(rep.saturation, std::max(0.0, 1.0 - load[i]));
  }
  return rep;
}

double closed_form_discrepancy(const TwoStageInstance& instance, const Decomposition& dec) {
  double worst = 0.0;
  for (const auto& l : dec.levels) {
    double inv = 0.0;
    for (int j : l.supplies) inv += 1.0 / instance.supply(j).weight;
    const double c = (static_cast<double>(l.supplies.size()) -
                      static_cast<double>(l.demands.size())) / inv;
    worst = std::max(worst, std::abs(c - l.c));
  }
  return worst;
}

double check_g_invariance(const TwoStageInstance& instance, double tol) {
  const BalanceSolution a = solve_balance(instance, {GKind::kQuadratic}, tol / 10.0);
  const BalanceSolution b = solve_balance(instance, {GKind::kExponential}, tol / 10.0);
  double worst = 0.0;
  for (int j = 0; j < instance.num_supplies(); ++j) {
    worst = std::max(worst, std::abs(a.y[j] - b.y[j]));
  }
  return worst;
}

double refined_bound(const BalanceSolution& solution) {
  double b = 1.0;
  for (double y : solution.y) {
    const double yc = std::clamp(y, 0.0, 1.0);
    b = std::min(b, 1.0 - yc + yc * yc);
  }
  return b;
}

}  // namespace tsm

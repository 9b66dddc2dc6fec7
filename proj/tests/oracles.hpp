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

// Brute-force reference computations for small instances.
#ifndef TSM_TESTS_ORACLES_HPP_
#define TSM_TESTS_ORACLES_HPP_

#include <algorithm>
#include <functional>
#include <vector>

#include "tsm/instance.hpp"
#include "tsm/matching.hpp"

namespace oracle {

// Max total weight over all matchings of an arc list; exhaustive search.
inline double max_weight(int num_left, int num_right, const std::vector<tsm::Arc>& arcs) {
  std::vector<std::vector<int>> by_left(num_left);
  for (int k = 0; k < static_cast<int>(arcs.size()); ++k) by_left[arcs[k].left].push_back(k);
  std::vector<char> used(num_right, 0);
  double best = 0.0;
  std::function<void(int, double)> go = [&](int l, double acc) {
    if (l == num_left) {
      best = std::max(best, acc);
      return;
    }
    go(l + 1, acc);
    for (int k : by_left[l]) {
      const int r = arcs[k].right;
      if (used[r]) continue;
      used[r] = 1;
      go(l + 1, acc + arcs[k].weight);
      used[r] = 0;
    }
  };
  go(0, 0.0);
  return best;
}

// Arcs from instance edges restricted to the given demand/supply positions.
// weight(e) is evaluated per edge index.
inline double best_matching(const tsm::TwoStageInstance& inst, const std::vector<int>& demands,
                            const std::vector<char>& supply_ok,
                            const std::function<double(int)>& weight) {
  std::vector<tsm::Arc> arcs;
  for (int a = 0; a < static_cast<int>(demands.size()); ++a) {
    for (int e : inst.demand_edges(demands[a])) {
      const int s = inst.edges()[e].supply;
      if (supply_ok[s]) arcs.push_back({a, s, weight(e)});
    }
  }
  return max_weight(static_cast<int>(demands.size()), inst.num_supplies(), arcs);
}

inline std::function<double(int)> value_fn(const tsm::TwoStageInstance& inst) {
  if (inst.edge_weighted()) return [&inst](int e) { return inst.edges()[e].weight; };
  return [&inst](int e) { return inst.supply(inst.edges()[e].supply).weight; };
}

// Calls fn(probability, available) for every realization of the second stage.
inline void for_each_realization(const tsm::TwoStageInstance& inst,
                                 const std::function<void(double, const std::vector<int>&)>& fn) {
  if (inst.realization_mode() == tsm::RealizationMode::kScenarioList) {
    for (const auto& sc : inst.scenarios()) fn(sc.probability, sc.demands);
    return;
  }
  const auto& d2 = inst.second_stage();
  const int n = static_cast<int>(d2.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double p = 1.0;
    std::vector<int> avail;
    for (int k = 0; k < n; ++k) {
      const double pi = inst.demand(d2[k]).availability;
      if (mask >> k & 1u) {
        p *= pi;
        avail.push_back(d2[k]);
      } else {
        p *= 1.0 - pi;
      }
    }
    if (p > 0.0) fn(p, avail);
  }
}

inline double opt_offline(const tsm::TwoStageInstance& inst) {
  const auto w = value_fn(inst);
  const std::vector<char> all(inst.num_supplies(), 1);
  double total = 0.0;
  for_each_realization(inst, [&](double p, const std::vector<int>& avail) {
    std::vector<int> d = inst.first_stage();
    d.insert(d.end(), avail.begin(), avail.end());
    total += p * best_matching(inst, d, all, w);
  });
  return total;
}

// Calls fn(first_stage_matching) for every matching of first-stage edges.
inline void for_each_first_stage(const tsm::TwoStageInstance& inst,
                                 const std::function<void(const std::vector<int>&)>& fn) {
  const auto& d1 = inst.first_stage();
  std::vector<char> used(inst.num_supplies(), 0);
  std::vector<int> chosen;
  std::function<void(int)> go = [&](int k) {
    if (k == static_cast<int>(d1.size())) {
      fn(chosen);
      return;
    }
    go(k + 1);
    for (int e : inst.demand_edges(d1[k])) {
      const int s = inst.edges()[e].supply;
      if (used[s]) continue;
      used[s] = 1;
      chosen.push_back(e);
      go(k + 1);
      chosen.pop_back();
      used[s] = 0;
    }
  };
  go(0);
}

// Expected value of committing to first-stage edge set m1, then matching
// the realized second stage optimally.
inline double commit_value(const tsm::TwoStageInstance& inst, const std::vector<int>& m1) {
  const auto w = value_fn(inst);
  std::vector<char> free(inst.num_supplies(), 1);
  double first = 0.0;
  for (int e : m1) {
    free[inst.edges()[e].supply] = 0;
    first += w(e);
  }
  double second = 0.0;
  for_each_realization(inst, [&](double p, const std::vector<int>& avail) {
    second += p * best_matching(inst, avail, free, w);
  });
  return first + second;
}

inline double opt_online(const tsm::TwoStageInstance& inst) {
  double best = 0.0;
  for_each_first_stage(inst, [&](const std::vector<int>& m1) {
    best = std::max(best, commit_value(inst, m1));
  });
  return best;
}

}  // namespace oracle

#endif  // TSM_TESTS_ORACLES_HPP_

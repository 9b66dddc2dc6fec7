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

#include "tsm/submodular.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "tsm/errors.hpp"
#include "tsm/random.hpp"

namespace tsm {
namespace {

std::vector<int> complement(const TwoStageInstance& instance, std::span<const int> t) {
  std::vector<char> in(instance.num_supplies(), 0);
  for (int j : t) in[j] = 1;
  std::vector<int> out;
  for (int j = 0; j < instance.num_supplies(); ++j) {
    if (!in[j]) out.push_back(j);
  }
  return out;
}

}  // namespace

RankOracle::RankOracle(const TwoStageInstance& instance, int n_samples, uint64_t seed)
    : instance_(&instance) {
  if (n_samples < 1) throw ConfigError("RankOracle: n_samples must be >= 1");
  samples_.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    Rng rng(seed, static_cast<uint64_t>(s), Stream::kRealization);
    samples_.push_back(sample_realization(instance, rng).available);
  }
}

Estimate RankOracle::estimate(std::span<const int> supplies) const {
  if (supplies.empty()) return {};
  double sum = 0.0, sum2 = 0.0;
  for (const auto& avail : samples_) {
    const double v = max_supply_weight_matching(*instance_, avail, supplies).value;
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(samples_.size());
  Estimate e;
  e.mean = sum / n;
  if (n > 1) {
    const double var = std::max(0.0, (sum2 - n * e.mean * e.mean) / (n - 1.0));
    e.stderr_ = std::sqrt(var / n);
  }
  return e;
}

double exact_fw(const TwoStageInstance& instance, std::span<const int> supplies) {
  if (supplies.empty()) return 0.0;
  if (instance.realization_mode() == RealizationMode::kScenarioList) {
    double total = 0.0;
    for (const auto& sc : instance.scenarios()) {
      total += sc.probability * max_supply_weight_matching(instance, sc.demands, supplies).value;
    }
    return total;
  }
  const auto& d2 = instance.second_stage();
  if (d2.size() > 20) {
    throw SizeGuardError("exact_fw: " + std::to_string(d2.size()) +
                         " second-stage demands exceed the enumeration limit of 20");
  }
  // Only demands adjacent to T matter.
  std::vector<char> in_t(instance.num_supplies(), 0);
  for (int j : supplies) in_t[j] = 1;
  std::vector<int> rel;
  for (int i : d2) {
    for (int e : instance.demand_edges(i)) {
      if (in_t[instance.edges()[e].supply]) {
        rel.push_back(i);
        break;
      }
    }
  }
  const int k = static_cast<int>(rel.size());
  double total = 0.0;
  std::vector<int> avail;
  for (uint32_t mask = 0; mask < (1u << k); ++mask) {
    double p = 1.0;
    avail.clear();
    for (int b = 0; b < k; ++b) {
      const double pi = instance.demand(rel[b]).availability;
      if (mask >> b & 1u) {
        p *= pi;
        avail.push_back(rel[b]);
      } else {
        p *= 1.0 - pi;
      }
    }
    if (p == 0.0 || avail.empty()) continue;
    total += p * max_supply_weight_matching(instance, avail, supplies).value;
  }
  return total;
}

int first_stage_rank(const TwoStageInstance& instance) {
  std::vector<int> all(instance.num_supplies());
  for (int j = 0; j < instance.num_supplies(); ++j) all[j] = j;
  return static_cast<int>(max_card_matching(instance, instance.first_stage(), all).size());
}

bool is_dual_independent(const TwoStageInstance& instance, std::span<const int> supplies) {
  const std::vector<int> rest = complement(instance, supplies);
  return static_cast<int>(max_card_matching(instance, instance.first_stage(), rest).size()) ==
         first_stage_rank(instance);
}

bool is_dual_base(const TwoStageInstance& instance, std::span<const int> supplies) {
  return static_cast<int>(supplies.size()) == instance.num_supplies() - first_stage_rank(instance) &&
         is_dual_independent(instance, supplies);
}

std::vector<DualBase> enumerate_dual_bases(const TwoStageInstance& instance) {
  const int ns = instance.num_supplies();
  if (ns > 20) {
    throw SizeGuardError("enumerate_dual_bases: " + std::to_string(ns) +
                         " supplies exceed the enumeration limit of 20");
  }
  const int rank = first_stage_rank(instance);
  const int size = ns - rank;
  std::vector<DualBase> out;
  std::vector<int> t;
  for (uint32_t mask = 0; mask < (1u << ns); ++mask) {
    if (std::popcount(mask) != size) continue;
    t.clear();
    for (int j = 0; j < ns; ++j) {
      if (mask >> j & 1u) t.push_back(j);
    }
    const std::vector<int> rest = complement(instance, t);
    if (static_cast<int>(max_card_matching(instance, instance.first_stage(), rest).size()) == rank) {
      out.push_back({t});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const DualBase& a, const DualBase& b) { return a.supplies < b.supplies; });
  return out;
}

double complement_weight(const TwoStageInstance& instance, std::span<const int> supplies) {
  double total = instance.total_supply_weight();
  for (int j : supplies) total -= instance.supply(j).weight;
  return total;
}

DualBase local_search_base(const TwoStageInstance& instance, double epsilon,
                           const RankOracle& oracle, int max_passes) {
  if (!(epsilon > 0.0)) throw ConfigError("local_search_base: epsilon must be positive");
  const int ns = instance.num_supplies();
  std::vector<int> all(ns);
  for (int j = 0; j < ns; ++j) all[j] = j;
  const Matching m = max_card_matching(instance, instance.first_stage(), all);
  const int rank = static_cast<int>(m.size());
  std::vector<char> in_t(ns, 1);
  for (const auto& pr : m.pairs) in_t[pr.supply] = 0;

  auto members = [&](const std::vector<char>& flag) {
    std::vector<int> t;
    for (int j = 0; j < ns; ++j) {
      if (flag[j]) t.push_back(j);
    }
    return t;
  };
  auto objective = [&](const std::vector<int>& t) {
    return oracle.estimate(t).mean + complement_weight(instance, t);
  };
  const double threshold = epsilon * instance.total_supply_weight();

  std::vector<int> t = members(in_t);
  double current = objective(t);
  for (int pass = 0; pass < max_passes; ++pass) {
    double best = current + threshold;
    int best_out = -1, best_in = -1;
    for (int out = 0; out < ns; ++out) {
      if (!in_t[out]) continue;
      for (int in = 0; in < ns; ++in) {
        if (in_t[in]) continue;
        std::vector<char> flag = in_t;
        flag[out] = 0;
        flag[in] = 1;
        const std::vector<int> cand = members(flag);
        const std::vector<int> rest = complement(instance, cand);
        if (static_cast<int>(max_card_matching(instance, instance.first_stage(), rest).size()) !=
            rank) {
          continue;
        }
        const double v = objective(cand);
        if (v > best) {
          best = v;
          best_out = out;
          best_in = in;
        }
      }
    }
    if (best_out < 0) break;
    in_t[best_out] = 0;
    in_t[best_in] = 1;
    t = members(in_t);
    current = best;
  }
  return {t};
}

Matching first_stage_from_base(const TwoStageInstance& instance, const DualBase& base) {
  const std::vector<int> rest = complement(instance, base.supplies);
  Matching m = max_card_matching(instance, instance.first_stage(), rest);
  if (m.size() != rest.size()) {
    throw ValidationError("first_stage_from_base: S \\ T is not matchable by the first stage");
  }
  return m;
}

}  // namespace tsm

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

#include "tsm/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsm/errors.hpp"
#include "tsm/random.hpp"

namespace tsm {

TwoStageInstance gen_worst_case(int n) {
  if (n < 1) throw ConfigError("gen_worst_case: n must be >= 1");
  std::vector<DemandVertex> demands;
  std::vector<SupplyVertex> supplies;
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n; ++i) demands.push_back({i, Stage::kFirst, 1.0, {}, {}});
  for (int k = 0; k < 2 * n; ++k) demands.push_back({n + k, Stage::kSecond, 0.5, {}, {}});
  for (int j = 0; j < 2 * n; ++j) supplies.push_back({j, 1.0});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 2 * n; ++j) edges.push_back({i, j, {}});
  }
  for (int k = 0; k < 2 * n; ++k) edges.push_back({n + k, k, {}});
  return TwoStageInstance(std::move(demands), std::move(supplies), std::move(edges));
}

TwoStageInstance gen_random(const RandomInstanceSpec& spec, uint64_t seed) {
  if (spec.first_stage < 0 || spec.second_stage < 0 || spec.supplies < 0) {
    throw ConfigError("gen_random: vertex counts must be non-negative");
  }
  if (!(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) {
    throw ConfigError("gen_random: edge_prob must lie in [0,1]");
  }
  if (!(0.0 <= spec.pi_lo && spec.pi_lo <= spec.pi_hi && spec.pi_hi <= 1.0)) {
    throw ConfigError("gen_random: need 0 <= pi_lo <= pi_hi <= 1");
  }
  if (!(0.0 <= spec.weight_lo && spec.weight_lo <= spec.weight_hi)) {
    throw ConfigError("gen_random: need 0 <= weight_lo <= weight_hi");
  }
  Rng rng(seed, 0, Stream::kInstance);
  const int n1 = spec.first_stage;
  const int n2 = spec.second_stage;
  std::vector<DemandVertex> demands;
  for (int i = 0; i < n1; ++i) demands.push_back({i, Stage::kFirst, 1.0, {}, {}});
  for (int k = 0; k < n2; ++k) {
    demands.push_back({n1 + k, Stage::kSecond, rng.uniform(spec.pi_lo, spec.pi_hi), {}, {}});
  }
  std::vector<SupplyVertex> supplies;
  for (int j = 0; j < spec.supplies; ++j) {
    supplies.push_back({j, rng.uniform(spec.weight_lo, spec.weight_hi)});
  }
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n1 + n2; ++i) {
    for (int j = 0; j < spec.supplies; ++j) {
      const double u = rng.uniform();
      const double w = rng.uniform(spec.edge_weight_lo, spec.edge_weight_hi);
      if (u < spec.edge_prob) {
        EdgeSpec e{i, j, {}};
        if (spec.edge_weighted) e.weight = w;
        edges.push_back(e);
      }
    }
  }
  return TwoStageInstance(std::move(demands), std::move(supplies), std::move(edges));
}

TwoStageInstance gen_geo(const GeoSpec& spec, uint64_t seed) {
  if (!(spec.radius > 0.0)) throw ConfigError("gen_geo: radius must be positive");
  if (!(spec.region_side > 0.0)) throw ConfigError("gen_geo: region side must be positive");
  if (spec.riders_first < 0 || spec.riders_second < 0 || spec.drivers < 0 ||
      spec.scenario_days < 0) {
    throw ConfigError("gen_geo: counts must be non-negative");
  }
  Rng rng(seed, 0, Stream::kInstance);
  const int n1 = spec.riders_first;
  const int n2 = spec.riders_second;
  const int m = spec.drivers;
  struct Point {
    double x, y;
  };
  std::vector<Point> riders(n1 + n2);
  std::vector<Point> drivers(m);
  for (auto& p : riders) p = {rng.uniform() * spec.region_side, rng.uniform() * spec.region_side};
  for (auto& p : drivers) p = {rng.uniform() * spec.region_side, rng.uniform() * spec.region_side};

  std::vector<SupplyVertex> supplies;
  std::vector<double> idle(m);
  for (double& t : idle) t = rng.exponential(1.0 / 180.0);  // mean three minutes
  for (int j = 0; j < m; ++j) {
    double w = 1.0;
    if (spec.weight_mode == GeoWeightMode::kIdleQuantile) {
      const auto at_most = std::count_if(idle.begin(), idle.end(),
                                         [&](double t) { return t <= idle[j]; });
      w = 1.0 + static_cast<double>(at_most) / static_cast<double>(m);
    }
    supplies.push_back({j, w});
  }

  const bool scenarios = spec.scenario_days > 0;
  std::vector<DemandVertex> demands;
  for (int i = 0; i < n1; ++i) demands.push_back({i, Stage::kFirst, 1.0, {}, {}});
  for (int k = 0; k < n2; ++k) {
    const double pi = scenarios ? 1.0 / spec.scenario_days : spec.pi;
    demands.push_back({n1 + k, Stage::kSecond, pi, {}, {}});
  }
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n1 + n2; ++i) {
    for (int j = 0; j < m; ++j) {
      const double dx = riders[i].x - drivers[j].x;
      const double dy = riders[i].y - drivers[j].y;
      if (std::hypot(dx, dy) < spec.radius) edges.push_back({i, j, {}});
    }
  }
  if (!scenarios) {
    return TwoStageInstance(std::move(demands), std::move(supplies), std::move(edges));
  }
  std::vector<ScenarioSpec> days(spec.scenario_days);
  for (auto& d : days) d.probability = 1.0 / spec.scenario_days;
  for (int k = 0; k < n2; ++k) days[k % spec.scenario_days].demand_ids.push_back(n1 + k);
  return TwoStageInstance(std::move(demands), std::move(supplies), std::move(edges),
                          RealizationMode::kScenarioList, std::move(days));
}

TwoStageInstance gen_pricing_tight(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("gen_pricing_tight: epsilon must lie in (0,1)");
  }
  std::vector<DemandVertex> demands = {
      {0, Stage::kFirst, 1.0, Valuation::Point(1.0), 0.0},
      {1, Stage::kSecond, 1.0, Valuation::TwoPoint(1.0 / epsilon, epsilon), {}},
  };
  std::vector<SupplyVertex> supplies = {{0, 0.0}};
  std::vector<EdgeSpec> edges = {{0, 0, {}}, {1, 0, {}}};
  return TwoStageInstance(std::move(demands), std::move(supplies), std::move(edges));
}

TwoStageInstance gen_pricing_example() {
  std::vector<DemandVertex> demands = {
      {1, Stage::kSecond, 1.0, Valuation::Uniform(0.0, 1.0), {}},
      {2, Stage::kSecond, 1.0, Valuation::Uniform(0.0, 2.0), {}},
  };
  std::vector<SupplyVertex> supplies = {{0, 0.0}};
  std::vector<EdgeSpec> edges = {{1, 0, {}}, {2, 0, {}}};
  return TwoStageInstance(std::move(demands), std::move(supplies), std::move(edges));
}

TwoStageInstance gen_edge_weighted_tight(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("gen_edge_weighted_tight: epsilon must lie in (0,1)");
  }
  std::vector<DemandVertex> demands = {
      {0, Stage::kFirst, 1.0, {}, {}},
      {1, Stage::kSecond, epsilon, {}, {}},
  };
  std::vector<SupplyVertex> supplies = {{0, 1.0}};
  std::vector<EdgeSpec> edges = {{0, 0, 1.0}, {1, 0, 1.0 / epsilon}};
  return TwoStageInstance(std::move(demands), std::move(supplies), std::move(edges));
}

TwoStageInstance gen_random_pricing(const RandomPricingSpec& spec, uint64_t seed) {
  if (!(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) {
    throw ConfigError("gen_random_pricing: edge_prob must lie in [0,1]");
  }
  Rng rng(seed, 0, Stream::kInstance);
  auto draw = [&](ValuationFamily family) -> Valuation {
    switch (family) {
      case ValuationFamily::kUniform: {
        const double a = rng.uniform(0.0, 0.5);
        return Valuation::Uniform(a, a + rng.uniform(0.5, 2.0));
      }
      case ValuationFamily::kExponential:
        return Valuation::Exponential(rng.uniform(0.5, 2.0));
      case ValuationFamily::kTwoPoint:
        return Valuation::TwoPoint(rng.uniform(0.5, 3.0), rng.uniform(0.1, 0.9));
      case ValuationFamily::kMixed:
        break;
    }
    return Valuation::Point(0.0);
  };
  std::vector<DemandVertex> demands;
  const int n1 = spec.first_stage;
  const int n2 = spec.second_stage;
  for (int i = 0; i < n1; ++i) {
    DemandVertex d{i, Stage::kFirst, 1.0, Valuation::Uniform(0.0, 1.0), rng.uniform(0.0, 0.5)};
    demands.push_back(d);
  }
  for (int k = 0; k < n2; ++k) {
    ValuationFamily family = spec.family;
    if (family == ValuationFamily::kMixed) {
      family = static_cast<ValuationFamily>(rng.index(3));
    }
    demands.push_back({n1 + k, Stage::kSecond, 1.0, draw(family), {}});
  }
  std::vector<SupplyVertex> supplies;
  for (int j = 0; j < spec.supplies; ++j) {
    supplies.push_back({j, rng.uniform(spec.weight_lo, spec.weight_hi)});
  }
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n1 + n2; ++i) {
    for (int j = 0; j < spec.supplies; ++j) {
      if (rng.uniform() < spec.edge_prob) edges.push_back({i, j, {}});
    }
  }
  return TwoStageInstance(std::move(demands), std::move(supplies), std::move(edges));
}

}  // namespace tsm

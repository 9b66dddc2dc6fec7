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

#ifndef TSM_GENERATORS_HPP_
#define TSM_GENERATORS_HPP_

#include <cstdint>

#include "tsm/instance.hpp"

namespace tsm {

// n first-stage demands fully connected to 2n unit-weight supplies; 2n
// second-stage demands (pi = 1/2), each adjacent to its own supply. No
// policy beats 3/4 of the offline optimum on this family as n grows.
TwoStageInstance gen_worst_case(int n);

struct RandomInstanceSpec {
  int first_stage = 4;
  int second_stage = 4;
  int supplies = 4;
  double edge_prob = 0.5;
  // Supply weights: unit when weight_lo == weight_hi == 1, otherwise
  // uniform on [weight_lo, weight_hi].
  double weight_lo = 1.0;
  double weight_hi = 1.0;
  // Second-stage availability, uniform on [pi_lo, pi_hi].
  double pi_lo = 0.5;
  double pi_hi = 0.5;
  // When set, every edge gets a weight uniform on [edge_weight_lo, edge_weight_hi].
  bool edge_weighted = false;
  double edge_weight_lo = 0.0;
  double edge_weight_hi = 1.0;
};

// Erdos-Renyi bipartite instance; a pure function of (spec, seed).
TwoStageInstance gen_random(const RandomInstanceSpec& spec, uint64_t seed);

enum class GeoWeightMode { kUnit, kIdleQuantile };

struct GeoSpec {
  int riders_first = 20;
  int riders_second = 20;
  int drivers = 30;
  double radius = 2500.0;  // meters
  double region_side = 10000.0;  // meters; vertices placed uniformly in the square
  GeoWeightMode weight_mode = GeoWeightMode::kUnit;
  // 0: independent availability with probability `pi`. Otherwise second-stage
  // riders are split round-robin into this many equiprobable scenarios.
  int scenario_days = 0;
  double pi = 0.5;
};

// Synthetic ride-hailing snapshot: an edge joins a rider and a driver whose
// Euclidean distance is below the radius. Idle-quantile weights draw an
// idle time per driver and set w = 1 + (empirical CDF of that idle time).
TwoStageInstance gen_geo(const GeoSpec& spec, uint64_t seed);

// One supply of weight 0, a first-stage demand worth 1 and a second-stage
// demand worth 1/eps with probability eps. Offline optimum 2 - eps, every
// policy at most 1.
TwoStageInstance gen_pricing_tight(double epsilon);

// One zero-weight supply, no first stage, second-stage demands with values
// uniform on [0,1] and [0,2].
TwoStageInstance gen_pricing_example();

// Edge-weighted analogue of gen_pricing_tight: one unit supply, first-stage
// edge of weight 1, second-stage edge of weight 1/eps present w.p. eps.
TwoStageInstance gen_edge_weighted_tight(double epsilon);

enum class ValuationFamily { kUniform, kExponential, kTwoPoint, kMixed };

struct RandomPricingSpec {
  int first_stage = 2;
  int second_stage = 3;
  int supplies = 2;
  double edge_prob = 0.7;
  double weight_lo = 0.0;
  double weight_hi = 1.0;
  ValuationFamily family = ValuationFamily::kUniform;
};

TwoStageInstance gen_random_pricing(const RandomPricingSpec& spec, uint64_t seed);

}  // namespace tsm

#endif  // TSM_GENERATORS_HPP_

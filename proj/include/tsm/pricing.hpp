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

#ifndef TSM_PRICING_HPP_
#define TSM_PRICING_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "tsm/instance.hpp"
#include "tsm/matching.hpp"
#include "tsm/stats.hpp"

namespace tsm {

struct EarSolution {
  FractionalMatching x;           // over all edges
  std::vector<double> y_demand;   // per demand position
  std::vector<double> y_supply;   // per supply position
  // Per demand position: threshold(y_i) on second-stage demand, the posted
  // price (or 0) on first-stage demand.
  std::vector<double> prices;
  double objective = 0.0;
  double solver_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  bool exact = false;  // solved as a linear program
};

// Ex-ante relaxation. When every second-stage valuation is finitely
// supported the program is a linear program and is solved exactly by
// max-profit flow; otherwise by conditional gradient to `tol`.
EarSolution solve_ear(const TwoStageInstance& instance, double tol = 1e-10,
                      int max_iter = 20000);

// Demand weight used by the platform when matching: E[v | v >= p] on
// second-stage demand, the conditional first-stage value otherwise.
std::vector<double> platform_demand_weights(const TwoStageInstance& instance,
                                            std::span<const double> prices);

std::vector<double> supply_weights(const TwoStageInstance& instance);

struct PricingRun {
  Matching first_stage;
  std::vector<double> prices;
  Realization realization;
  Matching second_stage;
  double value = 0.0;  // realized market efficiency
};

// Sum of conditional first-stage values, realized second-stage values of
// matched accepters, and weights of matched supplies.
double market_efficiency(const TwoStageInstance& instance, const Matching& first_stage,
                         std::span<const double> prices, const Realization& realization,
                         const Matching& second_stage);

// Simulate-and-discard in the first stage, posted thresholds and a
// max-weight matching in the second stage.
PricingRun ocrs_two_stage(const TwoStageInstance& instance, const EarSolution& ear, Rng& rng);

// Simulate-and-discard in both stages. Accepting second-stage demand is
// thinned to acceptance probability exactly y_i when the posted price is an
// atom of the valuation.
PricingRun ocrs_full_run(const TwoStageInstance& instance, const EarSolution& ear, Rng& rng);

struct OcrsStats {
  int runs = 0;
  std::vector<double> edge_frequency;            // per edge position
  std::vector<double> unmatched_after_first;     // per supply
  std::vector<double> unmatched_final;           // per supply
  std::vector<double> theta_first;               // sum of x over first-stage demand
  std::vector<double> theta_final;               // sum of x over all demand
};

// Monte Carlo over ocrs_full_run; run r uses Rng(seed, r, kDiscard).
OcrsStats ocrs_full_variant(const TwoStageInstance& instance, const EarSolution& ear, int runs,
                            uint64_t seed, int threads = 1);

// Posts `prices` to second-stage demand, no first-stage matching, matches
// accepters by conditional-mean weights. Returns realized market efficiency.
double fixed_price_run(const TwoStageInstance& instance, std::span<const double> prices, Rng& rng);

Estimate opt_offline_mp_estimate(const TwoStageInstance& instance, int n_samples, uint64_t seed);

// Exact expectation for finitely supported valuations by enumerating value
// profiles. Throws SizeGuardError above 1e6 profiles and ConfigError for
// continuous valuations.
double opt_offline_mp_exact(const TwoStageInstance& instance);

// Requires no first-stage demand and zero supply weights (ConfigError).
// Returns the realized demand efficiency of one run.
double single_stage_price_and_match(const TwoStageInstance& instance, Rng& rng);

// Exact expected demand efficiency of posting p_i = threshold(y_i) and
// matching accepters, by enumerating acceptance patterns (<= 20 demands).
double single_stage_exact(const TwoStageInstance& instance, const EarSolution& ear);

}  // namespace tsm

#endif  // TSM_PRICING_HPP_

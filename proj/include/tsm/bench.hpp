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

#ifndef TSM_BENCH_HPP_
#define TSM_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsm/instance.hpp"
#include "tsm/policies.hpp"
#include "tsm/stats.hpp"

namespace tsm {

// Offline optimum on the realization of each trial. Trial t uses the same
// realization stream as policy trial t, so policy/benchmark pairs share
// randomness.
std::vector<double> opt_offline_values(const TwoStageInstance& instance, int trials,
                                       uint64_t seed, int threads = 1);

Estimate opt_offline_estimate(const TwoStageInstance& instance, int n_samples, uint64_t seed,
                              int threads = 1);

// Exact expectation over all realizations (<= 20 second-stage demands in
// independent mode).
double opt_offline_exact(const TwoStageInstance& instance);

// Best dual base by enumeration. Guards: |S| <= 12 and |D2| <= 16
// (SizeGuardError). Supply-weighted instances only (ConfigError).
double opt_online_exact(const TwoStageInstance& instance);

struct Ratio {
  double value = 0.0;
  double stderr_ = 0.0;
  double lo95 = 0.0;
  double hi95 = 0.0;
};

// Ratio of means of paired samples; delta-method standard error.
Ratio ratio_paired(std::span<const double> num, std::span<const double> den);
// Ratio of independent estimates; delta-method standard error.
Ratio ratio_independent(const Estimate& num, const Estimate& den);

struct RobustnessReport {
  SecondStagePolicy second_stage = SecondStagePolicy::kExact;
  double beta = 1.0;
  bool unweighted = true;
  double gamma_hat = 1.0;
  double gamma_bound = 1.0;   // gamma + beta (1 - gamma)^2
  double refined_bound = 1.0; // min_j 1 - y_j + y_j^2
  Ratio ratio;                // WBU with the chosen second stage vs offline
  Ratio exact_ratio;          // WBU with exact second stage vs offline
  bool gamma_pass = true;     // vacuous on weighted instances
  bool refined_pass = true;
  bool pass() const { return gamma_pass && refined_pass; }
};

// gamma_hat is |M1*| / |M*| at the realization maximizing |M*| (every
// demand with positive availability present, or the worst scenario): the
// smallest ratio any realization can produce.
double first_stage_share(const TwoStageInstance& instance);

RobustnessReport robustness_check(const TwoStageInstance& instance, SecondStagePolicy second_stage,
                                  int trials, uint64_t seed, int threads = 1);

struct SimRow {
  std::string policy;
  int trials = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::string benchmark;
  double bench_mean = 0.0;
  double bench_stderr = 0.0;
  Ratio ratio;
};

struct SimReport {
  std::string instance_digest;
  uint64_t seed = 0;
  int trials = 0;
  int threads = 1;
  std::vector<std::string> policies;
  std::vector<PolicySpec> specs;
  std::vector<SimRow> rows;
  std::optional<double> opt_online;
};

// Runs every policy for `trials` trials and compares against the offline
// optimum (opt_offline_mp on pricing instances), and against the exact
// online optimum when the enumeration guards allow.
SimReport compare(const TwoStageInstance& instance, const std::vector<PolicySpec>& policies,
                  int trials, uint64_t seed, int threads = 1);

}  // namespace tsm

#endif  // TSM_BENCH_HPP_

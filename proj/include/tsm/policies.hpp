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

#ifndef TSM_POLICIES_HPP_
#define TSM_POLICIES_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include "tsm/balance.hpp"
#include "tsm/instance.hpp"
#include "tsm/matching.hpp"
#include "tsm/pricing.hpp"
#include "tsm/stats.hpp"

namespace tsm {

enum class PolicyKind { kWbu, kGr, kSm, kSmLimit, kHg, kEdgeDiscard, kOcrsPricing };
enum class HgMode { kRandomize, kPickBetter };
enum class SecondStagePolicy { kExact, kGreedyMaximal };

inline constexpr double kHgLambdaUnweighted = 0.58197670686932642439;  // 1/(e-1)
inline constexpr double kHgLambdaWeighted = 0.7;

struct PolicySpec {
  PolicyKind kind = PolicyKind::kWbu;
  SecondStagePolicy second_stage = SecondStagePolicy::kExact;
  // SM / SM-Limit
  double epsilon = 1e-3;
  int samples = 200;
  int max_passes = 1000;  // SM-Limit always uses 5
  // HG; a negative lambda picks 1/(e-1) on unit-weight instances, 0.7 otherwise.
  double lambda = -1.0;
  HgMode hg_mode = HgMode::kRandomize;
  int pick_trials = 200;

  // Short name: wbu, gr, sm, sm-limit, hg, hg-pick, edge-discard, ocrs,
  // with a "+greedy" suffix for the greedy second stage.
  std::string name() const;
  // Parses name() output, plus "hg:<lambda>". Throws ConfigError.
  static PolicySpec parse(const std::string& text);
};

struct PolicyRun {
  Matching first_stage;
  Realization realization;
  Matching second_stage;
  std::vector<double> prices;  // pricing instances only
  double value = 0.0;
};

// Everything a policy computes before seeing any realization.
struct PolicyPlan {
  PolicySpec spec;
  double lambda = 0.0;  // resolved HG mixing probability
  BalanceSolution balance;
  MatchingDistribution wbu;
  Matching sm_first_stage;
  Matching fixed_first_stage;  // GR / edge discard
  EarSolution ear;
  bool pick_wbu = true;  // HG pick-better outcome
};

// Throws ConfigError when the policy cannot run on the instance kind.
PolicyPlan make_plan(const PolicySpec& spec, const TwoStageInstance& instance, uint64_t seed);

// Trial `trial` of a plan. Randomness comes from per-trial streams so every
// policy sees the same realization for the same (seed, trial).
PolicyRun run_trial(const PolicyPlan& plan, const TwoStageInstance& instance, uint64_t seed,
                    uint64_t trial);

PolicyRun run_policy(const PolicySpec& spec, const TwoStageInstance& instance, Rng& rng);

// Objective of a run: supply weight, edge weight, or market efficiency by
// instance kind.
double run_value(const TwoStageInstance& instance, const PolicyRun& run);

struct ValueEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int trials = 0;
};

// Plans once from derive_seed(seed, 0, kPlan), then runs trials 0..trials-1.
ValueEstimate expected_value(const PolicySpec& spec, const TwoStageInstance& instance, int trials,
                             uint64_t seed, int threads = 1);

// Per-trial values of a plan, in trial order.
std::vector<double> trial_values(const PolicyPlan& plan, const TwoStageInstance& instance,
                                 int trials, uint64_t seed, int threads = 1);

// Second stage on a residual graph: available demand against supplies not
// used by `first_stage`.
Matching second_stage_matching(const TwoStageInstance& instance, const Matching& first_stage,
                               std::span<const int> available, SecondStagePolicy policy);

}  // namespace tsm

#endif  // TSM_POLICIES_HPP_

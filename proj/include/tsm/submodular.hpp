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

#ifndef TSM_SUBMODULAR_HPP_
#define TSM_SUBMODULAR_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "tsm/instance.hpp"
#include "tsm/matching.hpp"
#include "tsm/stats.hpp"

namespace tsm {

// Supply positions, sorted.
struct DualBase {
  std::vector<int> supplies;
};

// Sampled expected weighted rank f(T) = E[max supply-weight matching between
// the realized second stage and T]. Realizations are drawn once and shared
// by every query, so differences between queries are low-variance.
class RankOracle {
 public:
  RankOracle(const TwoStageInstance& instance, int n_samples, uint64_t seed);

  Estimate estimate(std::span<const int> supplies) const;
  int num_samples() const { return static_cast<int>(samples_.size()); }

 private:
  const TwoStageInstance* instance_;
  std::vector<std::vector<int>> samples_;  // available second-stage demand
};

// Exact f(T) by enumerating every realization. Throws SizeGuardError when
// independent mode has more than 20 second-stage demands.
double exact_fw(const TwoStageInstance& instance, std::span<const int> supplies);

// Rank of the transversal matroid: max matching size of G[D1, S].
int first_stage_rank(const TwoStageInstance& instance);

bool is_dual_independent(const TwoStageInstance& instance, std::span<const int> supplies);
bool is_dual_base(const TwoStageInstance& instance, std::span<const int> supplies);

// All dual bases in lexicographic order. Requires |S| <= 20.
std::vector<DualBase> enumerate_dual_bases(const TwoStageInstance& instance);

// sum over S \ T of w_j.
double complement_weight(const TwoStageInstance& instance, std::span<const int> supplies);

// Single-swap local search on  f(T) + w(S \ T), starting from the complement
// of a maximum first-stage matching. A swap must gain more than
// epsilon * w(S). At most max_passes improving swaps are made.
DualBase local_search_base(const TwoStageInstance& instance, double epsilon,
                           const RankOracle& oracle, int max_passes = 1000);

// Maximum first-stage matching saturating S \ T. Throws ValidationError if
// T is not a dual base.
Matching first_stage_from_base(const TwoStageInstance& instance, const DualBase& base);

}  // namespace tsm

#endif  // TSM_SUBMODULAR_HPP_

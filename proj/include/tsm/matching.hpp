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

#ifndef TSM_MATCHING_HPP_
#define TSM_MATCHING_HPP_

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tsm/instance.hpp"
#include "tsm/random.hpp"

namespace tsm {

// Weighted arc between abstract left/right vertices; the low-level kernels
// below work on these so they can be reused outside the instance graph.
struct Arc {
  int left = 0;
  int right = 0;
  double weight = 0.0;
};

// Max-weight bipartite matching by shortest augmenting paths with
// potentials. Arcs with negative weight are ignored; leaving a vertex
// unmatched is always allowed. Returns indices into `arcs`, ascending.
// Ties resolve deterministically by arc order.
std::vector<int> max_weight_arcs(int num_left, int num_right, std::span<const Arc> arcs);

// Maximum cardinality matching (Hopcroft-Karp); weights are ignored.
std::vector<int> max_cardinality_arcs(int num_left, int num_right, std::span<const Arc> arcs);

// Max-weight matching when weights live on right vertices. Matchable right
// sets form a transversal matroid, so adding right vertices in decreasing
// weight order, each by an augmenting path, is exact. Negative-weight right
// vertices are never matched.
std::vector<int> max_right_weight_arcs(int num_left, int num_right, std::span<const Arc> arcs,
                                       std::span<const double> right_weights);

// Greedy by decreasing weight (ties by arc order). Maximal, and at least
// half the maximum weight.
std::vector<int> greedy_arcs(int num_left, int num_right, std::span<const Arc> arcs);

struct MatchedPair {
  int demand = 0;  // demand position
  int supply = 0;  // supply position
  auto operator<=>(const MatchedPair&) const = default;
};

// Pairs sorted by (demand, supply).
struct Matching {
  std::vector<MatchedPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  bool operator==(const Matching&) const = default;
};

struct WeightedMatching {
  Matching matching;
  double value = 0.0;
};

// True when pairs are vertex-disjoint and every pair is an instance edge.
bool is_valid_matching(const TwoStageInstance& instance, const Matching& m);

// Supply weight of the matched supplies.
double supply_weight(const TwoStageInstance& instance, const Matching& m);

// All kernels below restrict the graph to the given demand/supply positions.
Matching max_card_matching(const TwoStageInstance& instance, std::span<const int> demands,
                           std::span<const int> supplies);

WeightedMatching max_supply_weight_matching(const TwoStageInstance& instance,
                                            std::span<const int> demands,
                                            std::span<const int> supplies);

// Greedy counterpart of max_supply_weight_matching.
WeightedMatching greedy_supply_weight_matching(const TwoStageInstance& instance,
                                               std::span<const int> demands,
                                               std::span<const int> supplies);

// Weights indexed by demand / supply position over the whole instance.
WeightedMatching max_vertex_weight_matching(const TwoStageInstance& instance,
                                            std::span<const int> demands,
                                            std::span<const int> supplies,
                                            std::span<const double> demand_weights,
                                            std::span<const double> supply_weights);

// Throws ConfigError on instances without edge weights.
WeightedMatching max_edge_weight_matching(const TwoStageInstance& instance,
                                          std::span<const int> demands,
                                          std::span<const int> supplies);

// Generic subgraph matcher: `weight(edge position)` gives the arc weight.
enum class MatchAlgo { kExact, kGreedy };
WeightedMatching match_subgraph(const TwoStageInstance& instance, std::span<const int> demands,
                                std::span<const int> supplies,
                                const std::function<double(int)>& weight,
                                MatchAlgo algo = MatchAlgo::kExact);

struct FractionalEntry {
  int demand = 0;
  int supply = 0;
  double value = 0.0;
};

// Sparse fractional matching over demand/supply positions.
struct FractionalMatching {
  std::vector<FractionalEntry> entries;

  // Value on (demand, supply), 0 when absent.
  double value(int demand, int supply) const;
  double demand_load(int demand) const;
  double supply_load(int supply) const;
};

struct MatchingDistribution {
  std::vector<double> probabilities;
  std::vector<Matching> atoms;

  const Matching& sample(Rng& rng) const;
  // Sum_k p_k 1[(i,j) in M_k].
  double marginal(int demand, int supply) const;
};

// Convex decomposition into integral matchings. Entries below tol are
// dropped; leftover mass goes to the empty matching. Throws
// ValidationError if some vertex load exceeds 1 + tol or an entry lies
// outside [-tol, 1 + tol].
MatchingDistribution bvn_decompose(const FractionalMatching& x, double tol = 1e-9);

Matching sample_matching(const FractionalMatching& x, Rng& rng);

}  // namespace tsm

#endif  // TSM_MATCHING_HPP_

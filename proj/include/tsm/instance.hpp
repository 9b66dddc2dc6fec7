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

#ifndef TSM_INSTANCE_HPP_
#define TSM_INSTANCE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tsm/random.hpp"
#include "tsm/valuation.hpp"

namespace tsm {

enum class Stage { kFirst, kSecond };

struct SupplyVertex {
  int id = 0;
  double weight = 1.0;
};

struct DemandVertex {
  int id = 0;
  Stage stage = Stage::kFirst;
  // Probability of being present in the second stage; 1 for first stage.
  double availability = 1.0;
  std::optional<Valuation> valuation;
  // Price already accepted by a first-stage demand in pricing instances.
  std::optional<double> posted_price;
};

// Edge input, referencing vertices by id.
struct EdgeSpec {
  int demand_id = 0;
  int supply_id = 0;
  std::optional<double> weight;
};

struct ScenarioSpec {
  double probability = 0.0;
  std::vector<int> demand_ids;
};

// Edge after validation, referencing vertices by position.
struct Edge {
  int demand = 0;
  int supply = 0;
  double weight = 0.0;  // meaningful only for edge-weighted instances
};

struct Scenario {
  double probability = 0.0;
  std::vector<int> demands;  // sorted positions of second-stage demands
};

enum class RealizationMode { kIndependent, kScenarioList };

enum class InstanceKind { kSupplyWeighted, kEdgeWeighted, kPricing };

// Available second-stage demand (positions, sorted). Pricing instances also
// carry realized values indexed by demand position.
struct Realization {
  std::vector<int> available;
  std::vector<double> values;
};

// Immutable two-stage bipartite instance. Vertex ids are arbitrary unique
// integers used for I/O; every algorithm works with positions into
// demands() and supplies().
class TwoStageInstance {
 public:
  // Throws ValidationError naming the offending field.
  TwoStageInstance(std::vector<DemandVertex> demands,
                   std::vector<SupplyVertex> supplies,
                   std::vector<EdgeSpec> edges,
                   RealizationMode mode = RealizationMode::kIndependent,
                   std::vector<ScenarioSpec> scenarios = {});

  const std::vector<DemandVertex>& demands() const { return demands_; }
  const std::vector<SupplyVertex>& supplies() const { return supplies_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const DemandVertex& demand(int i) const { return demands_[i]; }
  const SupplyVertex& supply(int j) const { return supplies_[j]; }
  int num_demands() const { return static_cast<int>(demands_.size()); }
  int num_supplies() const { return static_cast<int>(supplies_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<int>& first_stage() const { return first_stage_; }
  const std::vector<int>& second_stage() const { return second_stage_; }
  bool is_first_stage(int i) const { return demands_[i].stage == Stage::kFirst; }

  // Edge positions incident to a vertex, ascending.
  const std::vector<int>& demand_edges(int i) const { return demand_edges_[i]; }
  const std::vector<int>& supply_edges(int j) const { return supply_edges_[j]; }
  // Edges with a first-stage demand endpoint, ascending.
  const std::vector<int>& first_stage_edges() const { return first_stage_edges_; }
  std::optional<int> find_edge(int demand, int supply) const;

  bool edge_weighted() const { return edge_weighted_; }
  bool has_valuations() const { return has_valuations_; }
  InstanceKind kind() const;

  RealizationMode realization_mode() const { return mode_; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }

  std::optional<int> demand_index(int id) const;
  std::optional<int> supply_index(int id) const;

  double total_supply_weight() const;

  // Conditional value of a first-stage demand in a pricing instance:
  // E[v | v >= posted price], or 0 without a valuation.
  double first_stage_value(int i) const;

 private:
  std::vector<DemandVertex> demands_;
  std::vector<SupplyVertex> supplies_;
  std::vector<Edge> edges_;
  std::vector<int> first_stage_;
  std::vector<int> second_stage_;
  std::vector<std::vector<int>> demand_edges_;
  std::vector<std::vector<int>> supply_edges_;
  std::vector<int> first_stage_edges_;
  std::unordered_map<int64_t, int> edge_lookup_;
  std::unordered_map<int, int> demand_pos_;
  std::unordered_map<int, int> supply_pos_;
  bool edge_weighted_ = false;
  bool has_valuations_ = false;
  RealizationMode mode_ = RealizationMode::kIndependent;
  std::vector<Scenario> scenarios_;
};

// Draws the available second-stage demand. Independent mode flips a coin
// per vertex, scenario mode picks one scenario. Pricing instances draw a
// value for every second-stage demand; availability then follows the coin
// flips (or scenario) as usual.
Realization sample_realization(const TwoStageInstance& instance, Rng& rng);

// Pricing variant: draws values and marks a second-stage demand available
// iff its value is at least its price. `prices` is indexed by demand position.
Realization sample_realization(const TwoStageInstance& instance,
                               std::span<const double> prices, Rng& rng);

}  // namespace tsm

#endif  // TSM_INSTANCE_HPP_

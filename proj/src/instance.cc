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

#include "tsm/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tsm/errors.hpp"

namespace tsm {
namespace {

int64_t edge_key(int demand, int supply) {
  return (static_cast<int64_t>(demand) << 32) | static_cast<uint32_t>(supply);
}

std::string field(const char* array, std::size_t k, const char* name) {
  return std::string(array) + "[" + std::to_string(k) + "]." + name;
}

}  // namespace

TwoStageInstance::TwoStageInstance(std::vector<DemandVertex> demands,
                                   std::vector<SupplyVertex> supplies,
                                   std::vector<EdgeSpec> edges,
                                   RealizationMode mode,
                                   std::vector<ScenarioSpec> scenarios)
    : demands_(std::move(demands)), supplies_(std::move(supplies)), mode_(mode) {
  for (std::size_t k = 0; k < demands_.size(); ++k) {
    DemandVertex& d = demands_[k];
    if (!demand_pos_.emplace(d.id, static_cast<int>(k)).second) {
      throw ValidationError(field("demands", k, "id") + ": duplicate id " +
                            std::to_string(d.id));
    }
    if (!(d.availability >= 0.0 && d.availability <= 1.0)) {
      throw ValidationError(field("demands", k, "pi") + ": must lie in [0,1], got " +
                            std::to_string(d.availability));
    }
    if (d.stage == Stage::kFirst) {
      if (d.availability != 1.0) {
        throw ValidationError(field("demands", k, "pi") +
                              ": first-stage demand must have pi = 1");
      }
      first_stage_.push_back(static_cast<int>(k));
    } else {
      second_stage_.push_back(static_cast<int>(k));
    }
    if (d.posted_price && !(*d.posted_price >= 0.0)) {
      throw ValidationError(field("demands", k, "price") + ": must be >= 0");
    }
    if (d.valuation) has_valuations_ = true;
  }
  if (has_valuations_) {
    for (int i : second_stage_) {
      if (!demands_[i].valuation) {
        throw ValidationError(field("demands", i, "valuation") +
                              ": pricing instances need a valuation for every "
                              "second-stage demand");
      }
      // Presence is decided by the price test alone.
      if (demands_[i].availability != 1.0) {
        throw ValidationError(field("demands", i, "pi") +
                              ": pricing instances need pi = 1 on second-stage demand");
      }
    }
  }
  for (std::size_t k = 0; k < supplies_.size(); ++k) {
    const SupplyVertex& s = supplies_[k];
    if (!supply_pos_.emplace(s.id, static_cast<int>(k)).second) {
      throw ValidationError(field("supplies", k, "id") + ": duplicate id " +
                            std::to_string(s.id));
    }
    if (!(s.weight >= 0.0) || !std::isfinite(s.weight)) {
      throw ValidationError(field("supplies", k, "weight") +
                            ": must be finite and >= 0");
    }
  }

  demand_edges_.resize(demands_.size());
  supply_edges_.resize(supplies_.size());
  std::size_t weighted = 0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const EdgeSpec& e = edges[k];
    auto d = demand_pos_.find(e.demand_id);
    if (d == demand_pos_.end()) {
      throw ValidationError(field("edges", k, "d") + ": unknown demand id " +
                            std::to_string(e.demand_id));
    }
    auto s = supply_pos_.find(e.supply_id);
    if (s == supply_pos_.end()) {
      throw ValidationError(field("edges", k, "s") + ": unknown supply id " +
                            std::to_string(e.supply_id));
    }
    if (e.weight) {
      ++weighted;
      if (!(*e.weight >= 0.0) || !std::isfinite(*e.weight)) {
        throw ValidationError(field("edges", k, "w") + ": must be finite and >= 0");
      }
    }
    const int pos = static_cast<int>(edges_.size());
    if (!edge_lookup_.emplace(edge_key(d->second, s->second), pos).second) {
      throw ValidationError(field("edges", k, "d") + ": duplicate edge (" +
                            std::to_string(e.demand_id) + ", " +
                            std::to_string(e.supply_id) + ")");
    }
    edges_.push_back({d->second, s->second, e.weight.value_or(0.0)});
    demand_edges_[d->second].push_back(pos);
    supply_edges_[s->second].push_back(pos);
    if (demands_[d->second].stage == Stage::kFirst) first_stage_edges_.push_back(pos);
  }
  if (weighted != 0 && weighted != edges.size()) {
    throw ValidationError("edges: either every edge or no edge carries a weight w");
  }
  edge_weighted_ = weighted != 0;
  if (edge_weighted_ && has_valuations_) {
    throw ValidationError("edges: edge weights are not supported on pricing instances");
  }

  if (mode_ == RealizationMode::kScenarioList) {
    if (scenarios.empty()) {
      throw ValidationError("realization.scenarios: scenario mode needs at least one scenario");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
      const ScenarioSpec& sc = scenarios[k];
      if (!(sc.probability >= 0.0)) {
        throw ValidationError(field("realization.scenarios", k, "p") + ": must be >= 0");
      }
      total += sc.probability;
      Scenario out{sc.probability, {}};
      for (int id : sc.demand_ids) {
        auto d = demand_pos_.find(id);
        if (d == demand_pos_.end() || demands_[d->second].stage != Stage::kSecond) {
          throw ValidationError(field("realization.scenarios", k, "demands") +
                                ": id " + std::to_string(id) +
                                " is not a second-stage demand");
        }
        out.demands.push_back(d->second);
      }
      std::sort(out.demands.begin(), out.demands.end());
      out.demands.erase(std::unique(out.demands.begin(), out.demands.end()),
                        out.demands.end());
      scenarios_.push_back(std::move(out));
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw ValidationError("realization.scenarios: probabilities sum to " +
                            std::to_string(total) + ", expected 1");
    }
  } else if (!scenarios.empty()) {
    throw ValidationError("realization.scenarios: only allowed in scenario mode");
  }
}

std::optional<int> TwoStageInstance::find_edge(int demand, int supply) const {
  auto it = edge_lookup_.find(edge_key(demand, supply));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

InstanceKind TwoStageInstance::kind() const {
  if (has_valuations_) return InstanceKind::kPricing;
  if (edge_weighted_) return InstanceKind::kEdgeWeighted;
  return InstanceKind::kSupplyWeighted;
}

std::optional<int> TwoStageInstance::demand_index(int id) const {
  auto it = demand_pos_.find(id);
  if (it == demand_pos_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> TwoStageInstance::supply_index(int id) const {
  auto it = supply_pos_.find(id);
  if (it == supply_pos_.end()) return std::nullopt;
  return it->second;
}

double TwoStageInstance::total_supply_weight() const {
  double total = 0.0;
  for (const SupplyVertex& s : supplies_) total += s.weight;
  return total;
}

double TwoStageInstance::first_stage_value(int i) const {
  const DemandVertex& d = demands_[i];
  if (!d.valuation) return 0.0;
  return d.valuation->cond_mean_above(d.posted_price.value_or(0.0));
}

namespace {

std::vector<int> draw_available(const TwoStageInstance& instance, Rng& rng) {
  std::vector<int> available;
  if (instance.realization_mode() == RealizationMode::kScenarioList) {
    const auto& scenarios = instance.scenarios();
    double u = rng.uniform();
    std::size_t pick = scenarios.size() - 1;
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
      u -= scenarios[k].probability;
      if (u < 0.0) {
        pick = k;
        break;
      }
    }
    return scenarios[pick].demands;
  }
  for (int i : instance.second_stage()) {
    // Always draw, so the stream layout does not depend on the pi values.
    const double u = rng.uniform();
    if (u < instance.demand(i).availability) available.push_back(i);
  }
  return available;
}

}  // namespace

Realization sample_realization(const TwoStageInstance& instance, Rng& rng) {
  Realization out;
  out.available = draw_available(instance, rng);
  if (instance.has_valuations()) {
    out.values.assign(instance.num_demands(), 0.0);
    for (int i : instance.second_stage()) {
      out.values[i] = instance.demand(i).valuation->sample(rng);
    }
  }
  return out;
}

Realization sample_realization(const TwoStageInstance& instance,
                               std::span<const double> prices, Rng& rng) {
  Realization out;
  out.values.assign(instance.num_demands(), 0.0);
  for (int i : instance.second_stage()) {
    const auto& valuation = instance.demand(i).valuation;
    out.values[i] = valuation ? valuation->sample(rng) : 0.0;
    if (out.values[i] >= prices[i]) out.available.push_back(i);
  }
  return out;
}

}  // namespace tsm

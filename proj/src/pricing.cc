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

#include "tsm/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "tsm/conditional_gradient.hpp"
#include "tsm/errors.hpp"

namespace tsm {
namespace {

// Posted prices for discrete valuations sit on an atom; y coming out of the
// solver can overshoot the atom's cumulative mass by rounding, which would
// drop the price to the next atom. Ties go to the larger price.
constexpr double kAtomSnap = 1e-9;

double ear_price(const Valuation& v, double y) {
  if (v.finitely_supported()) return v.threshold(std::clamp(y - kAtomSnap, 0.0, 1.0));
  return v.threshold(std::clamp(y, kMinQuantileLevel, 1.0));
}

void require_pricing(const TwoStageInstance& instance, const char* who) {
  if (!instance.has_valuations()) {
    throw ConfigError(std::string(who) + ": instance carries no valuations");
  }
}

// Min-cost flow with real capacities by successive shortest paths
// (Bellman-Ford, costs may be negative). Stops as soon as the cheapest
// augmenting path stops being profitable.
class FlowNetwork {
 public:
  explicit FlowNetwork(int n) : adj_(n) {}

  int add_arc(int from, int to, double cap, double cost) {
    adj_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap, cost});
    adj_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0.0, -cost});
    return static_cast<int>(arcs_.size()) - 2;
  }

  void max_profit(int s, int t) {
    const int n = static_cast<int>(adj_.size());
    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (int guard = 0; guard < 100000; ++guard) {
      std::vector<double> dist(n, kInf);
      std::vector<int> via(n, -1);
      dist[s] = 0.0;
      for (int round = 0; round < n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
          if (dist[u] == kInf) continue;
          for (int a : adj_[u]) {
            const Arc& arc = arcs_[a];
            if (arc.cap <= kCapEps) continue;
            if (dist[u] + arc.cost < dist[arc.to] - 1e-15) {
              dist[arc.to] = dist[u] + arc.cost;
              via[arc.to] = a;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (dist[t] == kInf || dist[t] >= -1e-12) return;
      double push = kInf;
      for (int v = t; v != s; v = arcs_[via[v] ^ 1].to) push = std::min(push, arcs_[via[v]].cap);
      for (int v = t; v != s; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].cap -= push;
        arcs_[via[v] ^ 1].cap += push;
      }
    }
  }

  double flow(int arc) const { return arcs_[arc ^ 1].cap; }

 private:
  static constexpr double kCapEps = 1e-13;
  struct Arc {
    int to;
    double cap;
    double cost;
  };
  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
};

double ear_objective(const TwoStageInstance& inst, const std::vector<double>& yd,
                     const std::vector<double>& ys) {
  double s = 0.0;
  for (int i = 0; i < inst.num_demands(); ++i) {
    if (inst.is_first_stage(i)) {
      s += inst.first_stage_value(i) * yd[i];
    } else {
      s += inst.demand(i).valuation->integral_threshold(std::clamp(yd[i], 0.0, 1.0));
    }
  }
  for (int j = 0; j < inst.num_supplies(); ++j) s += inst.supply(j).weight * ys[j];
  return s;
}

void finish_ear(const TwoStageInstance& inst, EarSolution& sol) {
  sol.y_demand.assign(inst.num_demands(), 0.0);
  sol.y_supply.assign(inst.num_supplies(), 0.0);
  for (const auto& e : sol.x.entries) {
    sol.y_demand[e.demand] += e.value;
    sol.y_supply[e.supply] += e.value;
  }
  sol.prices.assign(inst.num_demands(), 0.0);
  for (int i = 0; i < inst.num_demands(); ++i) {
    if (inst.is_first_stage(i)) {
      sol.prices[i] = inst.demand(i).posted_price.value_or(0.0);
    } else {
      sol.prices[i] = ear_price(*inst.demand(i).valuation, sol.y_demand[i]);
    }
  }
  sol.objective = ear_objective(inst, sol.y_demand, sol.y_supply);
}

EarSolution solve_ear_lp(const TwoStageInstance& inst) {
  const int nd = inst.num_demands();
  const int ns = inst.num_supplies();
  const int src = 0, sink = 1;
  FlowNetwork net(2 + nd + ns);
  for (int i = 0; i < nd; ++i) {
    if (inst.is_first_stage(i)) {
      net.add_arc(src, 2 + i, 1.0, -inst.first_stage_value(i));
    } else {
      // One segment per atom: the integral of the threshold is linear on
      // each, with slope equal to the atom value.
      for (const auto& [value, prob] : inst.demand(i).valuation->atoms()) {
        net.add_arc(src, 2 + i, prob, -value);
      }
    }
  }
  std::vector<int> edge_arc(inst.num_edges());
  for (int e = 0; e < inst.num_edges(); ++e) {
    const Edge& ed = inst.edges()[e];
    edge_arc[e] = net.add_arc(2 + ed.demand, 2 + nd + ed.supply, 1.0, 0.0);
  }
  for (int j = 0; j < ns; ++j) net.add_arc(2 + nd + j, sink, 1.0, -inst.supply(j).weight);
  net.max_profit(src, sink);

  EarSolution sol;
  for (int e = 0; e < inst.num_edges(); ++e) {
    const double f = net.flow(edge_arc[e]);
    if (f > 1e-13) sol.x.entries.push_back({inst.edges()[e].demand, inst.edges()[e].supply, f});
  }
  sol.exact = true;
  sol.converged = true;
  finish_ear(inst, sol);
  return sol;
}

EarSolution solve_ear_cg(const TwoStageInstance& inst, double tol, int max_iter) {
  SeparableProblem prob;
  prob.num_left = inst.num_demands();
  prob.num_right = inst.num_supplies();
  for (const Edge& e : inst.edges()) prob.arcs.push_back({e.demand, e.supply, 0.0});
  std::vector<double> fixed(inst.num_demands(), 0.0);
  for (int i : inst.first_stage()) fixed[i] = inst.first_stage_value(i);
  prob.left_value = [&](int i, double y) {
    if (inst.is_first_stage(i)) return fixed[i] * y;
    return inst.demand(i).valuation->integral_threshold(std::clamp(y, 0.0, 1.0));
  };
  prob.left_slope = [&](int i, double y) {
    if (inst.is_first_stage(i)) return fixed[i];
    return inst.demand(i).valuation->threshold(std::clamp(y, kMinQuantileLevel, 1.0));
  };
  prob.right_value = [&](int j, double y) { return inst.supply(j).weight * y; };
  prob.right_slope = [&](int j, double) { return inst.supply(j).weight; };
  const CgResult cg = maximize_separable_concave(prob, {tol, max_iter});

  EarSolution sol;
  for (int e = 0; e < inst.num_edges(); ++e) {
    const double v = cg.x.empty() ? 0.0 : cg.x[e];
    if (v > 0.0) sol.x.entries.push_back({inst.edges()[e].demand, inst.edges()[e].supply, v});
  }
  sol.solver_gap = cg.gap;
  sol.iterations = cg.iterations;
  sol.converged = cg.converged;
  finish_ear(inst, sol);
  return sol;
}

// x per edge position.
std::vector<double> edge_values(const TwoStageInstance& inst, const EarSolution& ear) {
  std::vector<double> x(inst.num_edges(), 0.0);
  for (const auto& e : ear.x.entries) {
    if (auto pos = inst.find_edge(e.demand, e.supply)) x[*pos] += e.value;
  }
  return x;
}

std::vector<int> by_id(const TwoStageInstance& inst, const std::vector<int>& positions) {
  std::vector<int> out = positions;
  std::sort(out.begin(), out.end(),
            [&](int a, int b) { return inst.demand(a).id < inst.demand(b).id; });
  return out;
}

// One simulate-and-discard step for demand i proposing with probabilities
// x_ij / scale. Returns the matched supply or -1.
int propose_and_discard(const TwoStageInstance& inst, int i, const std::vector<double>& x,
                        double scale, std::vector<double>& theta, std::vector<char>& taken,
                        bool propose, Rng& rng) {
  int chosen = -1;
  if (propose) {
    const double u = rng.uniform() * scale;
    double acc = 0.0;
    int pick = -1;
    for (int e : inst.demand_edges(i)) {
      acc += x[e];
      if (u < acc) {
        pick = inst.edges()[e].supply;
        break;
      }
    }
    if (pick >= 0 && !taken[pick]) {
      const double keep = 1.0 / (2.0 - std::min(theta[pick], 1.0));
      if (rng.uniform() < keep) {
        taken[pick] = 1;
        chosen = pick;
      }
    }
  }
  for (int e : inst.demand_edges(i)) theta[inst.edges()[e].supply] += x[e];
  return chosen;
}

}  // namespace

EarSolution solve_ear(const TwoStageInstance& instance, double tol, int max_iter) {
  require_pricing(instance, "solve_ear");
  bool discrete = true;
  for (int i : instance.second_stage()) {
    discrete = discrete && instance.demand(i).valuation->finitely_supported();
  }
  return discrete ? solve_ear_lp(instance) : solve_ear_cg(instance, tol, max_iter);
}

std::vector<double> platform_demand_weights(const TwoStageInstance& instance,
                                            std::span<const double> prices) {
  std::vector<double> w(instance.num_demands(), 0.0);
  for (int i = 0; i < instance.num_demands(); ++i) {
    if (instance.is_first_stage(i)) {
      w[i] = instance.first_stage_value(i);
    } else if (instance.demand(i).valuation) {
      w[i] = instance.demand(i).valuation->cond_mean_above(prices[i]);
    }
  }
  return w;
}

std::vector<double> supply_weights(const TwoStageInstance& instance) {
  std::vector<double> w(instance.num_supplies());
  for (int j = 0; j < instance.num_supplies(); ++j) w[j] = instance.supply(j).weight;
  return w;
}

double market_efficiency(const TwoStageInstance& instance, const Matching& first_stage,
                         std::span<const double> prices, const Realization& realization,
                         const Matching& second_stage) {
  double total = 0.0;
  for (const auto& pr : first_stage.pairs) {
    total += instance.first_stage_value(pr.demand) + instance.supply(pr.supply).weight;
  }
  for (const auto& pr : second_stage.pairs) {
    const double v = realization.values.empty() ? 0.0 : realization.values[pr.demand];
    if (!prices.empty() && v < prices[pr.demand]) continue;  // never accepted
    total += v + instance.supply(pr.supply).weight;
  }
  return total;
}

PricingRun ocrs_two_stage(const TwoStageInstance& instance, const EarSolution& ear, Rng& rng) {
  require_pricing(instance, "ocrs_two_stage");
  const std::vector<double> x = edge_values(instance, ear);
  std::vector<double> theta(instance.num_supplies(), 0.0);
  std::vector<char> taken(instance.num_supplies(), 0);
  PricingRun run;
  for (int i : by_id(instance, instance.first_stage())) {
    const int j = propose_and_discard(instance, i, x, 1.0, theta, taken, true, rng);
    if (j >= 0) run.first_stage.pairs.push_back({i, j});
  }
  std::sort(run.first_stage.pairs.begin(), run.first_stage.pairs.end());
  run.prices = ear.prices;
  run.realization = sample_realization(instance, run.prices, rng);
  std::vector<int> free;
  for (int j = 0; j < instance.num_supplies(); ++j) {
    if (!taken[j]) free.push_back(j);
  }
  const std::vector<double> dw = platform_demand_weights(instance, run.prices);
  const std::vector<double> sw = supply_weights(instance);
  run.second_stage =
      max_vertex_weight_matching(instance, run.realization.available, free, dw, sw).matching;
  run.value = market_efficiency(instance, run.first_stage, run.prices, run.realization,
                                run.second_stage);
  return run;
}

PricingRun ocrs_full_run(const TwoStageInstance& instance, const EarSolution& ear, Rng& rng) {
  require_pricing(instance, "ocrs_full_run");
  const std::vector<double> x = edge_values(instance, ear);
  std::vector<double> theta(instance.num_supplies(), 0.0);
  std::vector<char> taken(instance.num_supplies(), 0);
  PricingRun run;
  for (int i : by_id(instance, instance.first_stage())) {
    const int j = propose_and_discard(instance, i, x, 1.0, theta, taken, true, rng);
    if (j >= 0) run.first_stage.pairs.push_back({i, j});
  }
  run.prices = ear.prices;
  run.realization = sample_realization(instance, run.prices, rng);
  std::vector<char> accepted(instance.num_demands(), 0);
  for (int i : run.realization.available) accepted[i] = 1;
  for (int i : by_id(instance, instance.second_stage())) {
    const double y = ear.y_demand[i];
    bool propose = accepted[i] && y > 0.0;
    if (propose) {
      const double a = instance.demand(i).valuation->survival(run.prices[i]);
      if (a > y) propose = rng.uniform() * a < y;
    }
    const int j = propose_and_discard(instance, i, x, std::max(y, 1e-300), theta, taken, propose,
                                      rng);
    if (j >= 0) run.second_stage.pairs.push_back({i, j});
  }
  std::sort(run.first_stage.pairs.begin(), run.first_stage.pairs.end());
  std::sort(run.second_stage.pairs.begin(), run.second_stage.pairs.end());
  run.value = market_efficiency(instance, run.first_stage, run.prices, run.realization,
                                run.second_stage);
  return run;
}

OcrsStats ocrs_full_variant(const TwoStageInstance& instance, const EarSolution& ear, int runs,
                            uint64_t seed, int threads) {
  require_pricing(instance, "ocrs_full_variant");
  if (runs < 1) throw ConfigError("ocrs_full_variant: runs must be >= 1");
  const int ns = instance.num_supplies();
  const int ne = instance.num_edges();
  struct Counts {
    std::vector<long> edge, after_first, final_;
  };
  threads = std::clamp(threads, 1, runs);
  std::vector<Counts> parts(threads);
  auto work = [&](int part) {
    Counts& c = parts[part];
    c.edge.assign(ne, 0);
    c.after_first.assign(ns, 0);
    c.final_.assign(ns, 0);
    for (int r = part; r < runs; r += threads) {
      Rng rng(seed, static_cast<uint64_t>(r), Stream::kDiscard);
      const PricingRun run = ocrs_full_run(instance, ear, rng);
      std::vector<char> used(ns, 0);
      for (const auto& pr : run.first_stage.pairs) used[pr.supply] = 1;
      for (int j = 0; j < ns; ++j) c.after_first[j] += !used[j];
      for (const auto& pr : run.second_stage.pairs) used[pr.supply] = 1;
      for (int j = 0; j < ns; ++j) c.final_[j] += !used[j];
      for (const auto* m : {&run.first_stage, &run.second_stage}) {
        for (const auto& pr : m->pairs) ++c.edge[*instance.find_edge(pr.demand, pr.supply)];
      }
    }
  };
  std::vector<std::thread> pool;
  for (int p = 1; p < threads; ++p) pool.emplace_back(work, p);
  work(0);
  for (auto& t : pool) t.join();

  OcrsStats st;
  st.runs = runs;
  st.edge_frequency.assign(ne, 0.0);
  st.unmatched_after_first.assign(ns, 0.0);
  st.unmatched_final.assign(ns, 0.0);
  for (const auto& c : parts) {
    for (int e = 0; e < ne; ++e) st.edge_frequency[e] += static_cast<double>(c.edge[e]);
    for (int j = 0; j < ns; ++j) {
      st.unmatched_after_first[j] += static_cast<double>(c.after_first[j]);
      st.unmatched_final[j] += static_cast<double>(c.final_[j]);
    }
  }
  for (double& v : st.edge_frequency) v /= runs;
  for (double& v : st.unmatched_after_first) v /= runs;
  for (double& v : st.unmatched_final) v /= runs;
  const std::vector<double> x = edge_values(instance, ear);
  st.theta_first.assign(ns, 0.0);
  st.theta_final.assign(ns, 0.0);
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = instance.edges()[e];
    if (instance.is_first_stage(ed.demand)) st.theta_first[ed.supply] += x[e];
    st.theta_final[ed.supply] += x[e];
  }
  return st;
}

double fixed_price_run(const TwoStageInstance& instance, std::span<const double> prices,
                       Rng& rng) {
  require_pricing(instance, "fixed_price_run");
  const Realization real = sample_realization(instance, prices, rng);
  std::vector<int> all(instance.num_supplies());
  for (int j = 0; j < instance.num_supplies(); ++j) all[j] = j;
  const std::vector<double> dw = platform_demand_weights(instance, prices);
  const std::vector<double> sw = supply_weights(instance);
  const Matching m2 = max_vertex_weight_matching(instance, real.available, all, dw, sw).matching;
  return market_efficiency(instance, Matching{}, prices, real, m2);
}

Estimate opt_offline_mp_estimate(const TwoStageInstance& instance, int n_samples, uint64_t seed) {
  require_pricing(instance, "opt_offline_mp_estimate");
  if (n_samples < 1) throw ConfigError("opt_offline_mp_estimate: n_samples must be >= 1");
  std::vector<int> all_d(instance.num_demands()), all_s(instance.num_supplies());
  for (int i = 0; i < instance.num_demands(); ++i) all_d[i] = i;
  for (int j = 0; j < instance.num_supplies(); ++j) all_s[j] = j;
  const std::vector<double> sw = supply_weights(instance);
  std::vector<double> dw(instance.num_demands(), 0.0);
  for (int i : instance.first_stage()) dw[i] = instance.first_stage_value(i);
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    Rng rng(seed, static_cast<uint64_t>(s), Stream::kValues);
    for (int i : instance.second_stage()) dw[i] = instance.demand(i).valuation->sample(rng);
    const double v = max_vertex_weight_matching(instance, all_d, all_s, dw, sw).value;
    sum += v;
    sum2 += v * v;
  }
  const double n = n_samples;
  Estimate e;
  e.mean = sum / n;
  if (n_samples > 1) e.stderr_ = std::sqrt(std::max(0.0, (sum2 - n * e.mean * e.mean) / (n - 1)) / n);
  return e;
}

double opt_offline_mp_exact(const TwoStageInstance& instance) {
  require_pricing(instance, "opt_offline_mp_exact");
  const auto& d2 = instance.second_stage();
  double profiles = 1.0;
  for (int i : d2) {
    const Valuation& v = *instance.demand(i).valuation;
    if (!v.finitely_supported()) {
      throw ConfigError("opt_offline_mp_exact: needs finitely supported valuations");
    }
    profiles *= static_cast<double>(v.atoms().size());
  }
  if (profiles > 1e6) {
    throw SizeGuardError("opt_offline_mp_exact: more than 1e6 value profiles");
  }
  std::vector<int> all_d(instance.num_demands()), all_s(instance.num_supplies());
  for (int i = 0; i < instance.num_demands(); ++i) all_d[i] = i;
  for (int j = 0; j < instance.num_supplies(); ++j) all_s[j] = j;
  const std::vector<double> sw = supply_weights(instance);
  std::vector<double> dw(instance.num_demands(), 0.0);
  for (int i : instance.first_stage()) dw[i] = instance.first_stage_value(i);
  std::vector<std::size_t> digit(d2.size(), 0);
  double total = 0.0;
  for (;;) {
    double p = 1.0;
    for (std::size_t k = 0; k < d2.size(); ++k) {
      const auto& atom = instance.demand(d2[k]).valuation->atoms()[digit[k]];
      dw[d2[k]] = atom.first;
      p *= atom.second;
    }
    if (p > 0.0) total += p * max_vertex_weight_matching(instance, all_d, all_s, dw, sw).value;
    std::size_t k = 0;
    while (k < d2.size() && ++digit[k] == instance.demand(d2[k]).valuation->atoms().size()) {
      digit[k++] = 0;
    }
    if (k == d2.size()) break;
  }
  return total;
}

namespace {

void require_single_stage(const TwoStageInstance& instance, const char* who) {
  require_pricing(instance, who);
  if (!instance.first_stage().empty()) {
    throw ConfigError(std::string(who) + ": needs an instance without first-stage demand");
  }
  for (const auto& s : instance.supplies()) {
    if (s.weight != 0.0) throw ConfigError(std::string(who) + ": needs zero supply weights");
  }
}

}  // namespace

double single_stage_price_and_match(const TwoStageInstance& instance, Rng& rng) {
  require_single_stage(instance, "single_stage_price_and_match");
  const EarSolution ear = solve_ear(instance);
  const Realization real = sample_realization(instance, ear.prices, rng);
  std::vector<int> all(instance.num_supplies());
  for (int j = 0; j < instance.num_supplies(); ++j) all[j] = j;
  const std::vector<double> dw = platform_demand_weights(instance, ear.prices);
  const std::vector<double> sw = supply_weights(instance);
  const Matching m = max_vertex_weight_matching(instance, real.available, all, dw, sw).matching;
  double total = 0.0;
  for (const auto& pr : m.pairs) total += real.values[pr.demand];
  return total;
}

double single_stage_exact(const TwoStageInstance& instance, const EarSolution& ear) {
  require_single_stage(instance, "single_stage_exact");
  const auto& d2 = instance.second_stage();
  if (d2.size() > 20) throw SizeGuardError("single_stage_exact: more than 20 demands");
  std::vector<int> all(instance.num_supplies());
  for (int j = 0; j < instance.num_supplies(); ++j) all[j] = j;
  const std::vector<double> dw = platform_demand_weights(instance, ear.prices);
  const std::vector<double> sw = supply_weights(instance);
  std::vector<double> accept(d2.size());
  for (std::size_t k = 0; k < d2.size(); ++k) {
    accept[k] = instance.demand(d2[k]).valuation->survival(ear.prices[d2[k]]);
  }
  double total = 0.0;
  std::vector<int> avail;
  for (uint32_t mask = 0; mask < (1u << d2.size()); ++mask) {
    double p = 1.0;
    avail.clear();
    for (std::size_t k = 0; k < d2.size(); ++k) {
      if (mask >> k & 1u) {
        p *= accept[k];
        avail.push_back(d2[k]);
      } else {
        p *= 1.0 - accept[k];
      }
    }
    if (p == 0.0) continue;
    total += p * max_vertex_weight_matching(instance, avail, all, dw, sw).value;
  }
  return total;
}

}  // namespace tsm

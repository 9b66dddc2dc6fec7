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

#include "tsm/bench.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsm/balance.hpp"
#include "tsm/errors.hpp"
#include "tsm/instance_io.hpp"
#include "tsm/parallel.hpp"
#include "tsm/pricing.hpp"
#include "tsm/submodular.hpp"

namespace tsm {
namespace {

constexpr double kZ95 = 1.959963984540054;

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  for (int k = 0; k < n; ++k) v[k] = k;
  return v;
}

double offline_value(const TwoStageInstance& inst, std::span<const int> available) {
  std::vector<int> demands = inst.first_stage();
  demands.insert(demands.end(), available.begin(), available.end());
  const std::vector<int> all = iota_vec(inst.num_supplies());
  if (inst.edge_weighted()) return max_edge_weight_matching(inst, demands, all).value;
  return max_supply_weight_matching(inst, demands, all).value;
}

void require_matching_instance(const TwoStageInstance& inst, const char* who) {
  if (inst.kind() == InstanceKind::kPricing) {
    throw ConfigError(std::string(who) + ": pricing instances use the offline-MP oracles");
  }
}

Ratio finish(double r, double se) {
  return {r, se, r - kZ95 * se, r + kZ95 * se};
}

}  // namespace

std::vector<double> opt_offline_values(const TwoStageInstance& instance, int trials,
                                       uint64_t seed, int threads) {
  require_matching_instance(instance, "opt_offline_values");
  std::vector<double> v(std::max(trials, 0));
  parallel_for(trials, threads, [&](int t) {
    Rng rng(seed, static_cast<uint64_t>(t), Stream::kRealization);
    v[t] = offline_value(instance, sample_realization(instance, rng).available);
  });
  return v;
}

Estimate opt_offline_estimate(const TwoStageInstance& instance, int n_samples, uint64_t seed,
                              int threads) {
  if (n_samples < 1) throw ConfigError("opt_offline_estimate: n_samples must be >= 1");
  return summarize(opt_offline_values(instance, n_samples, seed, threads));
}

double opt_offline_exact(const TwoStageInstance& instance) {
  require_matching_instance(instance, "opt_offline_exact");
  if (instance.realization_mode() == RealizationMode::kScenarioList) {
    double total = 0.0;
    for (const auto& sc : instance.scenarios()) {
      total += sc.probability * offline_value(instance, sc.demands);
    }
    return total;
  }
  const auto& d2 = instance.second_stage();
  if (d2.size() > 20) {
    throw SizeGuardError("opt_offline_exact: " + std::to_string(d2.size()) +
                         " second-stage demands exceed the enumeration limit of 20");
  }
  double total = 0.0;
  std::vector<int> avail;
  for (uint32_t mask = 0; mask < (1u << d2.size()); ++mask) {
    double p = 1.0;
    avail.clear();
    for (std::size_t b = 0; b < d2.size(); ++b) {
      const double pi = instance.demand(d2[b]).availability;
      if (mask >> b & 1u) {
        p *= pi;
        avail.push_back(d2[b]);
      } else {
        p *= 1.0 - pi;
      }
    }
    if (p > 0.0) total += p * offline_value(instance, avail);
  }
  return total;
}

double opt_online_exact(const TwoStageInstance& instance) {
  require_matching_instance(instance, "opt_online_exact");
  if (instance.edge_weighted()) {
    throw ConfigError("opt_online_exact: supply-weighted instances only");
  }
  if (instance.num_supplies() > 12) {
    throw SizeGuardError("opt_online_exact: more than 12 supplies");
  }
  if (instance.second_stage().size() > 16) {
    throw SizeGuardError("opt_online_exact: more than 16 second-stage demands");
  }
  double best = 0.0;
  for (const DualBase& b : enumerate_dual_bases(instance)) {
    best = std::max(best, complement_weight(instance, b.supplies) + exact_fw(instance, b.supplies));
  }
  return best;
}

Ratio ratio_paired(std::span<const double> num, std::span<const double> den) {
  const Estimate a = summarize(num);
  const Estimate b = summarize(den);
  if (b.mean == 0.0) return finish(0.0, 0.0);
  const double r = a.mean / b.mean;
  const std::size_t n = std::min(num.size(), den.size());
  if (n < 2) return finish(r, 0.0);
  double ss = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double z = num[t] - r * den[t];
    ss += z * z;
  }
  const double var = ss / (static_cast<double>(n) - 1.0) / static_cast<double>(n);
  return finish(r, std::sqrt(var) / std::abs(b.mean));
}

Ratio ratio_independent(const Estimate& num, const Estimate& den) {
  if (den.mean == 0.0) return finish(0.0, 0.0);
  const double r = num.mean / den.mean;
  const double rel_b = den.stderr_ / den.mean;
  const double se = std::sqrt(num.stderr_ * num.stderr_ / (den.mean * den.mean) + r * r * rel_b * rel_b);
  return finish(r, se);
}

double first_stage_share(const TwoStageInstance& instance) {
  const std::vector<int> all = iota_vec(instance.num_supplies());
  const double m1 = static_cast<double>(max_card_matching(instance, instance.first_stage(), all).size());
  auto share = [&](std::span<const int> avail) {
    std::vector<int> d = instance.first_stage();
    d.insert(d.end(), avail.begin(), avail.end());
    const double m = static_cast<double>(max_card_matching(instance, d, all).size());
    return m == 0.0 ? 1.0 : m1 / m;
  };
  if (instance.realization_mode() == RealizationMode::kScenarioList) {
    double g = 1.0;
    for (const auto& sc : instance.scenarios()) {
      if (sc.probability > 0.0) g = std::min(g, share(sc.demands));
    }
    return g;
  }
  std::vector<int> present;
  for (int i : instance.second_stage()) {
    if (instance.demand(i).availability > 0.0) present.push_back(i);
  }
  return share(present);
}

RobustnessReport robustness_check(const TwoStageInstance& instance, SecondStagePolicy second_stage,
                                  int trials, uint64_t seed, int threads) {
  require_matching_instance(instance, "robustness_check");
  if (trials < 2) throw ConfigError("robustness_check: trials must be >= 2");
  RobustnessReport rep;
  rep.second_stage = second_stage;
  rep.beta = second_stage == SecondStagePolicy::kExact ? 1.0 : 0.5;
  rep.unweighted = !instance.edge_weighted();
  for (const auto& s : instance.supplies()) {
    rep.unweighted = rep.unweighted && s.weight == instance.supplies().front().weight;
  }

  PolicySpec spec;
  spec.kind = PolicyKind::kWbu;
  spec.second_stage = second_stage;
  const PolicyPlan plan =
      make_plan(spec, instance, derive_seed(seed, 0, static_cast<uint64_t>(Stream::kPlan)));
  rep.refined_bound = refined_bound(plan.balance);
  const std::vector<double> bench = opt_offline_values(instance, trials, seed, threads);
  const std::vector<double> alg = trial_values(plan, instance, trials, seed, threads);
  rep.ratio = ratio_paired(alg, bench);
  if (second_stage == SecondStagePolicy::kExact) {
    rep.exact_ratio = rep.ratio;
  } else {
    PolicyPlan exact = plan;
    exact.spec.second_stage = SecondStagePolicy::kExact;
    rep.exact_ratio = ratio_paired(trial_values(exact, instance, trials, seed, threads), bench);
  }

  const double bench_mean = summarize(bench).mean;
  if (rep.unweighted) {
    rep.gamma_hat = first_stage_share(instance);
    rep.gamma_bound = rep.gamma_hat + rep.beta * (1.0 - rep.gamma_hat) * (1.0 - rep.gamma_hat);
    rep.gamma_pass = bench_mean == 0.0 ||
                     rep.ratio.value >= rep.gamma_bound - 3.0 * rep.ratio.stderr_ - 1e-12;
  }
  // The refined bound is stated for the exact second stage.
  rep.refined_pass =
      bench_mean == 0.0 ||
      rep.exact_ratio.value >= rep.refined_bound - 3.0 * rep.exact_ratio.stderr_ - 1e-12;
  return rep;
}

SimReport compare(const TwoStageInstance& instance, const std::vector<PolicySpec>& policies,
                  int trials, uint64_t seed, int threads) {
  if (trials < 1) throw ConfigError("compare: trials must be >= 1");
  SimReport rep;
  rep.instance_digest = instance_digest(instance);
  rep.seed = seed;
  rep.trials = trials;
  rep.threads = threads;
  for (const auto& p : policies) rep.policies.push_back(p.name());
  rep.specs = policies;

  const bool pricing = instance.kind() == InstanceKind::kPricing;
  std::vector<double> bench;
  Estimate bench_est;
  if (pricing) {
    bench_est = opt_offline_mp_estimate(instance, trials, seed);
  } else {
    bench = opt_offline_values(instance, trials, seed, threads);
    bench_est = summarize(bench);
    try {
      rep.opt_online = opt_online_exact(instance);
    } catch (const SizeGuardError&) {
    } catch (const ConfigError&) {
    }
  }
  for (const auto& spec : policies) {
    const PolicyPlan plan =
        make_plan(spec, instance, derive_seed(seed, 0, static_cast<uint64_t>(Stream::kPlan)));
    const std::vector<double> vals = trial_values(plan, instance, trials, seed, threads);
    const Estimate est = summarize(vals);
    SimRow row;
    row.policy = spec.name();
    row.trials = trials;
    row.mean = est.mean;
    row.stderr_ = est.stderr_;
    row.benchmark = pricing ? "opt_offline_mp" : "opt_offline";
    row.bench_mean = bench_est.mean;
    row.bench_stderr = bench_est.stderr_;
    row.ratio = pricing ? ratio_independent(est, bench_est) : ratio_paired(vals, bench);
    rep.rows.push_back(row);
    if (rep.opt_online) {
      SimRow on = row;
      on.benchmark = "opt_online";
      on.bench_mean = *rep.opt_online;
      on.bench_stderr = 0.0;
      on.ratio = ratio_independent(est, {*rep.opt_online, 0.0});
      rep.rows.push_back(on);
    }
  }
  return rep;
}

}  // namespace tsm

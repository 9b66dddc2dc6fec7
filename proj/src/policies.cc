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

#include "tsm/policies.hpp"

#include <cmath>
#include <cstdlib>

#include "tsm/errors.hpp"
#include "tsm/parallel.hpp"
#include "tsm/submodular.hpp"

namespace tsm {

std::string PolicySpec::name() const {
  std::string n;
  switch (kind) {
    case PolicyKind::kWbu: n = "wbu"; break;
    case PolicyKind::kGr: n = "gr"; break;
    case PolicyKind::kSm: n = "sm"; break;
    case PolicyKind::kSmLimit: n = "sm-limit"; break;
    case PolicyKind::kHg: n = hg_mode == HgMode::kPickBetter ? "hg-pick" : "hg"; break;
    case PolicyKind::kEdgeDiscard: n = "edge-discard"; break;
    case PolicyKind::kOcrsPricing: n = "ocrs"; break;
  }
  if (kind == PolicyKind::kHg && hg_mode == HgMode::kRandomize && lambda >= 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ":%.9g", lambda);
    n += buf;
  }
  if (second_stage == SecondStagePolicy::kGreedyMaximal) n += "+greedy";
  return n;
}

PolicySpec PolicySpec::parse(const std::string& text) {
  PolicySpec spec;
  std::string t = text;
  const std::string greedy = "+greedy";
  if (t.size() > greedy.size() && t.compare(t.size() - greedy.size(), greedy.size(), greedy) == 0) {
    spec.second_stage = SecondStagePolicy::kGreedyMaximal;
    t.resize(t.size() - greedy.size());
  }
  if (t == "wbu") {
    spec.kind = PolicyKind::kWbu;
  } else if (t == "gr") {
    spec.kind = PolicyKind::kGr;
  } else if (t == "sm") {
    spec.kind = PolicyKind::kSm;
  } else if (t == "sm-limit") {
    spec.kind = PolicyKind::kSmLimit;
  } else if (t == "hg") {
    spec.kind = PolicyKind::kHg;
  } else if (t.rfind("hg:", 0) == 0) {
    spec.kind = PolicyKind::kHg;
    char* end = nullptr;
    spec.lambda = std::strtod(t.c_str() + 3, &end);
    if (end == t.c_str() + 3 || *end != '\0' || !(spec.lambda >= 0.0 && spec.lambda <= 1.0)) {
      throw ConfigError("policy '" + text + "': lambda must be a number in [0,1]");
    }
  } else if (t == "hg-pick") {
    spec.kind = PolicyKind::kHg;
    spec.hg_mode = HgMode::kPickBetter;
  } else if (t == "edge-discard") {
    spec.kind = PolicyKind::kEdgeDiscard;
  } else if (t == "ocrs") {
    spec.kind = PolicyKind::kOcrsPricing;
  } else {
    throw ConfigError("unknown policy '" + text + "'");
  }
  return spec;
}

namespace {

bool unit_weighted(const TwoStageInstance& inst) {
  for (const auto& s : inst.supplies()) {
    if (s.weight != inst.supplies().front().weight) return false;
  }
  return true;
}

std::vector<int> all_supplies(const TwoStageInstance& inst) {
  std::vector<int> v(inst.num_supplies());
  for (int j = 0; j < inst.num_supplies(); ++j) v[j] = j;
  return v;
}

Matching plan_sm(const PolicySpec& spec, const TwoStageInstance& inst, uint64_t seed) {
  const RankOracle oracle(inst, spec.samples, derive_seed(seed, 1));
  const int passes = spec.kind == PolicyKind::kSmLimit ? 5 : spec.max_passes;
  return first_stage_from_base(inst, local_search_base(inst, spec.epsilon, oracle, passes));
}

}  // namespace

PolicyPlan make_plan(const PolicySpec& spec, const TwoStageInstance& instance, uint64_t seed) {
  const bool pricing = instance.kind() == InstanceKind::kPricing;
  if (spec.kind == PolicyKind::kOcrsPricing && !pricing) {
    throw ConfigError("policy ocrs needs a pricing instance (valuations on second-stage demand)");
  }
  if (spec.kind != PolicyKind::kOcrsPricing && pricing) {
    throw ConfigError("policy " + spec.name() + " does not apply to pricing instances; use ocrs");
  }
  if (spec.kind == PolicyKind::kEdgeDiscard && !instance.edge_weighted()) {
    throw ConfigError("policy edge-discard needs an edge-weighted instance");
  }
  if (spec.lambda > 1.0) throw ConfigError("HG lambda must lie in [0,1]");
  if (!(spec.epsilon > 0.0)) throw ConfigError("SM epsilon must be positive");

  PolicyPlan plan;
  plan.spec = spec;
  plan.lambda = spec.lambda >= 0.0
                    ? spec.lambda
                    : (unit_weighted(instance) ? kHgLambdaUnweighted : kHgLambdaWeighted);
  const auto& d1 = instance.first_stage();
  switch (spec.kind) {
    case PolicyKind::kWbu:
      plan.balance = solve_balance(instance);
      plan.wbu = bvn_decompose(plan.balance.x);
      break;
    case PolicyKind::kGr:
      if (instance.edge_weighted()) {
        plan.fixed_first_stage = max_edge_weight_matching(instance, d1, all_supplies(instance)).matching;
      } else {
        plan.fixed_first_stage =
            max_supply_weight_matching(instance, d1, all_supplies(instance)).matching;
      }
      break;
    case PolicyKind::kSm:
    case PolicyKind::kSmLimit:
      plan.sm_first_stage = plan_sm(spec, instance, seed);
      break;
    case PolicyKind::kHg: {
      plan.balance = solve_balance(instance);
      plan.wbu = bvn_decompose(plan.balance.x);
      PolicySpec sm = spec;
      sm.kind = PolicyKind::kSm;
      plan.sm_first_stage = plan_sm(sm, instance, seed);
      if (spec.hg_mode == HgMode::kPickBetter) {
        const uint64_t pick_seed = derive_seed(seed, 2);
        PolicyPlan a = plan, b = plan;
        a.spec.kind = PolicyKind::kWbu;
        b.spec.kind = PolicyKind::kSm;
        const Estimate ea = summarize(trial_values(a, instance, spec.pick_trials, pick_seed));
        const Estimate eb = summarize(trial_values(b, instance, spec.pick_trials, pick_seed));
        plan.pick_wbu = ea.mean >= eb.mean;
      }
      break;
    }
    case PolicyKind::kEdgeDiscard:
      plan.fixed_first_stage = max_edge_weight_matching(instance, d1, all_supplies(instance)).matching;
      break;
    case PolicyKind::kOcrsPricing:
      plan.ear = solve_ear(instance);
      break;
  }
  return plan;
}

Matching second_stage_matching(const TwoStageInstance& instance, const Matching& first_stage,
                               std::span<const int> available, SecondStagePolicy policy) {
  std::vector<char> used(instance.num_supplies(), 0);
  for (const auto& pr : first_stage.pairs) used[pr.supply] = 1;
  std::vector<int> free;
  for (int j = 0; j < instance.num_supplies(); ++j) {
    if (!used[j]) free.push_back(j);
  }
  const MatchAlgo algo =
      policy == SecondStagePolicy::kExact ? MatchAlgo::kExact : MatchAlgo::kGreedy;
  if (instance.edge_weighted()) {
    return match_subgraph(instance, available, free,
                          [&](int e) { return instance.edges()[e].weight; }, algo)
        .matching;
  }
  if (algo == MatchAlgo::kExact) return max_supply_weight_matching(instance, available, free).matching;
  return greedy_supply_weight_matching(instance, available, free).matching;
}

double run_value(const TwoStageInstance& instance, const PolicyRun& run) {
  if (instance.kind() == InstanceKind::kPricing) {
    return market_efficiency(instance, run.first_stage, run.prices, run.realization,
                             run.second_stage);
  }
  double total = 0.0;
  for (const auto* m : {&run.first_stage, &run.second_stage}) {
    for (const auto& pr : m->pairs) {
      total += instance.edge_weighted() ? instance.edges()[*instance.find_edge(pr.demand, pr.supply)].weight
                                        : instance.supply(pr.supply).weight;
    }
  }
  return total;
}

PolicyRun run_trial(const PolicyPlan& plan, const TwoStageInstance& instance, uint64_t seed,
                    uint64_t trial) {
  PolicyRun run;
  if (plan.spec.kind == PolicyKind::kOcrsPricing) {
    Rng rng(seed, trial, Stream::kDiscard);
    PricingRun pr = ocrs_two_stage(instance, plan.ear, rng);
    run.first_stage = std::move(pr.first_stage);
    run.second_stage = std::move(pr.second_stage);
    run.realization = std::move(pr.realization);
    run.prices = std::move(pr.prices);
    run.value = pr.value;
    return run;
  }
  Rng first_rng(seed, trial, Stream::kFirstStage);
  switch (plan.spec.kind) {
    case PolicyKind::kWbu:
      run.first_stage = plan.wbu.sample(first_rng);
      break;
    case PolicyKind::kGr:
      run.first_stage = plan.fixed_first_stage;
      break;
    case PolicyKind::kSm:
    case PolicyKind::kSmLimit:
      run.first_stage = plan.sm_first_stage;
      break;
    case PolicyKind::kHg: {
      bool use_wbu = plan.pick_wbu;
      if (plan.spec.hg_mode == HgMode::kRandomize) {
        Rng coin(seed, trial, Stream::kCoin);
        use_wbu = coin.bernoulli(plan.lambda);
      }
      run.first_stage = use_wbu ? plan.wbu.sample(first_rng) : plan.sm_first_stage;
      break;
    }
    case PolicyKind::kEdgeDiscard: {
      Rng discard(seed, trial, Stream::kDiscard);
      for (const auto& pr : plan.fixed_first_stage.pairs) {
        if (!discard.bernoulli(0.5)) run.first_stage.pairs.push_back(pr);
      }
      break;
    }
    case PolicyKind::kOcrsPricing:
      break;
  }
  Rng real_rng(seed, trial, Stream::kRealization);
  run.realization = sample_realization(instance, real_rng);
  run.second_stage = second_stage_matching(instance, run.first_stage, run.realization.available,
                                           plan.spec.second_stage);
  run.value = run_value(instance, run);
  return run;
}

PolicyRun run_policy(const PolicySpec& spec, const TwoStageInstance& instance, Rng& rng) {
  const uint64_t seed = rng.next();
  const PolicyPlan plan = make_plan(spec, instance, derive_seed(seed, 0, static_cast<uint64_t>(Stream::kPlan)));
  return run_trial(plan, instance, seed, 0);
}

std::vector<double> trial_values(const PolicyPlan& plan, const TwoStageInstance& instance,
                                 int trials, uint64_t seed, int threads) {
  std::vector<double> values(std::max(trials, 0));
  parallel_for(trials, threads, [&](int t) {
    values[t] = run_trial(plan, instance, seed, static_cast<uint64_t>(t)).value;
  });
  return values;
}

ValueEstimate expected_value(const PolicySpec& spec, const TwoStageInstance& instance, int trials,
                             uint64_t seed, int threads) {
  if (trials < 1) throw ConfigError("expected_value: trials must be >= 1");
  const PolicyPlan plan =
      make_plan(spec, instance, derive_seed(seed, 0, static_cast<uint64_t>(Stream::kPlan)));
  const std::vector<double> values = trial_values(plan, instance, trials, seed, threads);
  const Estimate e = summarize(values);
  return {e.mean, e.stderr_, trials};
}

}  // namespace tsm

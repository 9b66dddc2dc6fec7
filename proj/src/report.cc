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

#include "tsm/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace tsm {

using nlohmann::json;

std::string fmt9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double round9(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(fmt9(x).c_str(), nullptr);
}

namespace {

json ids_of_demands(const TwoStageInstance& inst, const std::vector<int>& pos) {
  json a = json::array();
  for (int i : pos) a.push_back(inst.demand(i).id);
  return a;
}

json ids_of_supplies(const TwoStageInstance& inst, const std::vector<int>& pos) {
  json a = json::array();
  for (int j : pos) a.push_back(inst.supply(j).id);
  return a;
}

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round9(x);
}

json ratio_json(const Ratio& r) {
  return {{"value", num(r.value)}, {"stderr", num(r.stderr_)}, {"lo95", num(r.lo95)},
          {"hi95", num(r.hi95)}};
}

}  // namespace

std::string to_csv(const SimReport& report) {
  std::ostringstream out;
  out << "instance_digest,policy,trials,mean,stderr,benchmark,bench_mean,bench_stderr,ratio,"
         "ratio_lo95,ratio_hi95,seed\n";
  for (const auto& r : report.rows) {
    out << report.instance_digest << ',' << r.policy << ',' << r.trials << ',' << fmt9(r.mean)
        << ',' << fmt9(r.stderr_) << ',' << r.benchmark << ',' << fmt9(r.bench_mean) << ','
        << fmt9(r.bench_stderr) << ',' << fmt9(r.ratio.value) << ',' << fmt9(r.ratio.lo95) << ','
        << fmt9(r.ratio.hi95) << ',' << report.seed << '\n';
  }
  return out.str();
}

json to_json(const SimReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"instance_digest", report.instance_digest},
                    {"policy", r.policy},
                    {"trials", r.trials},
                    {"mean", num(r.mean)},
                    {"stderr", num(r.stderr_)},
                    {"benchmark", r.benchmark},
                    {"bench_mean", num(r.bench_mean)},
                    {"bench_stderr", num(r.bench_stderr)},
                    {"ratio", num(r.ratio.value)},
                    {"ratio_lo95", num(r.ratio.lo95)},
                    {"ratio_hi95", num(r.ratio.hi95)},
                    {"seed", report.seed}});
  }
  json specs = json::array();
  for (const auto& spec : report.specs) {
    json c = {{"name", spec.name()},
              {"second_stage",
               spec.second_stage == SecondStagePolicy::kExact ? "exact" : "greedy_maximal"}};
    if (spec.kind == PolicyKind::kSm || spec.kind == PolicyKind::kSmLimit ||
        spec.kind == PolicyKind::kHg) {
      c["epsilon"] = num(spec.epsilon);
      c["oracle_samples"] = spec.samples;
      c["max_passes"] = spec.kind == PolicyKind::kSmLimit ? 5 : spec.max_passes;
    }
    if (spec.kind == PolicyKind::kHg) {
      c["lambda"] = spec.lambda < 0.0 ? json("auto") : num(spec.lambda);
      c["mode"] = spec.hg_mode == HgMode::kPickBetter ? "pick_better" : "randomize";
      if (spec.hg_mode == HgMode::kPickBetter) c["pick_trials"] = spec.pick_trials;
    }
    specs.push_back(c);
  }
  json doc = {{"instance_digest", report.instance_digest},
              {"rows", rows},
              {"config", {{"policies", report.policies},
                          {"policy_config", specs},
                          {"trials", report.trials},
                          {"seed", report.seed},
                          {"threads", report.threads}}}};
  doc["opt_online"] = report.opt_online ? num(*report.opt_online) : json(nullptr);
  return doc;
}

json to_json(const TwoStageInstance& instance, const Matching& m) {
  json a = json::array();
  for (const auto& pr : m.pairs) {
    a.push_back({instance.demand(pr.demand).id, instance.supply(pr.supply).id});
  }
  return a;
}

json to_json(const TwoStageInstance& instance, const BalanceSolution& sol) {
  json x = json::array();
  for (const auto& e : sol.x.entries) {
    x.push_back({{"d", instance.demand(e.demand).id},
                 {"s", instance.supply(e.supply).id},
                 {"x", num(e.value)}});
  }
  json y = json::object(), r = json::object();
  for (int j = 0; j < instance.num_supplies(); ++j) {
    const std::string id = std::to_string(instance.supply(j).id);
    y[id] = num(sol.y[j]);
    r[id] = num(sol.residual[j]);
  }
  return {{"x", x},
          {"y", y},
          {"residual", r},
          {"objective", num(sol.objective)},
          {"solver_gap", num(sol.solver_gap)},
          {"iterations", sol.iterations},
          {"converged", sol.converged}};
}

json to_json(const TwoStageInstance& instance, const Decomposition& dec) {
  json levels = json::array();
  for (const auto& l : dec.levels) {
    levels.push_back({{"c", num(l.c)},
                      {"D", ids_of_demands(instance, l.demands)},
                      {"S", ids_of_supplies(instance, l.supplies)}});
  }
  return {{"level0",
           {{"D", ids_of_demands(instance, dec.level0_demands)},
            {"S", ids_of_supplies(instance, dec.level0_supplies)}}},
          {"levels", levels},
          {"zero_weight_supplies", ids_of_supplies(instance, dec.zero_weight_supplies)}};
}

json to_json(const DecompositionReport& rep) {
  auto one = [](const PropertyCheck& p) {
    return json{{"pass", p.pass}, {"worst", num(p.worst)}};
  };
  return {{"uniformity", one(rep.uniformity)},
          {"monotonicity", one(rep.monotonicity)},
          {"saturation", one(rep.saturation)},
          {"pass", rep.all_pass()}};
}

json to_json(const TwoStageInstance& instance, const EarSolution& ear) {
  json x = json::array();
  for (const auto& e : ear.x.entries) {
    x.push_back({{"d", instance.demand(e.demand).id},
                 {"s", instance.supply(e.supply).id},
                 {"x", num(e.value)}});
  }
  json yd = json::object(), ys = json::object(), prices = json::object();
  for (int i = 0; i < instance.num_demands(); ++i) {
    const std::string id = std::to_string(instance.demand(i).id);
    yd[id] = num(ear.y_demand[i]);
    if (!instance.is_first_stage(i)) prices[id] = num(ear.prices[i]);
  }
  for (int j = 0; j < instance.num_supplies(); ++j) {
    ys[std::to_string(instance.supply(j).id)] = num(ear.y_supply[j]);
  }
  return {{"x", x},
          {"y_demand", yd},
          {"y_supply", ys},
          {"prices", prices},
          {"objective", num(ear.objective)},
          {"solver_gap", num(ear.solver_gap)},
          {"method", ear.exact ? "flow_lp" : "conditional_gradient"},
          {"converged", ear.converged}};
}

json to_json(const TwoStageInstance& instance, const PolicyRun& run) {
  json values = json::object();
  if (!run.realization.values.empty()) {
    for (int i : instance.second_stage()) {
      values[std::to_string(instance.demand(i).id)] = num(run.realization.values[i]);
    }
  }
  json doc = {{"first_stage", to_json(instance, run.first_stage)},
              {"available", ids_of_demands(instance, run.realization.available)},
              {"second_stage", to_json(instance, run.second_stage)},
              {"value", num(run.value)}};
  if (!run.realization.values.empty()) doc["values"] = values;
  if (!run.prices.empty()) {
    json prices = json::object();
    for (int i : instance.second_stage()) {
      prices[std::to_string(instance.demand(i).id)] = num(run.prices[i]);
    }
    doc["prices"] = prices;
  }
  return doc;
}

json to_json(const FrResult& fr) {
  const FrPoint& p = fr.argmin;
  return {{"value", num(fr.value)},
          {"argmin",
           {{"s", num(p.s)},
            {"k", num(p.k)},
            {"w_bar", num(p.w_bar)},
            {"w_tilde", num(p.w_tilde)},
            {"c", num(fr_c(p))},
            {"lambda", num(p.lambda)}}}};
}

json to_json(const RobustnessReport& rep) {
  return {{"beta", num(rep.beta)},
          {"unweighted", rep.unweighted},
          {"gamma_hat", num(rep.gamma_hat)},
          {"gamma_bound", num(rep.gamma_bound)},
          {"refined_bound", num(rep.refined_bound)},
          {"ratio", ratio_json(rep.ratio)},
          {"exact_ratio", ratio_json(rep.exact_ratio)},
          {"gamma_pass", rep.gamma_pass},
          {"refined_pass", rep.refined_pass}};
}

}  // namespace tsm

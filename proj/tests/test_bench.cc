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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "tsm/bench.hpp"
#include "tsm/errors.hpp"
#include "tsm/factor_revealing.hpp"
#include "tsm/generators.hpp"
#include "tsm/report.hpp"

namespace tsm {
namespace {

RandomInstanceSpec tiny_spec(bool weighted) {
  RandomInstanceSpec spec;
  spec.first_stage = 3;
  spec.second_stage = 4;
  spec.supplies = 5;
  spec.edge_prob = 0.5;
  spec.pi_lo = 0.2;
  spec.pi_hi = 0.8;
  if (weighted) {
    spec.weight_lo = 0.3;
    spec.weight_hi = 2.0;
  }
  return spec;
}

TEST(OptOffline, WorstCaseOne) {
  const auto inst = gen_worst_case(1);
  EXPECT_NEAR(opt_offline_exact(inst), 1.75, 1e-12);
  const auto est = opt_offline_estimate(inst, 40000, 1);
  EXPECT_NEAR(est.mean, 1.75, 3 * est.stderr_);
}

TEST(OptOffline, NoAvailabilityIsFirstStageValue) {
  auto spec = tiny_spec(true);
  spec.pi_lo = spec.pi_hi = 0.0;
  const auto inst = gen_random(spec, 3);
  const auto est = opt_offline_estimate(inst, 500, 1);
  std::vector<int> s(inst.num_supplies());
  std::iota(s.begin(), s.end(), 0);
  EXPECT_NEAR(est.mean, max_supply_weight_matching(inst, inst.first_stage(), s).value, 1e-12);
  EXPECT_EQ(est.stderr_, 0.0);
}

TEST(OptOffline, MatchesEnumeration) {
  for (bool weighted : {false, true}) {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = gen_random(tiny_spec(weighted), seed);
      const double brute = oracle::opt_offline(inst);
      EXPECT_NEAR(opt_offline_exact(inst), brute, 1e-12);
      const auto est = opt_offline_estimate(inst, 20000, seed);
      EXPECT_NEAR(est.mean, brute, 3 * est.stderr_ + 1e-12);
    }
  }
}

TEST(OptOffline, EdgeWeightedAndScenarios) {
  auto spec = tiny_spec(false);
  spec.edge_weighted = true;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = gen_random(spec, seed);
    EXPECT_NEAR(opt_offline_exact(inst), oracle::opt_offline(inst), 1e-12);
  }
  GeoSpec g;
  g.riders_first = 3;
  g.riders_second = 6;
  g.drivers = 5;
  g.scenario_days = 3;
  g.radius = 5000;
  const auto geo = gen_geo(g, 2);
  EXPECT_NEAR(opt_offline_exact(geo), oracle::opt_offline(geo), 1e-12);
  EXPECT_NEAR(opt_online_exact(geo), oracle::opt_online(geo), 1e-12);
}

TEST(OptOnline, WorstCaseOneAndNoSecondStage) {
  EXPECT_NEAR(opt_online_exact(gen_worst_case(1)), 1.5, 1e-12);
  auto spec = tiny_spec(true);
  spec.pi_lo = spec.pi_hi = 0.0;
  const auto inst = gen_random(spec, 5);
  std::vector<int> s(inst.num_supplies());
  std::iota(s.begin(), s.end(), 0);
  EXPECT_NEAR(opt_online_exact(inst),
              max_supply_weight_matching(inst, inst.first_stage(), s).value, 1e-12);
}

TEST(OptOnline, MatchesCommitmentEnumeration) {
  for (bool weighted : {false, true}) {
    for (uint64_t seed = 0; seed < 15; ++seed) {
      const auto inst = gen_random(tiny_spec(weighted), seed);
      const double online = opt_online_exact(inst);
      EXPECT_NEAR(online, oracle::opt_online(inst), 1e-12);
      EXPECT_LE(online, opt_offline_exact(inst) + 1e-12);
    }
  }
}

TEST(OptOnline, Guards) {
  RandomInstanceSpec big;
  big.supplies = 13;
  EXPECT_THROW(opt_online_exact(gen_random(big, 1)), SizeGuardError);
  big.supplies = 4;
  big.second_stage = 17;
  EXPECT_THROW(opt_online_exact(gen_random(big, 1)), SizeGuardError);
  EXPECT_THROW(opt_online_exact(gen_edge_weighted_tight(0.1)), ConfigError);
  EXPECT_THROW(opt_offline_exact(gen_pricing_example()), ConfigError);
}

TEST(Ratios, PairedAndIndependent) {
  const std::vector<double> den = {2, 2, 2, 2};
  const std::vector<double> num = {1, 1, 1, 1};
  const auto r = ratio_paired(num, den);
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  EXPECT_DOUBLE_EQ(r.stderr_, 0.0);
  EXPECT_DOUBLE_EQ(r.lo95, 0.5);
  // num = den / 2 exactly, so the paired error vanishes even with spread.
  const std::vector<double> d2 = {1, 3, 2, 6};
  const std::vector<double> n2 = {0.5, 1.5, 1, 3};
  EXPECT_NEAR(ratio_paired(n2, d2).stderr_, 0.0, 1e-15);
  const auto ri = ratio_independent({1.0, 0.1}, {2.0, 0.0});
  EXPECT_DOUBLE_EQ(ri.value, 0.5);
  EXPECT_NEAR(ri.stderr_, 0.05, 1e-15);
  EXPECT_NEAR(ri.hi95 - ri.value, 1.959963985 * 0.05, 1e-9);
}

TEST(Fr, UnweightedConstantAndMinimizer) {
  const double lambda = 1 / (M_E - 1);
  const auto r = fr_solve(lambda, false);
  EXPECT_NEAR(r.value, 1 - 1 / M_E + 1 / (M_E * M_E), 1e-6);
  EXPECT_NEAR(r.argmin.s, (lambda - (1 - lambda) / M_E) / (2 * lambda), 1e-4);
  EXPECT_NEAR(r.argmin.k, (lambda + (1 - lambda) / M_E) / (2 * lambda), 1e-4);
}

TEST(Fr, LambdaOneGivesThreeQuarters) {
  const auto r = fr_solve(1.0, false);
  EXPECT_NEAR(r.value, 0.75, 1e-6);
  EXPECT_NEAR(r.argmin.s, 0.5, 1e-3);
  EXPECT_NEAR(r.argmin.k, 0.5, 1e-3);
  // Closed form 1 - sk/(s+k) along the diagonal.
  EXPECT_NEAR(fr_value({0.5, 0.5, 1, 1, 1.0}), 0.75, 1e-15);
}

TEST(Fr, UnweightedBestLambdaNearCanonical) {
  double best = -1, arg = 0;
  for (int k = 40; k <= 80; ++k) {
    const double v = fr_solve(k / 100.0, false, 400).value;
    if (v > best) {
      best = v;
      arg = k / 100.0;
    }
  }
  EXPECT_NEAR(arg, 1 / (M_E - 1), 0.02);
}

TEST(Fr, WeightedConstant) {
  const auto r = fr_solve(0.7, true);
  EXPECT_NEAR(r.value, 0.7613, 5e-4);
  EXPECT_TRUE(fr_feasible(r.argmin, 1e-9));
  // The minimum is no larger than a dense scan of the s + k = 1 face.
  double scan = 1e9;
  for (int a = 1; a < 400; ++a) {
    for (int b = 0; b <= 400; ++b) {
      const double s = a / 400.0, wb = std::pow(1000.0, b / 400.0);
      scan = std::min(scan, fr_value({s, 1 - s, wb, 1.0, 0.7}));
    }
  }
  EXPECT_LE(r.value, scan + 1e-9);
}

TEST(Fr, InfeasiblePointsAreInfinite) {
  EXPECT_TRUE(std::isinf(fr_value({0.6, 0.6, 1, 1, 0.5})));
  EXPECT_TRUE(std::isinf(fr_value({0.2, 0.2, 0.5, 1, 0.5})));
}

TEST(Robustness, BoundArithmetic) {
  double worst = 1;
  for (int k = 0; k <= 1000; ++k) {
    const double g = k / 1000.0;
    worst = std::min(worst, g + (1 - g) * (1 - g));
  }
  EXPECT_NEAR(worst, 0.75, 1e-12);
  const double g0 = (M_E - 2) / (M_E - 1);
  const double beta = 1 - 1 / M_E;
  EXPECT_NEAR(g0 + beta * (1 - g0) * (1 - g0), 1 - 1 / M_E, 1e-12);
  EXPECT_GT(0.5 + beta * 0.25, 1 - 1 / M_E);
}

TEST(Robustness, IntegralBalanceHasUnitRefinedBound) {
  // Perfect first stage on a path: y is integral.
  std::vector<DemandVertex> d = {{0, Stage::kFirst, 1.0, {}, {}}, {1, Stage::kSecond, 0.5, {}, {}}};
  const TwoStageInstance inst(d, {{0, 1.0}, {1, 1.0}}, {{0, 0, {}}, {1, 1, {}}});
  const auto rep = robustness_check(inst, SecondStagePolicy::kExact, 2000, 1);
  EXPECT_NEAR(rep.refined_bound, 1.0, 1e-12);
  EXPECT_TRUE(rep.refined_pass);
  EXPECT_TRUE(rep.gamma_pass);
}

TEST(Robustness, RandomInstancesPass) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    for (auto ss : {SecondStagePolicy::kExact, SecondStagePolicy::kGreedyMaximal}) {
      const auto rep = robustness_check(gen_random(tiny_spec(false), seed), ss, 3000, seed);
      EXPECT_TRUE(rep.unweighted);
      EXPECT_GE(rep.gamma_hat, 0.0);
      EXPECT_LE(rep.gamma_hat, 1.0);
      EXPECT_TRUE(rep.pass()) << "seed " << seed;
    }
  }
}

TEST(Compare, SinglePolicyMatchesExpectedValue) {
  const auto inst = gen_random(tiny_spec(true), 2);
  const auto spec = PolicySpec::parse("wbu");
  const auto rep = compare(inst, {spec}, 3000, 9);
  const auto est = expected_value(spec, inst, 3000, 9);
  ASSERT_FALSE(rep.rows.empty());
  EXPECT_EQ(rep.rows[0].mean, est.mean);
  EXPECT_EQ(rep.rows[0].stderr_, est.stderr_);
  ASSERT_TRUE(rep.opt_online.has_value());
  EXPECT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[1].benchmark, "opt_online");
}

TEST(Compare, ReproducibleAndBoundedRatios) {
  const auto inst = gen_random(tiny_spec(true), 7);
  std::vector<PolicySpec> specs;
  for (const char* n : {"wbu", "gr", "sm", "hg", "hg-pick"}) specs.push_back(PolicySpec::parse(n));
  const auto a = compare(inst, specs, 2000, 4, 1);
  const auto b = compare(inst, specs, 2000, 4, 2);
  EXPECT_EQ(to_csv(a), to_csv(b));
  for (const auto& row : a.rows) {
    if (row.benchmark == "opt_offline") {
      EXPECT_LE(row.ratio.value, 1.0 + 3 * row.ratio.stderr_ + 1e-12);
    }
  }
}

TEST(Compare, CsvLayout) {
  const auto rep = compare(gen_worst_case(1), {PolicySpec::parse("wbu")}, 100, 3);
  const std::string csv = to_csv(rep);
  EXPECT_EQ(csv.rfind("instance_digest,policy,trials,mean,stderr,benchmark,bench_mean,"
                      "bench_stderr,ratio,ratio_lo95,ratio_hi95,seed\n",
                      0),
            0u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  const auto doc = to_json(rep);
  EXPECT_EQ(doc["rows"].size(), 2u);
  EXPECT_EQ(doc["config"]["trials"], 100);
}

TEST(Report, NineSignificantDigits) {
  EXPECT_EQ(fmt9(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(fmt9(0.75), "0.75");
  EXPECT_EQ(round9(2.0 / 3.0), 0.666666667);
}

}  // namespace
}  // namespace tsm

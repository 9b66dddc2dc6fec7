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
#include <set>

#include "json.hpp"
#include "tsm/errors.hpp"
#include "tsm/generators.hpp"
#include "tsm/instance.hpp"
#include "tsm/instance_io.hpp"
#include "tsm/valuation.hpp"

namespace tsm {
namespace {

TEST(WorstCase, ShapeForOne) {
  const auto inst = gen_worst_case(1);
  EXPECT_EQ(inst.first_stage().size(), 1u);
  EXPECT_EQ(inst.second_stage().size(), 2u);
  EXPECT_EQ(inst.num_supplies(), 2);
  EXPECT_EQ(inst.num_edges(), 4);
  for (int i : inst.second_stage()) {
    EXPECT_EQ(inst.demand_edges(i).size(), 1u);
    EXPECT_DOUBLE_EQ(inst.demand(i).availability, 0.5);
  }
}

TEST(WorstCase, EdgeCountForTwo) {
  const auto inst = gen_worst_case(2);
  EXPECT_EQ(inst.num_edges(), 12);
  std::set<int> targets;
  for (int i : inst.second_stage()) targets.insert(inst.edges()[inst.demand_edges(i)[0]].supply);
  EXPECT_EQ(targets.size(), 4u);
}

TEST(RandomGen, CompleteAndEmpty) {
  RandomInstanceSpec spec;
  spec.first_stage = 3;
  spec.second_stage = 2;
  spec.supplies = 4;
  spec.edge_prob = 1.0;
  EXPECT_EQ(gen_random(spec, 1).num_edges(), 20);
  spec.edge_prob = 0.0;
  EXPECT_EQ(gen_random(spec, 1).num_edges(), 0);
}

TEST(RandomGen, Deterministic) {
  RandomInstanceSpec spec;
  spec.weight_lo = 0.5;
  spec.weight_hi = 2.0;
  EXPECT_EQ(dump_instance(gen_random(spec, 42)), dump_instance(gen_random(spec, 42)));
  EXPECT_NE(dump_instance(gen_random(spec, 42)), dump_instance(gen_random(spec, 43)));
}

TEST(GeoGen, FullRadiusIsComplete) {
  GeoSpec spec;
  spec.riders_first = 3;
  spec.riders_second = 4;
  spec.drivers = 5;
  spec.radius = spec.region_side * std::sqrt(2.0) + 1.0;
  const auto inst = gen_geo(spec, 3);
  EXPECT_EQ(inst.num_edges(), 35);
  for (const auto& s : inst.supplies()) EXPECT_EQ(s.weight, 1.0);
}

TEST(GeoGen, IdleQuantileWeightsNearUniform) {
  GeoSpec spec;
  spec.riders_first = 1;
  spec.riders_second = 1;
  spec.drivers = 1000;
  spec.weight_mode = GeoWeightMode::kIdleQuantile;
  const auto inst = gen_geo(spec, 9);
  double mean = 0.0;
  for (const auto& s : inst.supplies()) {
    EXPECT_GE(s.weight, 1.0);
    EXPECT_LE(s.weight, 2.0);
    mean += s.weight;
  }
  mean /= 1000.0;
  EXPECT_NEAR(mean, 1.5, 0.02);
}

TEST(GeoGen, ScenarioMode) {
  GeoSpec spec;
  spec.scenario_days = 4;
  const auto inst = gen_geo(spec, 5);
  ASSERT_EQ(inst.realization_mode(), RealizationMode::kScenarioList);
  EXPECT_EQ(inst.scenarios().size(), 4u);
  double total = 0.0;
  for (const auto& sc : inst.scenarios()) total += sc.probability;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Realization, ExtremesOfPi) {
  RandomInstanceSpec spec;
  spec.pi_lo = spec.pi_hi = 1.0;
  const auto all = gen_random(spec, 2);
  spec.pi_lo = spec.pi_hi = 0.0;
  const auto none = gen_random(spec, 2);
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    EXPECT_EQ(sample_realization(all, rng).available, all.second_stage());
    EXPECT_TRUE(sample_realization(none, rng).available.empty());
  }
}

TEST(Realization, MarginalFrequencies) {
  RandomInstanceSpec spec;
  spec.second_stage = 4;
  spec.pi_lo = 0.1;
  spec.pi_hi = 0.9;
  const auto inst = gen_random(spec, 11);
  const int n = 20000;
  std::vector<int> hits(inst.num_demands(), 0);
  double size = 0.0;
  Rng rng(5);
  for (int t = 0; t < n; ++t) {
    const auto r = sample_realization(inst, rng);
    size += static_cast<double>(r.available.size());
    for (int i : r.available) ++hits[i];
  }
  for (int i : inst.second_stage()) {
    const double pi = inst.demand(i).availability;
    EXPECT_NEAR(hits[i] / double(n), pi, 3.0 * std::sqrt(pi * (1 - pi) / n) + 1e-12);
  }
  (void)size;
}

TEST(Realization, HalfOfFourAveragesTwo) {
  const auto inst = gen_worst_case(2);
  Rng rng(1);
  double total = 0.0;
  for (int t = 0; t < 10000; ++t) total += sample_realization(inst, rng).available.size();
  EXPECT_NEAR(total / 10000.0, 2.0, 0.05);
}

TEST(Realization, ScenarioFrequencies) {
  std::vector<DemandVertex> d = {{1, Stage::kSecond, 1.0, {}, {}}, {2, Stage::kSecond, 1.0, {}, {}}};
  std::vector<SupplyVertex> s = {{0, 1.0}};
  std::vector<ScenarioSpec> sc = {{0.25, {1}}, {0.75, {1, 2}}};
  TwoStageInstance inst(d, s, {{1, 0, {}}, {2, 0, {}}}, RealizationMode::kScenarioList, sc);
  Rng rng(3);
  int both = 0;
  const int n = 20000;
  for (int t = 0; t < n; ++t) both += sample_realization(inst, rng).available.size() == 2;
  EXPECT_NEAR(both / double(n), 0.75, 3.0 * std::sqrt(0.75 * 0.25 / n));
}

TEST(Validation, RejectsBadInputs) {
  const std::vector<SupplyVertex> s = {{0, 1.0}};
  EXPECT_THROW(TwoStageInstance({{1, Stage::kSecond, 1.5, {}, {}}}, s, {}), ValidationError);
  EXPECT_THROW(TwoStageInstance({{1, Stage::kFirst, 0.5, {}, {}}}, s, {}), ValidationError);
  EXPECT_THROW(TwoStageInstance({{1, Stage::kFirst, 1.0, {}, {}}}, s, {{1, 9, {}}}),
               ValidationError);
  EXPECT_THROW(TwoStageInstance({{1, Stage::kFirst, 1.0, {}, {}}}, s, {{1, 0, {}}, {1, 0, {}}}),
               ValidationError);
  EXPECT_THROW(TwoStageInstance({{1, Stage::kFirst, 1.0, {}, {}}}, {{0, -1.0}}, {}),
               ValidationError);
  EXPECT_THROW(TwoStageInstance({{1, Stage::kSecond, 1.0, {}, {}}}, s, {},
                                RealizationMode::kScenarioList, {{0.5, {1}}}),
               ValidationError);
  EXPECT_THROW(TwoStageInstance({{1, Stage::kFirst, 1.0, {}, {}}}, s, {},
                                RealizationMode::kScenarioList, {{1.0, {1}}}),
               ValidationError);
}

TEST(Io, RoundTrip) {
  for (const auto& inst : {gen_worst_case(3), gen_pricing_example(), gen_edge_weighted_tight(0.1),
                           gen_pricing_tight(0.2)}) {
    const std::string text = dump_instance(inst);
    EXPECT_EQ(dump_instance(instance_from_json(nlohmann::json::parse(text))), text);
    EXPECT_EQ(instance_digest(instance_from_json(nlohmann::json::parse(text))),
              instance_digest(inst));
  }
  GeoSpec g;
  g.scenario_days = 3;
  const auto geo = gen_geo(g, 1);
  EXPECT_EQ(dump_instance(instance_from_json(nlohmann::json::parse(dump_instance(geo)))),
            dump_instance(geo));
}

TEST(Io, ParseErrorsNameTheField) {
  auto doc = nlohmann::json::parse(dump_instance(gen_worst_case(1)));
  auto bad_pi = doc;
  bad_pi["demands"][1]["pi"] = 1.5;
  try {
    instance_from_json(bad_pi);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("pi"), std::string::npos);
  }
  auto dangling = doc;
  dangling["edges"].push_back({0, 77});
  EXPECT_THROW(instance_from_json(dangling), ValidationError);
  auto missing = doc;
  missing["supplies"][0].erase("weight");
  try {
    instance_from_json(missing);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("supplies[0]"), std::string::npos);
  }
  EXPECT_THROW(load_instance("/nonexistent/instance.json"), ValidationError);
}

TEST(Valuation, UniformBasics) {
  const auto v = Valuation::Uniform(0.0, 2.0);
  EXPECT_DOUBLE_EQ(v.survival(0.5), 0.75);
  EXPECT_DOUBLE_EQ(v.threshold(0.25), 1.5);
  EXPECT_DOUBLE_EQ(v.cond_mean_above(1.0), 1.5);
  EXPECT_DOUBLE_EQ(v.mean(), 1.0);
}

TEST(Valuation, ThresholdInvertsSurvival) {
  for (const auto& v : {Valuation::Uniform(1.0, 3.0), Valuation::Exponential(2.0)}) {
    for (double q : {0.05, 0.3, 0.7, 0.99}) EXPECT_NEAR(v.survival(v.threshold(q)), q, 1e-12);
  }
}

TEST(Valuation, IntegralThresholdMatchesQuadrature) {
  // integral_threshold(y) = int_0^y T(q) dq.
  for (const auto& v : {Valuation::Uniform(0.0, 1.0), Valuation::Exponential(1.5),
                        Valuation::TwoPoint(4.0, 0.25)}) {
    for (double y : {0.1, 0.5, 0.9}) {
      const int n = 200000;
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += v.threshold((k + 0.5) * y / n) * y / n;
      EXPECT_NEAR(v.integral_threshold(y), acc, 2e-3);
    }
  }
}

TEST(Valuation, SampleMean) {
  Rng rng(4);
  const auto v = Valuation::Exponential(0.5);
  double s = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) s += v.sample(rng);
  EXPECT_NEAR(s / n, 2.0, 3.0 * 2.0 / std::sqrt(double(n)));
}

}  // namespace
}  // namespace tsm

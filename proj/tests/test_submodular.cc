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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "tsm/errors.hpp"
#include "tsm/generators.hpp"
#include "tsm/matching.hpp"
#include "tsm/submodular.hpp"

namespace tsm {
namespace {

std::vector<int> subset(unsigned mask, int n) {
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if (mask >> j & 1u) out.push_back(j);
  }
  return out;
}

// Definition-level f^w: expected best supply-weight matching from the
// available second stage into T, by full enumeration.
double fw_brute(const TwoStageInstance& inst, const std::vector<int>& T) {
  std::vector<char> ok(inst.num_supplies(), 0);
  for (int j : T) ok[j] = 1;
  double total = 0.0;
  oracle::for_each_realization(inst, [&](double p, const std::vector<int>& avail) {
    total += p * oracle::best_matching(inst, avail, ok, oracle::value_fn(inst));
  });
  return total;
}

// T is a dual base iff S \ T can be saturated by first-stage demand and
// |S \ T| equals the first-stage matching number.
bool dual_base_brute(const TwoStageInstance& inst, const std::vector<int>& T) {
  std::vector<char> rest(inst.num_supplies(), 1);
  for (int j : T) rest[j] = 0;
  const int n_rest = inst.num_supplies() - static_cast<int>(T.size());
  const std::vector<char> all(inst.num_supplies(), 1);
  auto unit = [](int) { return 1.0; };
  const double rank = oracle::best_matching(inst, inst.first_stage(), all, unit);
  return oracle::best_matching(inst, inst.first_stage(), rest, unit) == n_rest && n_rest == rank;
}

TwoStageInstance star_with_private_demand() {
  // K_{1,2} over supplies a=0, b=1; one second-stage demand (pi=1) on b.
  std::vector<DemandVertex> d = {{0, Stage::kFirst, 1.0, {}, {}}, {1, Stage::kSecond, 1.0, {}, {}}};
  std::vector<SupplyVertex> s = {{0, 1.0}, {1, 1.0}};
  return TwoStageInstance(d, s, {{0, 0, {}}, {0, 1, {}}, {1, 1, {}}});
}

TEST(ExactFw, ClosedForms) {
  std::vector<DemandVertex> d = {{1, Stage::kSecond, 0.3, {}, {}}};
  std::vector<SupplyVertex> s = {{0, 2.0}};
  const TwoStageInstance inst(d, s, {{1, 0, {}}});
  EXPECT_EQ(exact_fw(inst, std::vector<int>{}), 0.0);
  EXPECT_NEAR(exact_fw(inst, std::vector<int>{0}), 0.6, 1e-15);
  const RankOracle oracle(inst, 1000, 3);
  EXPECT_EQ(oracle.estimate(std::vector<int>{}).mean, 0.0);
  const auto est = oracle.estimate(std::vector<int>{0});
  EXPECT_NEAR(est.mean, 0.6, 3.0 * std::sqrt(0.21 / 1000) * 2.0);
}

TEST(ExactFw, DeterministicAvailabilityIsMatching) {
  RandomInstanceSpec spec;
  spec.first_stage = 2;
  spec.second_stage = 4;
  spec.supplies = 5;
  spec.pi_lo = spec.pi_hi = 1.0;
  spec.weight_lo = 0.0;
  spec.weight_hi = 3.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = gen_random(spec, seed);
    std::vector<int> T = {0, 2, 3};
    EXPECT_NEAR(exact_fw(inst, T), max_supply_weight_matching(inst, inst.second_stage(), T).value,
                1e-12);
  }
}

TEST(ExactFw, MatchesBruteForceAndSampler) {
  RandomInstanceSpec spec;
  spec.first_stage = 2;
  spec.second_stage = 3;
  spec.supplies = 4;
  spec.pi_lo = 0.2;
  spec.pi_hi = 0.8;
  spec.weight_lo = 0.5;
  spec.weight_hi = 2.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = gen_random(spec, seed);
    const RankOracle oracle(inst, 4000, seed);
    for (unsigned mask = 0; mask < 16; ++mask) {
      const auto T = subset(mask, 4);
      const double exact = exact_fw(inst, T);
      EXPECT_NEAR(exact, fw_brute(inst, T), 1e-12);
      const auto est = oracle.estimate(T);
      EXPECT_NEAR(est.mean, exact, 3.0 * est.stderr_ + 1e-12);
    }
  }
}

TEST(ExactFw, SizeGuard) {
  RandomInstanceSpec spec;
  spec.second_stage = 25;
  EXPECT_THROW(exact_fw(gen_random(spec, 1), std::vector<int>{0}), SizeGuardError);
}

TEST(ExactFw, MonotoneSubmodular) {
  RandomInstanceSpec spec;
  spec.first_stage = 1;
  spec.second_stage = 5;
  spec.supplies = 6;
  spec.edge_prob = 0.5;
  spec.pi_lo = 0.1;
  spec.pi_hi = 0.9;
  spec.weight_lo = 0.2;
  spec.weight_hi = 3.0;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = gen_random(spec, seed);
    std::vector<double> f(64);
    for (unsigned m = 0; m < 64; ++m) f[m] = exact_fw(inst, subset(m, 6));
    for (unsigned a = 0; a < 64; ++a) {
      for (unsigned b = 0; b < 64; ++b) {
        if ((a & b) != a) continue;
        EXPECT_LE(f[a], f[b] + 1e-12);
        for (int j = 0; j < 6; ++j) {
          if (b >> j & 1u) continue;
          const unsigned bit = 1u << j;
          EXPECT_GE(f[a | bit] - f[a], f[b | bit] - f[b] - 1e-12);
        }
      }
    }
  }
}

TEST(DualBases, SmallCases) {
  std::vector<DemandVertex> d = {{0, Stage::kFirst, 1.0, {}, {}}, {1, Stage::kFirst, 1.0, {}, {}}};
  std::vector<SupplyVertex> s = {{0, 1.0}, {1, 1.0}};
  const TwoStageInstance knn(d, s, {{0, 0, {}}, {0, 1, {}}, {1, 0, {}}, {1, 1, {}}});
  const auto b1 = enumerate_dual_bases(knn);
  ASSERT_EQ(b1.size(), 1u);
  EXPECT_TRUE(b1[0].supplies.empty());

  const auto star = star_with_private_demand();
  const auto b2 = enumerate_dual_bases(star);
  ASSERT_EQ(b2.size(), 2u);
  EXPECT_TRUE(is_dual_base(star, std::vector<int>{0}));
  EXPECT_TRUE(is_dual_base(star, std::vector<int>{1}));
  EXPECT_FALSE(is_dual_base(star, std::vector<int>{0, 1}));
  EXPECT_TRUE(is_dual_independent(star, std::vector<int>{1}));
  EXPECT_FALSE(is_dual_independent(star, std::vector<int>{0, 1}));
}

TEST(DualBases, CrossEnumeration) {
  RandomInstanceSpec spec;
  spec.first_stage = 4;
  spec.second_stage = 1;
  spec.supplies = 6;
  spec.edge_prob = 0.4;
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = gen_random(spec, seed);
    const auto bases = enumerate_dual_bases(inst);
    int brute = 0;
    for (unsigned m = 0; m < 64; ++m) {
      const auto T = subset(m, 6);
      const bool want = dual_base_brute(inst, T);
      brute += want;
      EXPECT_EQ(is_dual_base(inst, T), want);
    }
    EXPECT_EQ(static_cast<int>(bases.size()), brute);
    for (const auto& b : bases) {
      EXPECT_TRUE(is_dual_independent(inst, b.supplies));
      EXPECT_EQ(static_cast<int>(b.supplies.size()), inst.num_supplies() - first_stage_rank(inst));
      const Matching m = first_stage_from_base(inst, b);
      EXPECT_TRUE(is_valid_matching(inst, m));
      std::vector<char> covered(inst.num_supplies(), 0);
      for (const auto& pr : m.pairs) {
        EXPECT_TRUE(inst.is_first_stage(pr.demand));
        covered[pr.supply] = 1;
      }
      for (int j = 0; j < inst.num_supplies(); ++j) {
        const bool in_t = std::find(b.supplies.begin(), b.supplies.end(), j) != b.supplies.end();
        EXPECT_EQ(covered[j] != 0, !in_t);
      }
    }
  }
}

TEST(FirstStageFromBase, Examples) {
  std::vector<DemandVertex> d = {{0, Stage::kFirst, 1.0, {}, {}}};
  const TwoStageInstance k11(d, {{0, 1.0}}, {{0, 0, {}}});
  const auto m = first_stage_from_base(k11, DualBase{{}});
  ASSERT_EQ(m.size(), 1u);
  const auto star = star_with_private_demand();
  const auto m2 = first_stage_from_base(star, DualBase{{1}});
  ASSERT_EQ(m2.size(), 1u);
  EXPECT_EQ(m2.pairs[0].supply, 0);
  EXPECT_THROW(first_stage_from_base(star, DualBase{{}}), ValidationError);
}

TEST(LocalSearch, PicksTheUsefulSupply) {
  const auto inst = star_with_private_demand();
  const RankOracle oracle(inst, 200, 1);
  const auto base = local_search_base(inst, 1e-3, oracle);
  EXPECT_EQ(base.supplies, std::vector<int>{1});
  EXPECT_NEAR(exact_fw(inst, base.supplies) + complement_weight(inst, base.supplies), 2.0, 1e-12);
}

TEST(LocalSearch, ModularObjectiveReachesOptimum) {
  // Each supply has a private second-stage demand, so f^w is additive.
  const int ns = 6;
  std::vector<DemandVertex> d;
  std::vector<SupplyVertex> s;
  std::vector<EdgeSpec> e;
  Rng rng(9);
  for (int j = 0; j < ns; ++j) {
    s.push_back({j, rng.uniform(0.5, 2.0)});
    d.push_back({100 + j, Stage::kSecond, rng.uniform(0.1, 0.9), {}, {}});
    e.push_back({100 + j, j, {}});
  }
  for (int i = 0; i < 3; ++i) {
    d.push_back({i, Stage::kFirst, 1.0, {}, {}});
    for (int j = 0; j < ns; ++j) {
      if (rng.bernoulli(0.6)) e.push_back({i, j, {}});
    }
  }
  const TwoStageInstance inst(d, s, e);
  double best = 0.0;
  for (const auto& b : enumerate_dual_bases(inst)) {
    best = std::max(best, exact_fw(inst, b.supplies) + complement_weight(inst, b.supplies));
  }
  const RankOracle oracle(inst, 20000, 4);
  const auto found = local_search_base(inst, 1e-4, oracle);
  EXPECT_NEAR(exact_fw(inst, found.supplies) + complement_weight(inst, found.supplies), best,
              0.02 * best);
}

TEST(LocalSearch, GuaranteeOnRandomTinyInstances) {
  RandomInstanceSpec spec;
  spec.first_stage = 3;
  spec.second_stage = 4;
  spec.supplies = 5;
  spec.edge_prob = 0.5;
  spec.pi_lo = 0.2;
  spec.pi_hi = 0.8;
  spec.weight_lo = 0.5;
  spec.weight_hi = 2.0;
  const double eps = 1e-3;
  for (uint64_t seed = 0; seed < 15; ++seed) {
    const auto inst = gen_random(spec, seed);
    double best_f = 0.0, best_rest = 0.0, best_total = -1.0;
    for (const auto& b : enumerate_dual_bases(inst)) {
      const double f = exact_fw(inst, b.supplies), r = complement_weight(inst, b.supplies);
      if (f + r > best_total) {
        best_total = f + r;
        best_f = f;
        best_rest = r;
      }
    }
    const RankOracle oracle(inst, 200, seed);
    const auto base = local_search_base(inst, eps, oracle);
    EXPECT_TRUE(is_dual_base(inst, base.supplies));
    const double got = exact_fw(inst, base.supplies) + complement_weight(inst, base.supplies);
    EXPECT_GE(got + 1e-9, (1 - 1 / M_E - eps) * best_f + best_rest);
  }
}

TEST(LocalSearch, Deterministic) {
  const auto inst = gen_worst_case(3);
  const RankOracle a(inst, 100, 5), b(inst, 100, 5);
  EXPECT_EQ(local_search_base(inst, 1e-3, a).supplies, local_search_base(inst, 1e-3, b).supplies);
}

}  // namespace
}  // namespace tsm

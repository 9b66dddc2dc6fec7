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

#ifndef TSM_BALANCE_HPP_
#define TSM_BALANCE_HPP_

#include <vector>

#include "tsm/instance.hpp"
#include "tsm/matching.hpp"

namespace tsm {

enum class GKind { kQuadratic, kExponential };

// g(x) = x^2/2 or e^x.
struct ConvexG {
  GKind kind = GKind::kQuadratic;

  double value(double x) const;
  double derivative(double x) const;
};

struct BalanceSolution {
  FractionalMatching x;            // first-stage edges only
  std::vector<double> y;           // per supply position
  std::vector<double> residual;    // w_j (1 - y_j)
  double objective = 0.0;          // sum over w_j > 0 of g(w_j (1 - y_j)) / w_j
  double solver_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimizes the balanced-utilization objective over fractional first-stage
// matchings. Never throws on non-convergence: check `converged`.
BalanceSolution solve_balance(const TwoStageInstance& instance, ConvexG g = {},
                              double tol = 1e-12, int max_iter = 20000);

struct Level {
  std::vector<int> demands;   // positions
  std::vector<int> supplies;  // positions
  double c = 0.0;
};

struct Decomposition {
  std::vector<int> level0_demands;
  std::vector<int> level0_supplies;
  std::vector<Level> levels;  // ascending c
  std::vector<int> zero_weight_supplies;  // c = 0 by convention
};

// Level structure of a solved balance program. Support edges are those with
// x above group_tol / 10; S0 holds supplies with residual <= group_tol.
Decomposition decompose(const TwoStageInstance& instance, const BalanceSolution& solution,
                        double group_tol = 1e-5);

struct PropertyCheck {
  bool pass = true;
  double worst = 0.0;  // largest violation magnitude (0 when none)
};

struct DecompositionReport {
  PropertyCheck uniformity;
  PropertyCheck monotonicity;
  PropertyCheck saturation;
  bool all_pass() const { return uniformity.pass && monotonicity.pass && saturation.pass; }
};

DecompositionReport verify_decomposition(const TwoStageInstance& instance,
                                         const BalanceSolution& solution,
                                         const Decomposition& dec, double tol = 1e-6);

// max over levels of |c - (|S| - |D|) / sum 1/w_j|.
double closed_form_discrepancy(const TwoStageInstance& instance, const Decomposition& dec);

// Solves with both g choices to gap tol/10 and returns max_j |y_quad - y_exp|.
double check_g_invariance(const TwoStageInstance& instance, double tol = 1e-12);

// min_j (1 - y_j + y_j^2).
double refined_bound(const BalanceSolution& solution);

}  // namespace tsm

#endif  // TSM_BALANCE_HPP_

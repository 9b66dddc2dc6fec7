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

#ifndef TSM_FACTOR_REVEALING_HPP_
#define TSM_FACTOR_REVEALING_HPP_

namespace tsm {

// Point of the final factor-revealing program.
struct FrPoint {
  double s = 0.0;
  double k = 0.0;
  double w_bar = 1.0;    // >= 1
  double w_tilde = 1.0;  // <= 1
  double lambda = 0.0;
};

// c = (1 - s) / (s + k / w_bar + (1 - s - k) / w_tilde).
double fr_c(const FrPoint& p);

// Objective value; +inf outside the feasible region (including
// s + k * w_bar = 0, where the ratio is undefined).
double fr_value(const FrPoint& p);

bool fr_feasible(const FrPoint& p, double tol = 1e-12);

struct FrResult {
  double value = 0.0;
  FrPoint argmin;
};

// Minimizes the program for a fixed lambda: a dense grid (grid_resolution
// points per axis in two dimensions, fewer in four) followed by shrinking
// local grids until the step drops below refine_tol. Unweighted mode fixes
// w_bar = w_tilde = 1. Weighted mode searches s + k = 1 and s + k < 1
// separately and caps w_bar at 1e3.
FrResult fr_solve(double lambda, bool weighted, int grid_resolution = 2000,
                  double refine_tol = 1e-10);

}  // namespace tsm

#endif  // TSM_FACTOR_REVEALING_HPP_

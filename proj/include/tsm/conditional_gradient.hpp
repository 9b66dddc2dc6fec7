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

#ifndef TSM_CONDITIONAL_GRADIENT_HPP_
#define TSM_CONDITIONAL_GRADIENT_HPP_

#include <functional>
#include <vector>

#include "tsm/matching.hpp"

namespace tsm {

// maximize sum_l f_l(load_l) + sum_r h_r(load_r) over the bipartite matching
// polytope on `arcs`, each f/h concave. Loads are the arc sums at a vertex.
struct SeparableProblem {
  int num_left = 0;
  int num_right = 0;
  std::vector<Arc> arcs;  // weight field unused
  // Either side may be left empty (contributes zero).
  std::function<double(int, double)> left_value, left_slope;
  std::function<double(int, double)> right_value, right_slope;
};

struct CgOptions {
  double tol = 1e-10;  // stop once the Frank-Wolfe gap is below this
  int max_iter = 20000;
};

struct CgResult {
  std::vector<double> x;  // per arc
  double objective = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  // Active set: each atom is a sorted list of arc indices.
  std::vector<std::vector<int>> atoms;
  std::vector<double> weights;
};

// Away-step conditional gradient started at the empty matching. The linear
// oracle is max_weight_arcs over arcs with positive gradient.
CgResult maximize_separable_concave(const SeparableProblem& problem, const CgOptions& options);

}  // namespace tsm

#endif  // TSM_CONDITIONAL_GRADIENT_HPP_

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

#include "tsm/conditional_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tsm {
namespace {

class Engine {
 public:
  Engine(const SeparableProblem& p, const CgOptions& o) : p_(p), opt_(o) {
    const std::size_t m = p.arcs.size();
    x_.assign(m, 0.0);
    grad_.assign(m, 0.0);
    lload_.assign(p.num_left, 0.0);
    rload_.assign(p.num_right, 0.0);
    dl_.assign(p.num_left, 0.0);
    dr_.assign(p.num_right, 0.0);
    add_atom({}, 1.0);
  }

  CgResult run() {
    CgResult res;
    int iter = 0;
    double gap = 0.0;
    for (;; ++iter) {
      if (iter % 64 == 0) rebuild_x();
      compute_loads();
      compute_grad();
      std::vector<Arc> lmo_arcs;
      std::vector<int> lmo_index;
      for (std::size_t e = 0; e < p_.arcs.size(); ++e) {
        if (grad_[e] > 0.0) {
          lmo_arcs.push_back({p_.arcs[e].left, p_.arcs[e].right, grad_[e]});
          lmo_index.push_back(static_cast<int>(e));
        }
      }
      std::vector<int> fw;
      for (int k : max_weight_arcs(p_.num_left, p_.num_right, lmo_arcs)) fw.push_back(lmo_index[k]);
      std::sort(fw.begin(), fw.end());
      const double gx = dot_x();
      const double gs = dot_atom(fw);
      gap = gs - gx;
      if (gap <= opt_.tol || iter >= opt_.max_iter) break;

      int away = -1;
      double gv = 0.0;
      for (std::size_t a = 0; a < atoms_.size(); ++a) {
        if (weights_[a] <= 0.0) continue;
        const double v = dot_atom(atoms_[a]);
        if (away < 0 || v < gv) {
          away = static_cast<int>(a);
          gv = v;
        }
      }
      const double away_gap = gx - gv;
      std::fill(dl_.begin(), dl_.end(), 0.0);
      std::fill(dr_.begin(), dr_.end(), 0.0);
      if (gap >= away_gap || atoms_.size() == 1) {
        // toward fw: d = s - x
        for (std::size_t e = 0; e < p_.arcs.size(); ++e) {
          dl_[p_.arcs[e].left] -= x_[e];
          dr_[p_.arcs[e].right] -= x_[e];
        }
        for (int e : fw) {
          dl_[p_.arcs[e].left] += 1.0;
          dr_[p_.arcs[e].right] += 1.0;
        }
        const double step = line_search(1.0);
        if (step <= 0.0) break;
        for (double& w : weights_) w *= (1.0 - step);
        add_atom(fw, step);
      } else {
        const double a = weights_[away];
        const double max_step = a / (1.0 - a);
        for (std::size_t e = 0; e < p_.arcs.size(); ++e) {
          dl_[p_.arcs[e].left] += x_[e];
          dr_[p_.arcs[e].right] += x_[e];
        }
        for (int e : atoms_[away]) {
          dl_[p_.arcs[e].left] -= 1.0;
          dr_[p_.arcs[e].right] -= 1.0;
        }
        const double step = line_search(max_step);
        if (step <= 0.0) break;
        for (double& w : weights_) w *= (1.0 + step);
        if (step >= max_step) {
          weights_[away] = 0.0;
        } else {
          weights_[away] -= step;
        }
      }
      prune();
      rebuild_x();
    }
    rebuild_x();
    compute_loads();
    res.x = x_;
    res.objective = objective();
    res.gap = gap;
    res.iterations = iter;
    res.converged = gap <= opt_.tol;
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      if (weights_[a] <= 0.0) continue;
      res.atoms.push_back(atoms_[a]);
      res.weights.push_back(weights_[a]);
    }
    return res;
  }

 private:
  void add_atom(const std::vector<int>& atom, double w) {
    auto [it, inserted] = index_.try_emplace(atom, static_cast<int>(atoms_.size()));
    if (inserted) {
      atoms_.push_back(atom);
      weights_.push_back(w);
    } else {
      weights_[it->second] += w;
    }
  }

  void prune() {
    bool any = false;
    for (double w : weights_) any = any || w <= 1e-15;
    if (!any) return;
    std::vector<std::vector<int>> atoms;
    std::vector<double> weights;
    index_.clear();
    double total = 0.0;
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      if (weights_[a] <= 1e-15) continue;
      index_.emplace(atoms_[a], static_cast<int>(atoms.size()));
      atoms.push_back(std::move(atoms_[a]));
      weights.push_back(weights_[a]);
      total += weights_[a];
    }
    for (double& w : weights) w /= total;
    atoms_ = std::move(atoms);
    weights_ = std::move(weights);
  }

  void rebuild_x() {
    std::fill(x_.begin(), x_.end(), 0.0);
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      for (int e : atoms_[a]) x_[e] += weights_[a];
    }
  }


  void compute_loads() {
    std::fill(lload_.begin(), lload_.end(), 0.0);
    std::fill(rload_.begin(), rload_.end(), 0.0);
    for (std::size_t e = 0; e < p_.arcs.size(); ++e) {
      lload_[p_.arcs[e].left] += x_[e];
      rload_[p_.arcs[e].right] += x_[e];
    }
  }

  void compute_grad() {
    std::vector<double> gl(p_.num_left, 0.0), gr(p_.num_right, 0.0);
    if (p_.left_slope) {
      for (int l = 0; l < p_.num_left; ++l) gl[l] = p_.left_slope(l, lload_[l]);
    }
    if (p_.right_slope) {
      for (int r = 0; r < p_.num_right; ++r) gr[r] = p_.right_slope(r, rload_[r]);
    }
    for (std::size_t e = 0; e < p_.arcs.size(); ++e) {
      grad_[e] = gl[p_.arcs[e].left] + gr[p_.arcs[e].right];
    }
  }

  double dot_x() const {
    double s = 0.0;
    for (std::size_t e = 0; e < x_.size(); ++e) s += grad_[e] * x_[e];
    return s;
  }

  double dot_atom(const std::vector<int>& atom) const {
    double s = 0.0;
    for (int e : atom) s += grad_[e];
    return s;
  }

  // Directional derivative along the load direction (dl_, dr_) at step t.
  double slope_at(double t) const {
    double s = 0.0;
    if (p_.left_slope) {
      for (int l = 0; l < p_.num_left; ++l) {
        if (dl_[l] != 0.0) s += p_.left_slope(l, lload_[l] + t * dl_[l]) * dl_[l];
      }
    }
    if (p_.right_slope) {
      for (int r = 0; r < p_.num_right; ++r) {
        if (dr_[r] != 0.0) s += p_.right_slope(r, rload_[r] + t * dr_[r]) * dr_[r];
      }
    }
    return s;
  }

  // Concave along the segment, so the slope is non-increasing: bisect for
  // its zero.
  double line_search(double max_step) const {
    if (slope_at(max_step) >= 0.0) return max_step;
    if (slope_at(0.0) <= 0.0) return 0.0;
    double lo = 0.0, hi = max_step;
    for (int k = 0; k < 100 && hi - lo > 1e-17; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (slope_at(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  double objective() const {
    double s = 0.0;
    if (p_.left_value) {
      for (int l = 0; l < p_.num_left; ++l) s += p_.left_value(l, lload_[l]);
    }
    if (p_.right_value) {
      for (int r = 0; r < p_.num_right; ++r) s += p_.right_value(r, rload_[r]);
    }
    return s;
  }

  const SeparableProblem& p_;
  CgOptions opt_;
  std::vector<double> x_, grad_, lload_, rload_, dl_, dr_;
  std::vector<std::vector<int>> atoms_;
  std::vector<double> weights_;
  std::map<std::vector<int>, int> index_;
};

}  // namespace

CgResult maximize_separable_concave(const SeparableProblem& problem, const CgOptions& options) {
  if (problem.arcs.empty()) {
    CgResult res;
    res.converged = true;
    double s = 0.0;
    if (problem.left_value) {
      for (int l = 0; l < problem.num_left; ++l) s += problem.left_value(l, 0.0);
    }
    if (problem.right_value) {
      for (int r = 0; r < problem.num_right; ++r) s += problem.right_value(r, 0.0);
    }
    res.objective = s;
    res.atoms.push_back({});
    res.weights.push_back(1.0);
    return res;
  }
  return Engine(problem, options).run();
}

}  // namespace tsm

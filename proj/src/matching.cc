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

#include "tsm/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <string>

#include "tsm/errors.hpp"

namespace tsm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Renumbers the endpoints of the usable arcs densely so the kernels only
// pay for vertices that actually have arcs.
struct Compressed {
  std::vector<int> arc_index;  // original arc of each kept arc
  std::vector<int> left, right;
  int nl = 0, nr = 0;
};

Compressed compress(int num_left, int num_right, std::span<const Arc> arcs) {
  Compressed c;
  std::vector<int> lmap(num_left, -1), rmap(num_right, -1);
  for (int k = 0; k < static_cast<int>(arcs.size()); ++k) {
    const Arc& a = arcs[k];
    if (!(a.weight >= 0.0)) continue;
    if (a.left < 0 || a.left >= num_left || a.right < 0 || a.right >= num_right) {
      throw std::out_of_range("matching kernel: arc endpoint out of range");
    }
    if (lmap[a.left] < 0) lmap[a.left] = c.nl++;
    if (rmap[a.right] < 0) rmap[a.right] = c.nr++;
    c.arc_index.push_back(k);
    c.left.push_back(lmap[a.left]);
    c.right.push_back(rmap[a.right]);
  }
  return c;
}

}  // namespace

std::vector<int> max_weight_arcs(int num_left, int num_right, std::span<const Arc> arcs) {
  const Compressed c = compress(num_left, num_right, arcs);
  if (c.arc_index.empty()) return {};
  const bool transpose = c.nl > c.nr;
  const int n = transpose ? c.nr : c.nl;
  const int m = transpose ? c.nl : c.nr;
  const int cols = m + n;  // n zero-cost "stay unmatched" columns
  // 1-indexed e-maxx layout, minimizing cost = -weight.
  std::vector<double> cost(static_cast<std::size_t>(n + 1) * (cols + 1), kInf);
  std::vector<int> best(static_cast<std::size_t>(n) * m, -1);
  auto at = [&](int i, int j) -> double& { return cost[static_cast<std::size_t>(i) * (cols + 1) + j]; };
  for (int i = 1; i <= n; ++i) {
    for (int j = m + 1; j <= cols; ++j) at(i, j) = 0.0;
  }
  for (int k = 0; k < static_cast<int>(c.arc_index.size()); ++k) {
    const int r = transpose ? c.right[k] : c.left[k];
    const int q = transpose ? c.left[k] : c.right[k];
    const double w = arcs[c.arc_index[k]].weight;
    int& b = best[static_cast<std::size_t>(r) * m + q];
    if (b < 0 || w > arcs[c.arc_index[b]].weight) {
      b = k;
      at(r + 1, q + 1) = -w;
    }
  }

  std::vector<double> u(n + 1, 0.0), v(cols + 1, 0.0), minv(cols + 1);
  std::vector<int> p(cols + 1, 0), way(cols + 1, 0);
  std::vector<char> used(cols + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = at(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> out;
  for (int j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    const int b = best[static_cast<std::size_t>(p[j] - 1) * m + (j - 1)];
    if (b >= 0) out.push_back(c.arc_index[b]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> max_cardinality_arcs(int num_left, int num_right, std::span<const Arc> arcs) {
  const Compressed c = compress(num_left, num_right, arcs);
  const int nl = c.nl, nr = c.nr;
  std::vector<std::vector<std::pair<int, int>>> adj(nl);  // (right, kept arc)
  for (int k = 0; k < static_cast<int>(c.arc_index.size()); ++k) {
    adj[c.left[k]].push_back({c.right[k], k});
  }
  std::vector<int> match_l(nl, -1), match_r(nr, -1), arc_l(nl, -1), dist(nl);
  constexpr int kUnreached = std::numeric_limits<int>::max();

  auto bfs = [&]() {
    std::queue<int> q;
    bool found = false;
    for (int l = 0; l < nl; ++l) {
      if (match_l[l] < 0) {
        dist[l] = 0;
        q.push(l);
      } else {
        dist[l] = kUnreached;
      }
    }
    while (!q.empty()) {
      const int l = q.front();
      q.pop();
      for (auto [r, k] : adj[l]) {
        const int l2 = match_r[r];
        if (l2 < 0) {
          found = true;
        } else if (dist[l2] == kUnreached) {
          dist[l2] = dist[l] + 1;
          q.push(l2);
        }
      }
    }
    return found;
  };
  std::vector<std::size_t> it(nl);
  std::function<bool(int)> dfs = [&](int l) -> bool {
    for (; it[l] < adj[l].size(); ++it[l]) {
      auto [r, k] = adj[l][it[l]];
      const int l2 = match_r[r];
      if (l2 < 0 || (dist[l2] == dist[l] + 1 && dfs(l2))) {
        match_l[l] = r;
        match_r[r] = l;
        arc_l[l] = k;
        return true;
      }
    }
    dist[l] = kUnreached;
    return false;
  };
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int l = 0; l < nl; ++l) {
      if (match_l[l] < 0) dfs(l);
    }
  }
  std::vector<int> out;
  for (int l = 0; l < nl; ++l) {
    if (arc_l[l] >= 0) out.push_back(c.arc_index[arc_l[l]]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> max_right_weight_arcs(int num_left, int num_right, std::span<const Arc> arcs,
                                       std::span<const double> right_weights) {
  std::vector<std::vector<std::pair<int, int>>> adj(num_right);  // (left, arc)
  for (int k = 0; k < static_cast<int>(arcs.size()); ++k) {
    adj[arcs[k].right].push_back({arcs[k].left, k});
  }
  std::vector<int> order;
  for (int r = 0; r < num_right; ++r) {
    if (right_weights[r] >= 0.0 && !adj[r].empty()) order.push_back(r);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return right_weights[a] > right_weights[b]; });
  std::vector<int> match_left(num_left, -1);  // right vertex holding each left
  std::vector<int> arc_of_left(num_left, -1);
  std::vector<int> seen(num_left, -1);
  // Iterative Kuhn search from right vertex `root`.
  auto augment = [&](int root) {
    struct Frame {
      int right;
      std::size_t next;
      int via_left;  // left vertex we came through (-1 at root)
      int via_arc;
    };
    std::vector<Frame> stack{{root, 0, -1, -1}};
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == adj[f.right].size()) {
        stack.pop_back();
        continue;
      }
      const auto [l, k] = adj[f.right][f.next++];
      if (seen[l] == root) continue;
      seen[l] = root;
      if (match_left[l] < 0) {
        // Flip the path: each frame's right vertex takes the left it reached.
        int left = l, arc = k;
        for (std::size_t d = stack.size(); d-- > 0;) {
          const int r = stack[d].right;
          match_left[left] = r;
          arc_of_left[left] = arc;
          left = stack[d].via_left;
          arc = stack[d].via_arc;
        }
        return true;
      }
      stack.push_back({match_left[l], 0, l, k});
    }
    return false;
  };
  for (int r : order) augment(r);
  std::vector<int> out;
  for (int l = 0; l < num_left; ++l) {
    if (arc_of_left[l] >= 0) out.push_back(arc_of_left[l]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> greedy_arcs(int num_left, int num_right, std::span<const Arc> arcs) {
  std::vector<int> order;
  for (int k = 0; k < static_cast<int>(arcs.size()); ++k) {
    if (arcs[k].weight >= 0.0) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return arcs[a].weight > arcs[b].weight; });
  std::vector<char> lused(num_left, 0), rused(num_right, 0);
  std::vector<int> out;
  for (int k : order) {
    const Arc& a = arcs[k];
    if (lused[a.left] || rused[a.right]) continue;
    lused[a.left] = rused[a.right] = 1;
    out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_valid_matching(const TwoStageInstance& instance, const Matching& m) {
  std::vector<char> dused(instance.num_demands(), 0), sused(instance.num_supplies(), 0);
  for (const auto& [i, j] : m.pairs) {
    if (i < 0 || i >= instance.num_demands() || j < 0 || j >= instance.num_supplies()) {
      return false;
    }
    if (dused[i] || sused[j] || !instance.find_edge(i, j)) return false;
    dused[i] = sused[j] = 1;
  }
  return true;
}

double supply_weight(const TwoStageInstance& instance, const Matching& m) {
  double total = 0.0;
  for (const auto& pr : m.pairs) total += instance.supply(pr.supply).weight;
  return total;
}

WeightedMatching match_subgraph(const TwoStageInstance& instance, std::span<const int> demands,
                                std::span<const int> supplies,
                                const std::function<double(int)>& weight, MatchAlgo algo) {
  std::vector<int> local_d(instance.num_demands(), -1), local_s(instance.num_supplies(), -1);
  for (int k = 0; k < static_cast<int>(demands.size()); ++k) local_d[demands[k]] = k;
  for (int k = 0; k < static_cast<int>(supplies.size()); ++k) local_s[supplies[k]] = k;
  std::vector<Arc> arcs;
  std::vector<int> arc_edge;
  for (int i : demands) {
    for (int e : instance.demand_edges(i)) {
      const int j = instance.edges()[e].supply;
      if (local_s[j] < 0) continue;
      arcs.push_back({local_d[i], local_s[j], weight(e)});
      arc_edge.push_back(e);
    }
  }
  const int nl = static_cast<int>(demands.size());
  const int nr = static_cast<int>(supplies.size());
  const std::vector<int> chosen = algo == MatchAlgo::kExact ? max_weight_arcs(nl, nr, arcs)
                                                            : greedy_arcs(nl, nr, arcs);
  WeightedMatching out;
  for (int k : chosen) {
    const Edge& e = instance.edges()[arc_edge[k]];
    out.matching.pairs.push_back({e.demand, e.supply});
    out.value += arcs[k].weight;
  }
  std::sort(out.matching.pairs.begin(), out.matching.pairs.end());
  return out;
}

Matching max_card_matching(const TwoStageInstance& instance, std::span<const int> demands,
                           std::span<const int> supplies) {
  std::vector<int> local_d(instance.num_demands(), -1), local_s(instance.num_supplies(), -1);
  for (int k = 0; k < static_cast<int>(demands.size()); ++k) local_d[demands[k]] = k;
  for (int k = 0; k < static_cast<int>(supplies.size()); ++k) local_s[supplies[k]] = k;
  std::vector<Arc> arcs;
  std::vector<int> arc_edge;
  for (int i : demands) {
    for (int e : instance.demand_edges(i)) {
      const int j = instance.edges()[e].supply;
      if (local_s[j] < 0) continue;
      arcs.push_back({local_d[i], local_s[j], 1.0});
      arc_edge.push_back(e);
    }
  }
  Matching out;
  for (int k : max_cardinality_arcs(static_cast<int>(demands.size()),
                                    static_cast<int>(supplies.size()), arcs)) {
    const Edge& e = instance.edges()[arc_edge[k]];
    out.pairs.push_back({e.demand, e.supply});
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

WeightedMatching max_supply_weight_matching(const TwoStageInstance& instance,
                                            std::span<const int> demands,
                                            std::span<const int> supplies) {
  std::vector<int> local_s(instance.num_supplies(), -1);
  for (int k = 0; k < static_cast<int>(supplies.size()); ++k) local_s[supplies[k]] = k;
  std::vector<double> rw(supplies.size());
  for (std::size_t k = 0; k < supplies.size(); ++k) rw[k] = instance.supply(supplies[k]).weight;
  std::vector<Arc> arcs;
  std::vector<int> arc_edge;
  for (int d = 0; d < static_cast<int>(demands.size()); ++d) {
    for (int e : instance.demand_edges(demands[d])) {
      const int j = local_s[instance.edges()[e].supply];
      if (j < 0) continue;
      arcs.push_back({d, j, rw[j]});
      arc_edge.push_back(e);
    }
  }
  WeightedMatching out;
  for (int k : max_right_weight_arcs(static_cast<int>(demands.size()),
                                     static_cast<int>(supplies.size()), arcs, rw)) {
    const Edge& e = instance.edges()[arc_edge[k]];
    out.matching.pairs.push_back({e.demand, e.supply});
    out.value += arcs[k].weight;
  }
  std::sort(out.matching.pairs.begin(), out.matching.pairs.end());
  return out;
}

WeightedMatching greedy_supply_weight_matching(const TwoStageInstance& instance,
                                               std::span<const int> demands,
                                               std::span<const int> supplies) {
  return match_subgraph(
      instance, demands, supplies,
      [&](int e) { return instance.supply(instance.edges()[e].supply).weight; },
      MatchAlgo::kGreedy);
}

WeightedMatching max_vertex_weight_matching(const TwoStageInstance& instance,
                                            std::span<const int> demands,
                                            std::span<const int> supplies,
                                            std::span<const double> demand_weights,
                                            std::span<const double> supply_weights) {
  if (static_cast<int>(demand_weights.size()) != instance.num_demands() ||
      static_cast<int>(supply_weights.size()) != instance.num_supplies()) {
    throw ConfigError("max_vertex_weight_matching: weight vectors must cover every vertex");
  }
  return match_subgraph(instance, demands, supplies, [&](int e) {
    const Edge& ed = instance.edges()[e];
    return demand_weights[ed.demand] + supply_weights[ed.supply];
  });
}

WeightedMatching max_edge_weight_matching(const TwoStageInstance& instance,
                                          std::span<const int> demands,
                                          std::span<const int> supplies) {
  if (!instance.edge_weighted()) {
    throw ConfigError("max_edge_weight_matching: instance has no edge weights");
  }
  return match_subgraph(instance, demands, supplies,
                        [&](int e) { return instance.edges()[e].weight; });
}

double FractionalMatching::value(int demand, int supply) const {
  double v = 0.0;
  for (const auto& e : entries) {
    if (e.demand == demand && e.supply == supply) v += e.value;
  }
  return v;
}

double FractionalMatching::demand_load(int demand) const {
  double v = 0.0;
  for (const auto& e : entries) {
    if (e.demand == demand) v += e.value;
  }
  return v;
}

double FractionalMatching::supply_load(int supply) const {
  double v = 0.0;
  for (const auto& e : entries) {
    if (e.supply == supply) v += e.value;
  }
  return v;
}

const Matching& MatchingDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    acc += probabilities[k];
    if (u < acc) return atoms[k];
  }
  return atoms.back();
}

double MatchingDistribution::marginal(int demand, int supply) const {
  double total = 0.0;
  const MatchedPair key{demand, supply};
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (std::binary_search(atoms[k].pairs.begin(), atoms[k].pairs.end(), key)) {
      total += probabilities[k];
    }
  }
  return total;
}

namespace {

// Caratheodory: while more than dim+1 atoms, find an affine dependence among
// dim+2 of them and shift mass along it until one atom vanishes.
void reduce_atoms(std::vector<std::vector<int>>& atoms, std::vector<double>& probs, int dim) {
  while (static_cast<int>(atoms.size()) > dim + 1) {
    const int cols = dim + 2;
    const int rows = dim + 1;
    // Column k: indicator vector of atom k plus a trailing 1.
    std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
    for (int k = 0; k < cols; ++k) {
      for (int e : atoms[k]) a[e][k] = 1.0;
      a[dim][k] = 1.0;
    }
    // Reduced row echelon form; pick the first free column.
    std::vector<int> pivot_col;
    int r = 0;
    std::vector<char> is_pivot(cols, 0);
    for (int col = 0; col < cols && r < rows; ++col) {
      int best = -1;
      for (int i = r; i < rows; ++i) {
        if (std::abs(a[i][col]) > 1e-12 && (best < 0 || std::abs(a[i][col]) > std::abs(a[best][col]))) {
          best = i;
        }
      }
      if (best < 0) continue;
      std::swap(a[r], a[best]);
      const double pv = a[r][col];
      for (double& x : a[r]) x /= pv;
      for (int i = 0; i < rows; ++i) {
        if (i == r || a[i][col] == 0.0) continue;
        const double f = a[i][col];
        for (int j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
      }
      pivot_col.push_back(col);
      is_pivot[col] = 1;
      ++r;
    }
    int free_col = 0;
    while (is_pivot[free_col]) ++free_col;
    std::vector<double> z(cols, 0.0);
    z[free_col] = 1.0;
    for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) z[pivot_col[i]] = -a[i][free_col];
    // Sum of z is zero, so some entry is positive.
    double alpha = kInf;
    int drop = -1;
    for (int k = 0; k < cols; ++k) {
      if (z[k] > 1e-12 && probs[k] / z[k] < alpha) {
        alpha = probs[k] / z[k];
        drop = k;
      }
    }
    for (int k = 0; k < cols; ++k) probs[k] -= alpha * z[k];
    probs[drop] = 0.0;
    std::vector<std::vector<int>> kept_atoms;
    std::vector<double> kept_probs;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (probs[k] > 0.0) {
        kept_atoms.push_back(std::move(atoms[k]));
        kept_probs.push_back(probs[k]);
      }
    }
    atoms = std::move(kept_atoms);
    probs = std::move(kept_probs);
  }
}

}  // namespace

MatchingDistribution bvn_decompose(const FractionalMatching& x, double tol) {
  // Aggregate duplicate entries.
  std::map<std::pair<int, int>, double> agg;
  for (const auto& e : x.entries) {
    if (e.demand < 0 || e.supply < 0) throw ValidationError("bvn_decompose: negative vertex index");
    if (!(e.value >= -tol && e.value <= 1.0 + tol)) {
      throw ValidationError("bvn_decompose: entry (" + std::to_string(e.demand) + "," +
                            std::to_string(e.supply) + ") outside [0,1]");
    }
    agg[{e.demand, e.supply}] += e.value;
  }
  std::vector<int> dl, sr;
  std::vector<double> r;
  std::map<int, int> lmap, rmap;
  std::vector<int> lid, rid;
  for (const auto& [key, val] : agg) {
    if (val < tol) continue;
    auto [li, lnew] = lmap.try_emplace(key.first, static_cast<int>(lmap.size()));
    if (lnew) lid.push_back(key.first);
    auto [ri, rnew] = rmap.try_emplace(key.second, static_cast<int>(rmap.size()));
    if (rnew) rid.push_back(key.second);
    dl.push_back(li->second);
    sr.push_back(ri->second);
    r.push_back(std::min(val, 1.0));
  }
  const int nl = static_cast<int>(lid.size());
  const int nr = static_cast<int>(rid.size());
  const int ne = static_cast<int>(r.size());
  {
    std::vector<double> degl(nl, 0.0), degr(nr, 0.0);
    for (int e = 0; e < ne; ++e) {
      degl[dl[e]] += r[e];
      degr[sr[e]] += r[e];
    }
    for (int l = 0; l < nl; ++l) {
      if (degl[l] > 1.0 + tol) {
        throw ValidationError("bvn_decompose: demand " + std::to_string(lid[l]) +
                              " has load above 1");
      }
    }
    for (int q = 0; q < nr; ++q) {
      if (degr[q] > 1.0 + tol) {
        throw ValidationError("bvn_decompose: supply " + std::to_string(rid[q]) +
                              " has load above 1");
      }
    }
  }

  std::vector<std::vector<int>> atoms;  // edge lists (local entry indices)
  std::vector<double> probs;
  double t = 1.0;
  std::vector<double> degl(nl), degr(nr);
  std::vector<char> covl(nl), covr(nr);
  while (t > tol) {
    std::fill(degl.begin(), degl.end(), 0.0);
    std::fill(degr.begin(), degr.end(), 0.0);
    std::vector<int> live;
    for (int e = 0; e < ne; ++e) {
      if (r[e] <= 0.0) continue;
      live.push_back(e);
      degl[dl[e]] += r[e];
      degr[sr[e]] += r[e];
    }
    // Loads can overshoot t by rounding; the scale is never below a load.
    for (double d : degl) t = std::max(t, d);
    for (double d : degr) t = std::max(t, d);
    std::vector<Arc> arcs;
    const double big = static_cast<double>(live.size()) + 1.0;
    for (int e : live) {
      const int tight = (degl[dl[e]] >= t - tol) + (degr[sr[e]] >= t - tol);
      arcs.push_back({dl[e], sr[e], big * tight + 1.0});
    }
    const std::vector<int> chosen = max_weight_arcs(nl, nr, arcs);
    std::fill(covl.begin(), covl.end(), 0);
    std::fill(covr.begin(), covr.end(), 0);
    double lambda = t;
    std::vector<int> atom;
    for (int k : chosen) {
      const int e = live[k];
      atom.push_back(e);
      covl[dl[e]] = covr[sr[e]] = 1;
      lambda = std::min(lambda, r[e]);
    }
    for (int l = 0; l < nl; ++l) {
      if (covl[l]) continue;
      if (degl[l] >= t - tol && degl[l] > 0.0) {
        throw ValidationError("bvn_decompose: could not cover a tight demand");
      }
      lambda = std::min(lambda, t - degl[l]);
    }
    for (int q = 0; q < nr; ++q) {
      if (covr[q]) continue;
      if (degr[q] >= t - tol && degr[q] > 0.0) {
        throw ValidationError("bvn_decompose: could not cover a tight supply");
      }
      lambda = std::min(lambda, t - degr[q]);
    }
    for (int e : atom) {
      r[e] -= lambda;
      if (r[e] < tol) r[e] = 0.0;
    }
    t -= lambda;
    std::sort(atom.begin(), atom.end());
    atoms.push_back(std::move(atom));
    probs.push_back(lambda);
  }
  if (t > 0.0) {
    atoms.emplace_back();
    probs.push_back(t);
  }

  // Merge repeated atoms.
  std::map<std::vector<int>, double> merged;
  for (std::size_t k = 0; k < atoms.size(); ++k) merged[atoms[k]] += probs[k];
  atoms.clear();
  probs.clear();
  for (auto& [a, p] : merged) {
    if (p <= 0.0) continue;
    atoms.push_back(a);
    probs.push_back(p);
  }
  reduce_atoms(atoms, probs, ne);
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);

  MatchingDistribution out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    Matching m;
    for (int e : atoms[k]) m.pairs.push_back({lid[dl[e]], rid[sr[e]]});
    std::sort(m.pairs.begin(), m.pairs.end());
    out.atoms.push_back(std::move(m));
    out.probabilities.push_back(probs[k] / total);
  }
  return out;
}

Matching sample_matching(const FractionalMatching& x, Rng& rng) {
  return bvn_decompose(x).sample(rng);
}

}  // namespace tsm

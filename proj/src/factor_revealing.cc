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

#include "tsm/factor_revealing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace tsm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWBarCap = 1e3;

// Pattern search on a box: probe a (2r+1)^d grid of step h around the
// incumbent, move to the best probe, halve h when the incumbent wins.
template <std::size_t D>
std::array<double, D> refine(const std::function<double(const std::array<double, D>&)>& f,
                             std::array<double, D> x, const std::array<double, D>& lo,
                             const std::array<double, D>& hi, double h, double tol) {
  constexpr int r = D <= 2 ? 3 : 1;
  constexpr int side = 2 * r + 1;
  int total = 1;
  for (std::size_t d = 0; d < D; ++d) total *= side;
  double best = f(x);
  for (int guard = 0; guard < 100000 && h >= tol; ++guard) {
    std::array<double, D> arg = x;
    double val = best;
    for (int code = 0; code < total; ++code) {
      std::array<double, D> y = x;
      int c = code;
      for (std::size_t d = 0; d < D; ++d) {
        y[d] = std::clamp(x[d] + (c % side - r) * h, lo[d], hi[d]);
        c /= side;
      }
      const double v = f(y);
      if (v < val) {
        val = v;
        arg = y;
      }
    }
    if (val < best) {
      best = val;
      x = arg;
    } else {
      h *= 0.5;
    }
  }
  return x;
}

}  // namespace

double fr_c(const FrPoint& p) {
  return (1.0 - p.s) / (p.s + p.k / p.w_bar + (1.0 - p.s - p.k) / p.w_tilde);
}

bool fr_feasible(const FrPoint& p, double tol) {
  if (p.s < -tol || p.k < -tol || p.s + p.k > 1.0 + tol) return false;
  if (p.w_bar < 1.0 - tol || p.w_tilde > 1.0 + tol || p.w_tilde <= 0.0) return false;
  if (p.s + p.k * p.w_bar <= 1e-12) return false;
  const double rest = std::max(0.0, 1.0 - p.s - p.k);
  return rest * (p.w_tilde - fr_c(p)) >= -tol;
}

double fr_value(const FrPoint& p) {
  if (!fr_feasible(p)) return kInf;
  const double rest = std::max(0.0, 1.0 - p.s - p.k);
  const double c = fr_c(p);
  const double num = p.lambda * ((1.0 - p.k) * c - rest * p.w_tilde) +
                     (1.0 - p.lambda) * p.k * p.w_bar / M_E;
  return 1.0 - num / (p.s + p.k * p.w_bar);
}

FrResult fr_solve(double lambda, bool weighted, int grid_resolution, double refine_tol) {
  const int n = std::clamp(grid_resolution, 10, 1 << 20);
  FrResult best;
  best.value = kInf;
  auto consider = [&](const FrPoint& p) {
    const double v = fr_value(p);
    if (v < best.value) {
      best.value = v;
      best.argmin = p;
    }
  };

  if (!weighted) {
    // (s, k) over the triangle.
    double bv = kInf;
    std::array<double, 2> bx{0.5, 0.5};
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n - a; ++b) {
        const double v = fr_value({a / double(n), b / double(n), 1.0, 1.0, lambda});
        if (v < bv) {
          bv = v;
          bx = {a / double(n), b / double(n)};
        }
      }
    }
    auto f = [&](const std::array<double, 2>& x) {
      return fr_value({x[0], std::min(x[1], 1.0 - x[0]), 1.0, 1.0, lambda});
    };
    const auto x = refine<2>(f, bx, {0.0, 0.0}, {1.0, 1.0}, 1.0 / n, refine_tol);
    consider({x[0], std::min(x[1], 1.0 - x[0]), 1.0, 1.0, lambda});
    return best;
  }

  // s + k = 1: variables s and u, w_bar = cap^u.
  {
    auto point = [&](const std::array<double, 2>& x) {
      return FrPoint{x[0], 1.0 - x[0], std::pow(kWBarCap, x[1]), 1.0, lambda};
    };
    auto f = [&](const std::array<double, 2>& x) { return fr_value(point(x)); };
    double bv = kInf;
    std::array<double, 2> bx{0.5, 0.0};
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        const std::array<double, 2> x{a / double(n), b / double(n)};
        const double v = f(x);
        if (v < bv) {
          bv = v;
          bx = x;
        }
      }
    }
    consider(point(refine<2>(f, bx, {0.0, 0.0}, {1.0, 1.0}, 1.0 / n, refine_tol)));
  }

  // s + k < 1: variables s, r = k / (1 - s), u (w_bar = cap^u), w_tilde.
  {
    auto point = [&](const std::array<double, 4>& x) {
      return FrPoint{x[0], x[1] * (1.0 - x[0]), std::pow(kWBarCap, x[2]), x[3], lambda};
    };
    auto f = [&](const std::array<double, 4>& x) {
      if (x[1] >= 1.0 || x[3] <= 0.0) return kInf;
      return fr_value(point(x));
    };
    const int m = std::clamp(n / 40, 8, 64);
    double bv = kInf;
    std::array<double, 4> bx{0.5, 0.5, 0.0, 1.0};
    for (int a = 0; a <= m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int c = 0; c <= m; ++c) {
          for (int d = 1; d <= m; ++d) {
            const std::array<double, 4> x{a / double(m), b / double(m), c / double(m),
                                          d / double(m)};
            const double v = f(x);
            if (v < bv) {
              bv = v;
              bx = x;
            }
          }
        }
      }
    }
    const double upper_r = std::nextafter(1.0, 0.0);
    consider(point(refine<4>(f, bx, {0.0, 0.0, 0.0, 1e-9}, {1.0, upper_r, 1.0, 1.0}, 1.0 / m,
                             refine_tol)));
  }
  return best;
}

}  // namespace tsm

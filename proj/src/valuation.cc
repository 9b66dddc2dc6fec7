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

#include "tsm/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tsm/errors.hpp"

namespace tsm {
namespace {

void check_level(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("quantile level must lie in [0,1], got " +
                      std::to_string(q));
  }
}

}  // namespace

Valuation Valuation::Uniform(double a, double b) {
  if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) {
    throw ValidationError("uniform valuation needs 0 <= a < b");
  }
  return Valuation(Kind::kUniform, a, b);
}

Valuation Valuation::Exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ValidationError("exponential valuation needs rate > 0");
  }
  return Valuation(Kind::kExponential, rate, 0.0);
}

Valuation Valuation::Point(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ValidationError("point valuation needs v >= 0");
  }
  Valuation out(Kind::kPoint, v, 0.0);
  out.atoms_ = {{v, 1.0}};
  return out;
}

Valuation Valuation::TwoPoint(double hi, double p) {
  if (!(hi >= 0.0) || !std::isfinite(hi) || !(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("two_point valuation needs hi >= 0 and p in [0,1]");
  }
  Valuation out(Kind::kTwoPoint, hi, p);
  if (hi == 0.0 || p == 1.0) {
    out.atoms_ = {{hi, 1.0}};
  } else if (p == 0.0) {
    out.atoms_ = {{0.0, 1.0}};
  } else {
    out.atoms_ = {{hi, p}, {0.0, 1.0 - p}};
  }
  return out;
}

Valuation Valuation::Empirical(std::vector<double> samples) {
  if (samples.empty()) {
    throw ValidationError("empirical valuation needs at least one sample");
  }
  for (double s : samples) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw ValidationError("empirical samples must be finite and >= 0");
    }
  }
  Valuation out(Kind::kEmpirical, 0.0, 0.0);
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double mass = 1.0 / static_cast<double>(sorted.size());
  for (double s : sorted) {
    if (!out.atoms_.empty() && out.atoms_.back().first == s) {
      out.atoms_.back().second += mass;
    } else {
      out.atoms_.emplace_back(s, mass);
    }
  }
  out.samples_ = std::move(samples);
  return out;
}

double Valuation::survival(double t) const {
  switch (kind_) {
    case Kind::kUniform:
      if (t <= a_) return 1.0;
      if (t >= b_) return 0.0;
      return (b_ - t) / (b_ - a_);
    case Kind::kExponential:
      return t <= 0.0 ? 1.0 : std::exp(-a_ * t);
    default: {
      double s = 0.0;
      for (const auto& [v, p] : atoms_) {
        if (v >= t) s += p;
      }
      return std::min(s, 1.0);
    }
  }
}

double Valuation::cdf(double t) const {
  switch (kind_) {
    case Kind::kUniform:
    case Kind::kExponential:
      return 1.0 - survival(t);
    default: {
      double s = 0.0;
      for (const auto& [v, p] : atoms_) {
        if (v <= t) s += p;
      }
      return std::min(s, 1.0);
    }
  }
}

double Valuation::threshold(double q) const {
  check_level(q);
  switch (kind_) {
    case Kind::kUniform:
      return b_ - q * (b_ - a_);
    case Kind::kExponential:
      if (q == 0.0) return std::numeric_limits<double>::infinity();
      return -std::log(q) / a_;
    default: {
      // Left-continuous step: the k-th atom (by decreasing value) serves
      // levels in (cum_{k-1}, cum_k].
      double cum = 0.0;
      for (const auto& [v, p] : atoms_) {
        cum += p;
        if (q <= cum + 1e-15) return v;
      }
      return atoms_.back().first;
    }
  }
}

double Valuation::cond_mean_above(double p) const {
  switch (kind_) {
    case Kind::kUniform: {
      const double lo = std::max(p, a_);
      if (lo >= b_) return std::max(p, b_);
      return 0.5 * (lo + b_);
    }
    case Kind::kExponential:
      return std::max(p, 0.0) + 1.0 / a_;
    default: {
      double mass = 0.0;
      double total = 0.0;
      for (const auto& [v, prob] : atoms_) {
        if (v >= p) {
          mass += prob;
          total += prob * v;
        }
      }
      if (mass <= 0.0) return p;
      return total / mass;
    }
  }
}

double Valuation::integral_threshold(double y) const {
  check_level(y);
  switch (kind_) {
    case Kind::kUniform:
      return b_ * y - 0.5 * (b_ - a_) * y * y;
    case Kind::kExponential:
      if (y == 0.0) return 0.0;
      return (y - y * std::log(y)) / a_;
    default: {
      double cum = 0.0;
      double total = 0.0;
      for (const auto& [v, p] : atoms_) {
        const double take = std::min(p, y - cum);
        if (take <= 0.0) break;
        total += take * v;
        cum += take;
      }
      return total;
    }
  }
}

double Valuation::mean() const {
  switch (kind_) {
    case Kind::kUniform:
      return 0.5 * (a_ + b_);
    case Kind::kExponential:
      return 1.0 / a_;
    default: {
      double total = 0.0;
      for (const auto& [v, p] : atoms_) total += v * p;
      return total;
    }
  }
}

double Valuation::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::kUniform:
      return rng.uniform(a_, b_);
    case Kind::kExponential:
      return rng.exponential(a_);
    case Kind::kPoint:
      return a_;
    case Kind::kTwoPoint:
      return rng.bernoulli(b_) ? a_ : 0.0;
    case Kind::kEmpirical:
      return samples_[rng.index(samples_.size())];
  }
  return 0.0;
}

}  // namespace tsm

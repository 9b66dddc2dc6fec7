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

#ifndef TSM_VALUATION_HPP_
#define TSM_VALUATION_HPP_

#include <utility>
#include <vector>

#include "tsm/random.hpp"

namespace tsm {

// Distribution of a demand vertex's private value for service.
//
// Acceptance is `v >= p`, so every function below is phrased in terms of
// the survival function S(t) = P[v >= t]:
//   threshold(q)        = sup{ t : S(t) >= q }   (the price accepted w.p. q)
//   cond_mean_above(p)  = E[v | v >= p]
//   integral_threshold(y) = integral of threshold(q) over q in [0, y]
// For atomless distributions integral_threshold(y) equals
// y * cond_mean_above(threshold(y)).
class Valuation {
 public:
  enum class Kind { kUniform, kExponential, kPoint, kTwoPoint, kEmpirical };

  static Valuation Uniform(double a, double b);
  static Valuation Exponential(double rate);
  static Valuation Point(double v);
  // Value `hi` with probability `p`, zero otherwise.
  static Valuation TwoPoint(double hi, double p);
  static Valuation Empirical(std::vector<double> samples);

  Kind kind() const { return kind_; }

  double survival(double t) const;
  double cdf(double t) const;  // P[v <= t]
  double threshold(double q) const;
  double cond_mean_above(double p) const;
  double integral_threshold(double y) const;
  double mean() const;
  double sample(Rng& rng) const;

  // True for point, two-point and empirical kinds.
  bool finitely_supported() const { return !atoms_.empty(); }
  // (value, probability) pairs sorted by decreasing value; empty for
  // continuous kinds.
  const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }

  // Parameters, for serialization.
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  const std::vector<double>& samples() const { return samples_; }

  friend bool operator==(const Valuation& x, const Valuation& y) {
    return x.kind_ == y.kind_ && x.a_ == y.a_ && x.b_ == y.b_ &&
           x.samples_ == y.samples_;
  }

 private:
  Valuation(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  // uniform: [a, b]; exponential: rate = a; point: v = a;
  // two-point: hi = a, p = b.
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<double> samples_;
  std::vector<std::pair<double, double>> atoms_;
};

// Lower clamp on the quantile level used when a threshold is unbounded
// (exponential valuations as q -> 0).
inline constexpr double kMinQuantileLevel = 1e-6;

}  // namespace tsm

#endif  // TSM_VALUATION_HPP_

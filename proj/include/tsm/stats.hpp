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

#ifndef TSM_STATS_HPP_
#define TSM_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <span>

namespace tsm {

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Sample mean and its standard error (n - 1 variance).
inline Estimate summarize(std::span<const double> xs) {
  Estimate e;
  if (xs.empty()) return e;
  const double n = static_cast<double>(xs.size());
  // Shift by the first sample so constant data gives exactly zero spread.
  const double x0 = xs[0];
  double s = 0.0;
  for (double x : xs) s += x - x0;
  const double shift = s / n;
  e.mean = x0 + shift;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - x0 - shift) * (x - x0 - shift);
    e.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

}  // namespace tsm

#endif  // TSM_STATS_HPP_

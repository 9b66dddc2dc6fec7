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

#ifndef TSM_REPORT_HPP_
#define TSM_REPORT_HPP_

#include <string>

#include "json.hpp"
#include "tsm/balance.hpp"
#include "tsm/bench.hpp"
#include "tsm/factor_revealing.hpp"
#include "tsm/policies.hpp"
#include "tsm/pricing.hpp"

namespace tsm {

// Nine significant digits, '.' decimal separator.
std::string fmt9(double x);
// x rounded to nine significant digits (for JSON emission).
double round9(double x);

// Columns: instance_digest, policy, trials, mean, stderr, benchmark,
// bench_mean, bench_stderr, ratio, ratio_lo95, ratio_hi95, seed.
std::string to_csv(const SimReport& report);
nlohmann::json to_json(const SimReport& report);

nlohmann::json to_json(const TwoStageInstance& instance, const Matching& m);
nlohmann::json to_json(const TwoStageInstance& instance, const BalanceSolution& sol);
nlohmann::json to_json(const TwoStageInstance& instance, const Decomposition& dec);
nlohmann::json to_json(const DecompositionReport& rep);
nlohmann::json to_json(const TwoStageInstance& instance, const EarSolution& ear);
nlohmann::json to_json(const TwoStageInstance& instance, const PolicyRun& run);
nlohmann::json to_json(const FrResult& fr);
nlohmann::json to_json(const RobustnessReport& rep);

}  // namespace tsm

#endif  // TSM_REPORT_HPP_

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

#ifndef TSM_INSTANCE_IO_HPP_
#define TSM_INSTANCE_IO_HPP_

#include <string>

#include "json.hpp"
#include "tsm/instance.hpp"

namespace tsm {

// Instance file schema:
//   {
//     "demands":  [{"id", "stage": "first"|"second", "pi", "valuation"?, "price"?}],
//     "supplies": [{"id", "weight"}],
//     "edges":    [[d, s], ...]  or  [{"d", "s", "w"}, ...],
//     "realization": {"mode": "independent"}
//                  | {"mode": "scenarios", "scenarios": [{"p", "demands": [ids]}]}
//   }
// Valuations: {"kind":"uniform","a","b"}, {"kind":"exponential","rate"},
// {"kind":"point","v"}, {"kind":"two_point","hi","p"},
// {"kind":"empirical","samples":[...]}.
nlohmann::json to_json(const TwoStageInstance& instance);
nlohmann::json to_json(const Valuation& valuation);

// Throws ParseError naming the offending field, or ValidationError when the
// document parses but violates an instance invariant.
TwoStageInstance instance_from_json(const nlohmann::json& doc);
Valuation valuation_from_json(const nlohmann::json& doc, const std::string& path);

std::string dump_instance(const TwoStageInstance& instance);
void save_instance(const TwoStageInstance& instance, const std::string& path);
TwoStageInstance load_instance(const std::string& path);

// 16 hex digits, FNV-1a over the canonical serialization.
std::string instance_digest(const TwoStageInstance& instance);

}  // namespace tsm

#endif  // TSM_INSTANCE_IO_HPP_

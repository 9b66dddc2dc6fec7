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

#include "tsm/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tsm/errors.hpp"

namespace tsm {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
  return v.get<int>();
}

std::string item(const std::string& array, std::size_t k) {
  return array + "[" + std::to_string(k) + "]";
}

}  // namespace

json to_json(const Valuation& valuation) {
  switch (valuation.kind()) {
    case Valuation::Kind::kUniform:
      return {{"kind", "uniform"}, {"a", valuation.param_a()}, {"b", valuation.param_b()}};
    case Valuation::Kind::kExponential:
      return {{"kind", "exponential"}, {"rate", valuation.param_a()}};
    case Valuation::Kind::kPoint:
      return {{"kind", "point"}, {"v", valuation.param_a()}};
    case Valuation::Kind::kTwoPoint:
      return {{"kind", "two_point"}, {"hi", valuation.param_a()}, {"p", valuation.param_b()}};
    case Valuation::Kind::kEmpirical:
      return {{"kind", "empirical"}, {"samples", valuation.samples()}};
  }
  return {};
}

Valuation valuation_from_json(const json& doc, const std::string& path) {
  const json& kind = require(doc, "kind", path);
  if (!kind.is_string()) throw ParseError(path + ".kind: expected a string");
  const std::string k = kind.get<std::string>();
  try {
    if (k == "uniform") {
      return Valuation::Uniform(number(require(doc, "a", path), path + ".a"),
                                number(require(doc, "b", path), path + ".b"));
    }
    if (k == "exponential") {
      return Valuation::Exponential(number(require(doc, "rate", path), path + ".rate"));
    }
    if (k == "point") return Valuation::Point(number(require(doc, "v", path), path + ".v"));
    if (k == "two_point") {
      return Valuation::TwoPoint(number(require(doc, "hi", path), path + ".hi"),
                                 number(require(doc, "p", path), path + ".p"));
    }
    if (k == "empirical") {
      const json& s = require(doc, "samples", path);
      if (!s.is_array()) throw ParseError(path + ".samples: expected an array");
      std::vector<double> samples;
      for (std::size_t n = 0; n < s.size(); ++n) {
        samples.push_back(number(s[n], item(path + ".samples", n)));
      }
      return Valuation::Empirical(std::move(samples));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  throw ParseError(path + ".kind: unknown valuation kind '" + k + "'");
}

json to_json(const TwoStageInstance& instance) {
  json demands = json::array();
  for (const DemandVertex& d : instance.demands()) {
    json v = {{"id", d.id},
              {"stage", d.stage == Stage::kFirst ? "first" : "second"},
              {"pi", d.availability}};
    if (d.valuation) v["valuation"] = to_json(*d.valuation);
    if (d.posted_price) v["price"] = *d.posted_price;
    demands.push_back(std::move(v));
  }
  json supplies = json::array();
  for (const SupplyVertex& s : instance.supplies()) {
    supplies.push_back({{"id", s.id}, {"weight", s.weight}});
  }
  json edges = json::array();
  for (const Edge& e : instance.edges()) {
    const int d = instance.demand(e.demand).id;
    const int s = instance.supply(e.supply).id;
    if (instance.edge_weighted()) {
      edges.push_back({{"d", d}, {"s", s}, {"w", e.weight}});
    } else {
      edges.push_back(json::array({d, s}));
    }
  }
  json realization;
  if (instance.realization_mode() == RealizationMode::kScenarioList) {
    json scenarios = json::array();
    for (const Scenario& sc : instance.scenarios()) {
      json ids = json::array();
      for (int i : sc.demands) ids.push_back(instance.demand(i).id);
      scenarios.push_back({{"p", sc.probability}, {"demands", ids}});
    }
    realization = {{"mode", "scenarios"}, {"scenarios", scenarios}};
  } else {
    realization = {{"mode", "independent"}};
  }
  return {{"demands", demands},
          {"supplies", supplies},
          {"edges", edges},
          {"realization", realization}};
}

TwoStageInstance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("instance: expected a JSON object");
  const json& jd = require(doc, "demands", "instance");
  const json& js = require(doc, "supplies", "instance");
  const json& je = require(doc, "edges", "instance");
  if (!jd.is_array()) throw ParseError("demands: expected an array");
  if (!js.is_array()) throw ParseError("supplies: expected an array");
  if (!je.is_array()) throw ParseError("edges: expected an array");

  std::vector<DemandVertex> demands;
  for (std::size_t k = 0; k < jd.size(); ++k) {
    const std::string path = item("demands", k);
    DemandVertex d;
    d.id = integer(require(jd[k], "id", path), path + ".id");
    const json& stage = require(jd[k], "stage", path);
    if (stage == "first") {
      d.stage = Stage::kFirst;
    } else if (stage == "second") {
      d.stage = Stage::kSecond;
    } else {
      throw ParseError(path + ".stage: expected \"first\" or \"second\"");
    }
    if (jd[k].contains("pi")) {
      d.availability = number(jd[k]["pi"], path + ".pi");
    } else if (d.stage == Stage::kSecond) {
      throw ParseError(path + ".pi: missing field");
    }
    if (jd[k].contains("valuation")) {
      d.valuation = valuation_from_json(jd[k]["valuation"], path + ".valuation");
    }
    if (jd[k].contains("price")) d.posted_price = number(jd[k]["price"], path + ".price");
    demands.push_back(std::move(d));
  }

  std::vector<SupplyVertex> supplies;
  for (std::size_t k = 0; k < js.size(); ++k) {
    const std::string path = item("supplies", k);
    SupplyVertex s;
    s.id = integer(require(js[k], "id", path), path + ".id");
    s.weight = number(require(js[k], "weight", path), path + ".weight");
    supplies.push_back(s);
  }

  std::vector<EdgeSpec> edges;
  for (std::size_t k = 0; k < je.size(); ++k) {
    const std::string path = item("edges", k);
    EdgeSpec e;
    if (je[k].is_array()) {
      if (je[k].size() != 2) throw ParseError(path + ": expected [demand_id, supply_id]");
      e.demand_id = integer(je[k][0], path + "[0]");
      e.supply_id = integer(je[k][1], path + "[1]");
    } else {
      e.demand_id = integer(require(je[k], "d", path), path + ".d");
      e.supply_id = integer(require(je[k], "s", path), path + ".s");
      if (je[k].contains("w")) e.weight = number(je[k]["w"], path + ".w");
    }
    edges.push_back(e);
  }

  RealizationMode mode = RealizationMode::kIndependent;
  std::vector<ScenarioSpec> scenarios;
  if (doc.contains("realization")) {
    const json& jr = doc["realization"];
    const json& jm = require(jr, "mode", "realization");
    if (jm == "scenarios") {
      mode = RealizationMode::kScenarioList;
      const json& list = require(jr, "scenarios", "realization");
      if (!list.is_array()) throw ParseError("realization.scenarios: expected an array");
      for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string path = item("realization.scenarios", k);
        ScenarioSpec sc;
        sc.probability = number(require(list[k], "p", path), path + ".p");
        const json& ids = require(list[k], "demands", path);
        if (!ids.is_array()) throw ParseError(path + ".demands: expected an array");
        for (std::size_t n = 0; n < ids.size(); ++n) {
          sc.demand_ids.push_back(integer(ids[n], item(path + ".demands", n)));
        }
        scenarios.push_back(std::move(sc));
      }
    } else if (jm != "independent") {
      throw ParseError("realization.mode: expected \"independent\" or \"scenarios\"");
    }
  }
  return TwoStageInstance(std::move(demands), std::move(supplies), std::move(edges),
                          mode, std::move(scenarios));
}

std::string dump_instance(const TwoStageInstance& instance) {
  return to_json(instance).dump(2) + "\n";
}

void save_instance(const TwoStageInstance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << dump_instance(instance);
}

TwoStageInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return instance_from_json(doc);
}

std::string instance_digest(const TwoStageInstance& instance) {
  const std::string text = to_json(instance).dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tsm

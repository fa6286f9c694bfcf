// Copyright 2026 The Restore Authors
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

#include "restore/feeder_io.h"

#include <set>
#include <sstream>

#include "json.hpp"
#include "restore/error.h"

namespace restore {
namespace {

using Json = nlohmann::ordered_json;

Json ParseJson(std::string_view document) {
  try {
    return Json::parse(document.begin(), document.end());
  } catch (const Json::parse_error& e) {
    // Translate the byte offset into line:column.
    size_t line = 1, col = 1;
    const size_t limit = std::min<size_t>(e.byte > 0 ? e.byte - 1 : 0, document.size());
    for (size_t i = 0; i < limit; ++i) {
      if (document[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
}

void RejectUnknown(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw InputError(where + ": unknown field \"" + it.key() + "\"");
  }
}

const Json& Require(const Json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

double Number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw InputError("field \"" + field + "\" must be a number");
  return v.get<double>();
}

bool Bool(const Json& v, const std::string& field) {
  if (!v.is_boolean()) throw InputError("field \"" + field + "\" must be a boolean");
  return v.get<bool>();
}

std::string Id(const Json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError("field \"" + field + "\" must be a string or integer id");
}

double OptNumber(const Json& obj, const std::string& key, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : Number(*it, key);
}

bool OptBool(const Json& obj, const std::string& key, bool fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : Bool(*it, key);
}

void Check(bool ok, const std::string& subject, const std::string& field, const std::string& rule) {
  if (!ok) throw InputError(subject + ": field \"" + field + "\" " + rule);
}

}  // namespace

FeederGraph ParseFeeder(std::string_view document) {
  const Json doc = ParseJson(document);
  RejectUnknown(doc, {"base_kv", "base_kva", "nodes", "edges", "ders"}, "feeder");

  const double base_kv = Number(Require(doc, "base_kv", "feeder"), "base_kv");
  const double base_kva = Number(Require(doc, "base_kva", "feeder"), "base_kva");
  Check(base_kv > 0, "feeder", "base_kv", "must be positive");
  Check(base_kva > 0, "feeder", "base_kva", "must be positive");

  std::vector<NodeRecord> nodes;
  const Json& jnodes = Require(doc, "nodes", "feeder");
  if (!jnodes.is_array()) throw InputError("feeder: \"nodes\" must be an array");
  for (const Json& jn : jnodes) {
    RejectUnknown(jn, {"id", "p_kw", "q_kvar", "critical"}, "node");
    NodeRecord n;
    n.id = Id(Require(jn, "id", "node"), "id");
    n.demand_p_kw = OptNumber(jn, "p_kw", 0.0);
    n.demand_q_kvar = OptNumber(jn, "q_kvar", 0.0);
    n.is_critical = OptBool(jn, "critical", false);
    const std::string subject = "node " + n.id;
    Check(!n.id.empty() && n.id.find_first_of(" \t\r\n") == std::string::npos, subject, "id",
          "must be non-empty without whitespace");
    Check(n.demand_p_kw >= 0, subject, "p_kw", "must be >= 0");
    Check(n.demand_q_kvar >= 0, subject, "q_kvar", "must be >= 0");
    nodes.push_back(std::move(n));
  }

  std::vector<EdgeRecord> edges;
  const Json& jedges = Require(doc, "edges", "feeder");
  if (!jedges.is_array()) throw InputError("feeder: \"edges\" must be an array");
  for (const Json& je : jedges) {
    RejectUnknown(je, {"from", "to", "r_pu", "x_pu", "switchable", "normally_open", "faulted", "p_success"},
                  "edge");
    EdgeRecord e;
    e.from = Id(Require(je, "from", "edge"), "from");
    e.to = Id(Require(je, "to", "edge"), "to");
    e.r_pu = Number(Require(je, "r_pu", "edge"), "r_pu");
    e.x_pu = Number(Require(je, "x_pu", "edge"), "x_pu");
    e.switchable = OptBool(je, "switchable", true);
    e.normally_open = OptBool(je, "normally_open", false);
    e.faulted = OptBool(je, "faulted", false);
    e.p_success = OptNumber(je, "p_success", 1.0);
    const std::string subject = "edge " + e.from + "-" + e.to;
    Check(e.r_pu >= 0, subject, "r_pu", "must be >= 0");
    Check(e.x_pu >= 0, subject, "x_pu", "must be >= 0");
    Check(e.p_success >= 0 && e.p_success <= 1, subject, "p_success", "must lie in [0, 1]");
    edges.push_back(std::move(e));
  }

  std::vector<DerUnit> ders;
  const Json& jders = Require(doc, "ders", "feeder");
  if (!jders.is_array()) throw InputError("feeder: \"ders\" must be an array");
  for (const Json& jd : jders) {
    RejectUnknown(jd, {"node", "p_max_kw", "q_max_kvar", "energy_kwh", "availability"}, "der");
    DerUnit d;
    d.node = Id(Require(jd, "node", "der"), "node");
    d.p_max_kw = Number(Require(jd, "p_max_kw", "der"), "p_max_kw");
    d.q_max_kvar = OptNumber(jd, "q_max_kvar", 0.0);
    d.energy_kwh = Number(Require(jd, "energy_kwh", "der"), "energy_kwh");
    d.availability = OptNumber(jd, "availability", 1.0);
    const std::string subject = "der " + d.node;
    Check(d.p_max_kw > 0, subject, "p_max_kw", "must be > 0");
    Check(d.q_max_kvar >= 0, subject, "q_max_kvar", "must be >= 0");
    Check(d.energy_kwh > 0, subject, "energy_kwh", "must be > 0");
    Check(d.availability > 0 && d.availability <= 1, subject, "availability", "must lie in (0, 1]");
    ders.push_back(std::move(d));
  }

  return FeederGraph(base_kv, base_kva, std::move(nodes), std::move(edges), std::move(ders));
}

std::string SerializeFeeder(const FeederGraph& graph) {
  Json doc;
  doc["base_kv"] = graph.base_kv();
  doc["base_kva"] = graph.base_kva();
  Json nodes = Json::array();
  for (const NodeRecord& n : graph.nodes()) {
    nodes.push_back({{"id", n.id}, {"p_kw", n.demand_p_kw}, {"q_kvar", n.demand_q_kvar}, {"critical", n.is_critical}});
  }
  Json edges = Json::array();
  for (const EdgeRecord& e : graph.edges()) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"r_pu", e.r_pu},
                     {"x_pu", e.x_pu},
                     {"switchable", e.switchable},
                     {"normally_open", e.normally_open},
                     {"faulted", e.faulted},
                     {"p_success", e.p_success}});
  }
  Json ders = Json::array();
  for (const DerUnit& d : graph.ders()) {
    ders.push_back({{"node", d.node},
                    {"p_max_kw", d.p_max_kw},
                    {"q_max_kvar", d.q_max_kvar},
                    {"energy_kwh", d.energy_kwh},
                    {"availability", d.availability}});
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  doc["ders"] = std::move(ders);
  return doc.dump(2) + "\n";
}

namespace {

EdgeRef SplitEdgeRef(const std::string& text) {
  // Without a graph at hand, split at the first '-'; ApplyScenario
  // re-resolves against the graph when ids themselves contain '-'.
  const size_t pos = text.find('-');
  if (pos == std::string::npos || pos == 0 || pos + 1 == text.size()) {
    throw InputError("faulted_edges entry \"" + text + "\" is not of the form from-to");
  }
  return {text.substr(0, pos), text.substr(pos + 1)};
}

}  // namespace

ScenarioConfig ParseScenario(std::string_view document) {
  const Json doc = ParseJson(document);
  RejectUnknown(doc,
                {"faulted_edges", "epsilon_hours", "enforce_time_equity", "v_min", "v_max", "v_ref", "big_m",
                 "max_paths_per_loop", "p_success_override"},
                "scenario");
  ScenarioConfig s;
  if (auto it = doc.find("faulted_edges"); it != doc.end()) {
    if (!it->is_array()) throw InputError("scenario: \"faulted_edges\" must be an array");
    for (const Json& ref : *it) {
      if (!ref.is_string()) throw InputError("scenario: faulted_edges entries must be strings");
      s.faulted_edges.push_back(SplitEdgeRef(ref.get<std::string>()));
    }
  }
  auto optional_number = [&doc](const char* key) -> std::optional<double> {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    return Number(*it, key);
  };
  s.epsilon_hours = optional_number("epsilon_hours");
  s.enforce_time_equity = OptBool(doc, "enforce_time_equity", false);
  s.v_min = OptNumber(doc, "v_min", s.v_min);
  s.v_max = OptNumber(doc, "v_max", s.v_max);
  s.v_ref = OptNumber(doc, "v_ref", s.v_ref);
  s.big_m = optional_number("big_m");
  if (auto it = doc.find("max_paths_per_loop"); it != doc.end()) {
    if (!it->is_number_integer()) throw InputError("field \"max_paths_per_loop\" must be an integer");
    s.max_paths_per_loop = it->get<int>();
  }
  s.p_success_override = optional_number("p_success_override");
  CheckScenario(s);
  return s;
}

std::string SerializeScenario(const ScenarioConfig& s) {
  Json doc;
  Json faults = Json::array();
  for (const EdgeRef& ref : s.faulted_edges) faults.push_back(ref.first + "-" + ref.second);
  doc["faulted_edges"] = std::move(faults);
  doc["epsilon_hours"] = s.epsilon_hours ? Json(*s.epsilon_hours) : Json(nullptr);
  doc["enforce_time_equity"] = s.enforce_time_equity;
  doc["v_min"] = s.v_min;
  doc["v_max"] = s.v_max;
  doc["v_ref"] = s.v_ref;
  doc["big_m"] = s.big_m ? Json(*s.big_m) : Json(nullptr);
  doc["max_paths_per_loop"] = s.max_paths_per_loop;
  doc["p_success_override"] = s.p_success_override ? Json(*s.p_success_override) : Json(nullptr);
  return doc.dump(2) + "\n";
}

}  // namespace restore

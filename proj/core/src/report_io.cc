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

#include "restore/report_io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "restore/error.h"

namespace restore {
namespace {

using Json = nlohmann::ordered_json;

Json Number(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

Json ManifestJson(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["feeder"] = m.feeder_path;
  j["scenario"] = m.scenario_path;
  if (!m.plan_path.empty()) j["plan"] = m.plan_path;
  if (!m.solution_path.empty()) j["solution"] = m.solution_path;
  j["out_dir"] = m.out_dir;
  j["solver"] = m.solver;
  if (!m.eps.empty()) j["eps"] = m.eps;
  j["samples"] = m.samples;
  j["seed"] = m.seed;
  j["tool_version"] = m.tool_version;
  return j;
}

Json RsnJson(const RsnPlan& rsn) {
  Json j;
  j["der"] = rsn.der_node;
  j["nodes"] = rsn.nodes;
  Json edges = Json::array();
  for (const EdgeRef& e : rsn.edges) edges.push_back(Json::array({e.first, e.second}));
  j["edges"] = edges;
  j["critical_loads"] = rsn.critical_loads;
  Json paths = Json::array();
  for (const LoopPathChoice& c : rsn.loop_paths) {
    paths.push_back(Json{{"node", c.node}, {"alpha", c.alpha}, {"path", c.path}});
  }
  j["loop_paths"] = paths;
  j["served_p_kw"] = rsn.served_p_kw;
  j["served_q_kvar"] = rsn.served_q_kvar;
  j["restoration_hours"] = Number(rsn.restoration_hours);
  j["unavailability"] = rsn.unavailability;
  return j;
}

Json PlanJson(const RestorationPlan& plan) {
  Json j;
  j["objective"] = plan.objective;
  j["u_p"] = plan.u_p;
  j["u_r"] = plan.u_r;
  j["u_rc"] = plan.u_rc;
  j["t_net_hours"] = Number(plan.t_net_hours);
  j["picked_critical_loads"] = plan.picked_critical_loads;
  j["pickup_reward"] = plan.pickup_reward;
  j["unrestored_critical_loads"] = plan.unrestored_critical_loads;
  Json rsns = Json::array();
  for (const RsnPlan& rsn : plan.rsns) rsns.push_back(RsnJson(rsn));
  j["rsns"] = rsns;
  return j;
}

std::string IdOf(const Json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_unsigned() || value.is_number_integer()) return std::to_string(value.get<long long>());
  throw InputError(where + ": expected a node id");
}

std::vector<std::string> Ids(const Json& value, const std::string& where) {
  if (!value.is_array()) throw InputError(where + ": expected an array of node ids");
  std::vector<std::string> out;
  for (const Json& v : value) out.push_back(IdOf(v, where));
  return out;
}

std::string Fixed(double value, int digits) {
  if (!std::isfinite(value)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string Join(const std::vector<std::string>& parts, std::string_view separator) {
  std::string out;
  for (size_t t = 0; t < parts.size(); ++t) {
    if (t > 0) out += separator;
    out += parts[t];
  }
  return out;
}

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct TableRow {
  std::string der;
  std::string loads;
  std::string paths;
  std::string hours;
  std::string losses;
};

}  // namespace

std::string SerializePlan(const RestorationPlan& plan, const RunManifest* manifest) {
  Json doc;
  if (manifest != nullptr) doc["manifest"] = ManifestJson(*manifest);
  const Json body = PlanJson(plan);
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  return doc.dump(2) + "\n";
}

RestorationPlan ParsePlan(std::string_view document, const FeederGraph& graph) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("plan: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rsns") || !doc["rsns"].is_array()) {
    throw InputError("plan: missing \"rsns\" array");
  }
  RestorationPlan plan;
  auto check_node = [&](const std::string& id, const std::string& where) {
    if (graph.NodeIndex(id) < 0) throw InputError(where + ": node " + id + " is not in the feeder");
  };
  for (size_t r = 0; r < doc["rsns"].size(); ++r) {
    const Json& item = doc["rsns"][r];
    const std::string where = "plan.rsns[" + std::to_string(r) + "]";
    if (!item.is_object() || !item.contains("der") || !item.contains("nodes")) {
      throw InputError(where + ": needs \"der\" and \"nodes\"");
    }
    RsnPlan rsn;
    rsn.der_node = IdOf(item["der"], where + ".der");
    check_node(rsn.der_node, where + ".der");
    if (graph.DerAt(graph.NodeIndex(rsn.der_node)) < 0) {
      throw InputError(where + ".der: node " + rsn.der_node + " has no DER");
    }
    rsn.nodes = Ids(item["nodes"], where + ".nodes");
    for (const std::string& id : rsn.nodes) check_node(id, where + ".nodes");
    if (item.contains("edges")) {
      if (!item["edges"].is_array()) throw InputError(where + ".edges: expected an array");
      for (const Json& e : item["edges"]) {
        const auto pair = Ids(e, where + ".edges");
        if (pair.size() != 2) throw InputError(where + ".edges: each edge needs two node ids");
        rsn.edges.push_back({pair[0], pair[1]});
      }
    }
    if (item.contains("loop_paths")) {
      for (const Json& c : item["loop_paths"]) {
        if (!c.is_object() || !c.contains("node") || !c.contains("path")) {
          throw InputError(where + ".loop_paths: needs \"node\" and \"path\"");
        }
        LoopPathChoice choice;
        choice.node = IdOf(c["node"], where + ".loop_paths");
        choice.alpha = c.value("alpha", 0);
        choice.path = Ids(c["path"], where + ".loop_paths");
        rsn.loop_paths.push_back(std::move(choice));
      }
    }
    plan.rsns.push_back(std::move(rsn));
  }
  FinalizePlan(graph, plan);
  plan.objective = doc.contains("objective") && doc["objective"].is_number() ? doc["objective"].get<double>()
                                                                             : plan.u_rc;
  return plan;
}

std::string SerializeReport(const VerificationReport& report, const RestorationPlan& plan,
                            const RunManifest* manifest) {
  Json doc;
  if (manifest != nullptr) doc["manifest"] = ManifestJson(*manifest);
  doc["ok"] = report.ok;
  Json rsns = Json::array();
  for (size_t r = 0; r < report.rsns.size(); ++r) {
    const RsnReport& item = report.rsns[r];
    Json j;
    j["der"] = plan.rsns[r].der_node;
    j["radial_ok"] = item.audit.radial_ok;
    Json diagnostics = Json::array();
    for (const Diagnostic& d : item.audit.diagnostics) {
      diagnostics.push_back(Json{{"code", d.code}, {"subject", d.subject}, {"message", d.message}});
    }
    j["diagnostics"] = diagnostics;
    Json voltages = Json::object();
    for (const auto& [id, v] : item.sweep.voltages) voltages[id] = v;
    j["voltages"] = voltages;
    j["max_linear_voltage_error"] = item.max_linear_error;
    j["sweep_converged"] = item.sweep.converged;
    j["sweep_iterations"] = item.sweep.iterations;
    j["loss_kw"] = item.sweep.loss_kw;
    j["loss_percent"] = item.sweep.loss_percent;
    j["reliability"] = item.reliability;
    j["restoration_hours"] = Number(item.restoration_hours);
    j["unavailability"] = item.unavailability;
    j["survival"] = Json{{"estimate", item.survival.estimate},
                         {"stderr", item.survival.standard_error},
                         {"samples", item.survival.samples}};
    rsns.push_back(j);
  }
  doc["rsns"] = rsns;
  Json metrics;
  metrics["total_reliability"] = report.total_reliability;
  metrics["u_p"] = report.metrics.u_p;
  metrics["u_r"] = report.metrics.u_r;
  metrics["u_rc"] = report.metrics.u_rc;
  metrics["t_net_hours"] = Number(report.times.t_net_hours);
  metrics["average_bias_hours"] = report.times.average_bias;
  metrics["picked_critical_loads"] = report.picked_critical_loads;
  metrics["objective"] = plan.objective;
  doc["metrics"] = metrics;
  doc["monte_carlo"] = Json{{"samples", report.samples}, {"seed", report.seed}};
  return doc.dump(2) + "\n";
}

std::string FormatPlanTable(const RestorationPlan& plan, const VerificationReport* report, TableFormat format) {
  std::vector<TableRow> rows;
  for (size_t r = 0; r < plan.rsns.size(); ++r) {
    const RsnPlan& rsn = plan.rsns[r];
    TableRow row;
    row.der = "DER-" + rsn.der_node;
    std::vector<std::string> loads, paths;
    for (const std::string& cl : rsn.critical_loads) {
      loads.push_back("CL-" + cl);
      paths.push_back(Join(RouteTo(rsn, cl), "-"));
    }
    row.loads = loads.empty() ? "-" : Join(loads, ", ");
    row.paths = paths.empty() ? "-" : Join(paths, " ; ");
    row.hours = Fixed(rsn.restoration_hours, 2);
    row.losses = report != nullptr && r < report->rsns.size() ? Fixed(report->rsns[r].sweep.loss_percent, 4) + "%"
                                                              : "-";
    rows.push_back(std::move(row));
  }

  std::ostringstream out;
  if (format == TableFormat::kJson) {
    Json arr = Json::array();
    for (const TableRow& row : rows) {
      arr.push_back(Json{{"der", row.der},
                         {"critical_loads", row.loads},
                         {"restoration_paths", row.paths},
                         {"t_hours", row.hours},
                         {"losses", row.losses}});
    }
    return arr.dump(2) + "\n";
  }
  if (format == TableFormat::kCsv) {
    out << "der,critical_loads,restoration_paths,t_hours,losses_percent\n";
    for (const TableRow& row : rows) {
      out << CsvField(row.der) << ',' << CsvField(row.loads) << ',' << CsvField(row.paths) << ',' << row.hours << ','
          << row.losses << '\n';
    }
    return out.str();
  }
  const std::vector<std::string> header = {"DER", "Critical Loads", "Nodes on Restoration Path", "T_k (h)",
                                           "Losses (%)"};
  std::vector<size_t> width(header.size());
  for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const TableRow& row : rows) {
    const std::string cells[] = {row.der, row.loads, row.paths, row.hours, row.losses};
    for (size_t c = 0; c < header.size(); ++c) width[c] = std::max(width[c], cells[c].size());
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << " | ";
      out << cells[c] << std::string(c + 1 < cells.size() ? width[c] - cells[c].size() : 0, ' ');
    }
    out << '\n';
  };
  emit(header);
  size_t total = 0;
  for (size_t w : width) total += w;
  out << std::string(total + 3 * (width.size() - 1), '-') << '\n';
  for (const TableRow& row : rows) emit({row.der, row.loads, row.paths, row.hours, row.losses});
  return out.str();
}

}  // namespace restore

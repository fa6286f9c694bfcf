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

#include "restore/plan.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "restore/error.h"
#include "restore/node_id.h"

namespace restore {
namespace {

bool IdLess(const std::string& a, const std::string& b) { return NodeIdLess(a, b); }

}  // namespace

void FinalizePlan(const FeederGraph& graph, RestorationPlan& plan) {
  std::set<std::string> restored;
  plan.picked_critical_loads = 0;
  plan.u_p = 0.0;
  plan.u_r = 0.0;
  for (RsnPlan& rsn : plan.rsns) {
    const int k = graph.DerAt(graph.NodeIndex(rsn.der_node));
    const DerUnit& der = graph.der(k);
    std::sort(rsn.nodes.begin(), rsn.nodes.end(), IdLess);
    rsn.critical_loads.clear();
    rsn.served_p_kw = 0.0;
    rsn.served_q_kvar = 0.0;
    for (const std::string& id : rsn.nodes) {
      const int i = graph.NodeIndex(id);
      restored.insert(id);
      if (!graph.IsCritical(i)) continue;
      rsn.critical_loads.push_back(id);
      rsn.served_p_kw += graph.RestorationDemandKw(i);
      rsn.served_q_kvar += graph.RestorationDemandKvar(i);
    }
    rsn.restoration_hours = rsn.served_p_kw > 0.0 ? der.energy_kwh / rsn.served_p_kw : kInf;
    rsn.unavailability = (1.0 - der.availability) * static_cast<double>(rsn.nodes.size());
    plan.picked_critical_loads += static_cast<int>(rsn.critical_loads.size());
    plan.u_p += static_cast<double>(rsn.nodes.size());
    plan.u_r += rsn.unavailability;
  }
  plan.unrestored_critical_loads.clear();
  for (int i : graph.CriticalLoads()) {
    if (!restored.count(graph.id(i))) plan.unrestored_critical_loads.push_back(graph.id(i));
  }
  plan.pickup_reward = static_cast<double>(graph.num_ders()) * graph.num_nodes();
  plan.u_rc = plan.u_r - plan.pickup_reward * plan.picked_critical_loads;
  double reserve = 0.0;
  for (const DerUnit& d : graph.ders()) reserve += d.energy_kwh;
  const double demand = graph.TotalCriticalDemandKw();
  plan.t_net_hours = demand > 0.0 ? reserve / demand : kInf;
}

RestorationPlan ExtractPlan(const RestorationModel& model, const std::vector<double>& values,
                            double integer_tolerance) {
  const FeederGraph& g = model.graph;
  const MilpModel& milp = model.milp;
  if (static_cast<int>(values.size()) != milp.num_variables()) {
    throw SolutionError("solution has " + std::to_string(values.size()) + " values, model has " +
                        std::to_string(milp.num_variables()) + " variables");
  }
  for (int j = 0; j < milp.num_variables(); ++j) {
    const VariableHandle& var = milp.variable(j);
    if (!var.is_integer) continue;
    if (std::abs(values[j] - std::round(values[j])) > integer_tolerance) {
      throw SolutionError("binary " + var.name + " is fractional (" + std::to_string(values[j]) + ")");
    }
  }
  auto on = [&](int var) { return var >= 0 && values[var] > 0.5; };

  RestorationPlan plan;
  const PathCatalog& cat = model.catalog;
  for (int k = 0; k < g.num_ders(); ++k) {
    const Orientation& o = model.orientations[k];
    RsnPlan rsn;
    rsn.der_node = g.der(k).node;
    std::vector<int> parent(g.num_nodes(), -1);
    std::vector<bool> member(g.num_nodes(), false);
    for (int i : g.sorted_nodes()) member[i] = on(model.index.v[k][i]);
    if (!member[o.root]) throw SolutionError("DER " + rsn.der_node + " is not in its own network");

    for (int i : g.sorted_nodes()) {
      if (!member[i] || i == o.root) continue;
      if (!model.loops.ContainsNode(i)) {
        parent[i] = o.parent_of[i];
        continue;
      }
      int chosen = -1;
      for (int e : cat.For(k, i)) {
        if (!on(model.index.y[e])) continue;
        if (chosen >= 0) throw SolutionError("node " + g.id(i) + " has more than one selected path");
        chosen = e;
      }
      if (chosen < 0) throw SolutionError("energized loop node " + g.id(i) + " has no selected path");
      const PathEntry& pe = cat.entries[chosen];
      parent[i] = pe.pred();
      LoopPathChoice choice{g.id(i), pe.alpha, {}};
      for (int n : pe.nodes) choice.path.push_back(g.id(n));
      rsn.loop_paths.push_back(std::move(choice));
    }

    // Every member must reach the DER through members without revisiting.
    std::vector<std::vector<int>> children(g.num_nodes());
    for (int i : g.sorted_nodes()) {
      if (!member[i] || i == o.root) continue;
      if (parent[i] < 0 || !member[parent[i]]) {
        throw SolutionError("node " + g.id(i) + " of DER " + rsn.der_node + " is not connected to its DER");
      }
      children[parent[i]].push_back(i);
    }
    std::vector<int> queue{o.root};
    for (size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      rsn.nodes.push_back(g.id(u));
      for (int c : children[u]) {
        rsn.edges.push_back({g.id(u), g.id(c)});
        queue.push_back(c);
      }
    }
    const long members = std::count(member.begin(), member.end(), true);
    if (static_cast<long>(queue.size()) != members) {
      throw SolutionError("network of DER " + rsn.der_node + " is not a tree rooted at the DER");
    }
    plan.rsns.push_back(std::move(rsn));
  }

  std::set<std::string> seen;
  for (const RsnPlan& rsn : plan.rsns) {
    for (const std::string& id : rsn.nodes) {
      if (!seen.insert(id).second) throw SolutionError("node " + id + " belongs to two networks");
    }
  }
  FinalizePlan(g, plan);
  std::vector<double> snapped = values;
  for (int j = 0; j < milp.num_variables(); ++j) {
    if (milp.variable(j).is_integer) snapped[j] = std::round(snapped[j]);
  }
  plan.objective = milp.ObjectiveValue(snapped);
  return plan;
}

std::vector<std::string> RouteTo(const RsnPlan& rsn, const std::string& node) {
  std::map<std::string, std::string> parent;
  for (const EdgeRef& e : rsn.edges) parent[e.second] = e.first;
  std::vector<std::string> route;
  if (std::find(rsn.nodes.begin(), rsn.nodes.end(), node) == rsn.nodes.end()) return route;
  std::string at = node;
  route.push_back(at);
  while (at != rsn.der_node) {
    auto it = parent.find(at);
    if (it == parent.end() || route.size() > rsn.nodes.size()) return {};
    at = it->second;
    route.push_back(at);
  }
  std::reverse(route.begin(), route.end());
  return route;
}

}  // namespace restore

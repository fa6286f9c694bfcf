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

#include "restore/model_builder.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "restore/error.h"

namespace restore {
namespace {

using Terms = std::vector<std::pair<int, double>>;

std::string Join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += '_';
    out += p;
  }
  return out;
}

}  // namespace

double ComputeTNet(const FeederGraph& graph) {
  const double demand = graph.TotalCriticalDemandKw();
  if (!(demand > 0.0)) throw ModelError("total critical demand is zero; T_net is undefined");
  double reserve = 0.0;
  for (const DerUnit& d : graph.ders()) reserve += d.energy_kwh;
  return reserve / demand;
}

int LinearizeProduct(MilpModel& model, int y, int w, double bound, bool symmetric, const std::string& label, int z) {
  const VariableHandle& wv = model.variable(w);
  if (!std::isfinite(wv.lower) || !std::isfinite(wv.upper)) {
    throw ModelError("product " + label + ": continuous factor " + wv.name + " is unbounded");
  }
  const double lo = symmetric ? -bound : 0.0;
  if (wv.lower < lo - 1e-12 || wv.upper > bound + 1e-12) {
    throw ModelError("product " + label + ": bounds of " + wv.name + " exceed the Big-M value");
  }
  if (z < 0) z = model.AddVariable(VarKind::kBilinearAux, "z_" + label, lo, bound, false);
  const std::string family = "bilinear";
  model.AddConstraint({{z, 1.0}, {y, -bound}}, Sense::kLe, 0.0, label + ":a", family);
  if (symmetric) {
    model.AddConstraint({{z, 1.0}, {y, bound}}, Sense::kGe, 0.0, label + ":b", family);
    model.AddConstraint({{z, 1.0}, {w, -1.0}, {y, bound}}, Sense::kLe, bound, label + ":c", family);
  } else {
    model.AddConstraint({{z, 1.0}, {w, -1.0}}, Sense::kLe, 0.0, label + ":b", family);
    model.AddConstraint({{z, 1.0}}, Sense::kGe, 0.0, label + ":c", family);
  }
  model.AddConstraint({{z, 1.0}, {w, -1.0}, {y, -bound}}, Sense::kGe, -bound, label + ":d", family);
  return z;
}

ModelBuilder::ModelBuilder(const FeederGraph& graph, const ScenarioConfig& scenario) {
  CheckScenario(scenario);
  model_.graph = ApplyScenario(graph, scenario);
  model_.scenario = scenario;
  const FeederGraph& g = model_.graph;
  if (g.num_ders() == 0) throw ModelError("feeder has no DER");

  model_.loops = FindLoops(g);
  for (int k = 0; k < g.num_ders(); ++k) model_.orientations.push_back(Orient(g, k, model_.loops));
  model_.catalog = BuildPathCatalog(g, model_.loops, scenario.max_paths_per_loop);

  double largest = 0.0;
  for (const DerUnit& d : g.ders()) largest = std::max({largest, d.p_max_kw, d.q_max_kvar});
  largest /= g.base_kva();
  if (scenario.big_m) {
    if (*scenario.big_m <= std::max(largest, scenario.v_max)) {
      throw ModelError("big_m must exceed every DER capacity (per-unit) and v_max");
    }
    model_.flow_bound_pu = *scenario.big_m;
    model_.voltage_bound_pu = *scenario.big_m;
  } else {
    model_.flow_bound_pu = 10.0 * largest;
    model_.voltage_bound_pu = 2.0;
  }

  const double demand = g.TotalCriticalDemandKw();
  if (demand > 0.0) {
    model_.milp.t_net_hours = ComputeTNet(g);
  } else if (scenario.enforce_time_equity) {
    throw ModelError("restoration-time equity needs a positive critical demand");
  } else {
    model_.milp.t_net_hours = kInf;
  }
}

std::vector<int> ModelBuilder::EntryOrder() const {
  const FeederGraph& g = model_.graph;
  std::vector<int> rank(g.num_nodes());
  for (int r = 0; r < g.num_nodes(); ++r) rank[g.sorted_nodes()[r]] = r;
  std::vector<int> order(model_.catalog.entries.size());
  std::iota(order.begin(), order.end(), 0);
  const auto& entries = model_.catalog.entries;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const PathEntry& ea = entries[a];
    const PathEntry& eb = entries[b];
    if (ea.target != eb.target) return rank[ea.target] < rank[eb.target];
    if (ea.der != eb.der) return ea.der < eb.der;
    return ea.alpha < eb.alpha;
  });
  return order;
}

void ModelBuilder::BuildVariables() {
  const FeederGraph& g = model_.graph;
  MilpModel& m = model_.milp;
  ModelIndex& ix = model_.index;
  const int n = g.num_nodes();
  const int nd = g.num_ders();
  const size_t ne = model_.catalog.entries.size();
  const double flow = model_.flow_bound_pu;
  const double volt = model_.voltage_bound_pu;
  const std::vector<int> entry_order = EntryOrder();
  auto reach = [this](int k, int i) { return static_cast<bool>(model_.orientations[k].reachable[i]); };
  auto entry_name = [&](const char* prefix, int e) {
    const PathEntry& pe = model_.catalog.entries[e];
    return Join({prefix, Tag(pe.target), DerTag(pe.der), std::to_string(pe.alpha)});
  };

  auto per_node = [&](std::vector<std::vector<int>>& table, VarKind kind, const char* prefix, double lo, double hi,
                      bool integer) {
    table.assign(nd, std::vector<int>(n, -1));
    for (int i : g.sorted_nodes()) {
      for (int k = 0; k < nd; ++k) {
        const bool live = reach(k, i);
        table[k][i] = m.AddVariable(kind, Join({prefix, Tag(i), DerTag(k)}), live ? lo : 0.0, live ? hi : 0.0,
                                    integer, i, k);
      }
    }
  };
  auto per_entry = [&](std::vector<int>& table, VarKind kind, const char* prefix, double lo, double hi,
                       bool integer) {
    table.assign(ne, -1);
    for (int e : entry_order) {
      const PathEntry& pe = model_.catalog.entries[e];
      table[e] = m.AddVariable(kind, entry_name(prefix, e), lo, hi, integer, pe.target, pe.der, pe.alpha);
    }
  };

  per_node(ix.v, VarKind::kAssignment, "v", 0.0, 1.0, true);
  ix.s.assign(n, -1);
  for (int i : g.CriticalLoads()) ix.s[i] = m.AddVariable(VarKind::kPickup, "s_" + Tag(i), 0.0, 1.0, true, i);
  per_entry(ix.y, VarKind::kPath, "y", 0.0, 1.0, true);
  per_node(ix.p, VarKind::kFlowP, "p", 0.0, flow, false);
  per_node(ix.q, VarKind::kFlowQ, "q", 0.0, flow, false);
  per_entry(ix.path_p, VarKind::kPathFlowP, "pp", 0.0, flow, false);
  per_entry(ix.path_q, VarKind::kPathFlowQ, "qq", 0.0, flow, false);
  per_node(ix.voltage, VarKind::kVoltage, "V", 0.0, model_.scenario.v_max, false);
  per_entry(ix.path_voltage, VarKind::kPathVoltage, "Vp", -volt, volt, false);
  per_entry(ix.z_p, VarKind::kBilinearAux, "zp", 0.0, flow, false);
  per_entry(ix.z_q, VarKind::kBilinearAux, "zq", 0.0, flow, false);
  per_entry(ix.z_voltage, VarKind::kBilinearAux, "zV", -volt, volt, false);
}

void ModelBuilder::AddConnectivityConstraints() {
  const FeederGraph& g = model_.graph;
  MilpModel& m = model_.milp;
  const ModelIndex& ix = model_.index;
  const PathCatalog& cat = model_.catalog;
  const int nd = g.num_ders();

  for (int k = 0; k < nd; ++k) {
    m.AddConstraint({{ix.v[k][g.DerNode(k)], 1.0}}, Sense::kEq, 1.0, "der_root:" + DerTag(k), "der_root");
  }
  for (int i : g.sorted_nodes()) {
    Terms terms;
    for (int k = 0; k < nd; ++k) terms.emplace_back(ix.v[k][i], 1.0);
    if (g.IsCritical(i)) {
      terms.emplace_back(ix.s[i], -1.0);
      m.AddConstraint(std::move(terms), Sense::kEq, 0.0, "pickup:" + Tag(i), "pickup");
    } else {
      m.AddConstraint(std::move(terms), Sense::kLe, 1.0, "one_rsn:" + Tag(i), "one_rsn");
    }
  }

  for (int e = 0; e < g.num_edges(); ++e) {
    const EdgeRecord& rec = g.edge(e);
    const int a = g.EdgeFrom(e);
    const int b = g.EdgeTo(e);
    const std::string label = EdgeLabel(g, e);
    for (int k = 0; k < nd; ++k) {
      const Orientation& o = model_.orientations[k];
      if (!o.reachable[a] && !o.reachable[b]) continue;
      if (rec.faulted) {
        if (model_.loops.ContainsNode(a) && model_.loops.ContainsNode(b)) continue;
        m.AddConstraint({{ix.v[k][a], 1.0}, {ix.v[k][b], 1.0}}, Sense::kLe, 1.0,
                        "fault_split:" + label + ":" + DerTag(k), "fault_split");
      } else if (!rec.switchable && !rec.normally_open) {
        m.AddConstraint({{ix.v[k][a], 1.0}, {ix.v[k][b], -1.0}}, Sense::kEq, 0.0,
                        "no_switch:" + label + ":" + DerTag(k), "no_switch");
        if (model_.loops.ContainsEdge(e)) {
          // Both ends energized: the line carries the supply of one of them.
          Terms terms{{ix.v[k][a], -1.0}};
          for (int pe : cat.For(k, b)) {
            if (cat.entries[pe].pred() == a) terms.emplace_back(ix.y[pe], 1.0);
          }
          for (int pe : cat.For(k, a)) {
            if (cat.entries[pe].pred() == b) terms.emplace_back(ix.y[pe], 1.0);
          }
          m.AddConstraint(std::move(terms), Sense::kGe, 0.0, "no_switch_tree:" + label + ":" + DerTag(k),
                          "no_switch_tree");
        }
      }
    }
  }

  for (int k = 0; k < nd; ++k) {
    const Orientation& o = model_.orientations[k];
    for (int j : g.sorted_nodes()) {
      if (!o.reachable[j] || j == o.root || IsLoopNode(j)) continue;
      m.AddConstraint({{ix.v[k][j], 1.0}, {ix.v[k][o.parent_of[j]], -1.0}}, Sense::kLe, 0.0,
                      "radial:" + Tag(j) + ":" + DerTag(k), "radial");
    }
  }

  for (int k = 0; k < nd; ++k) {
    const Orientation& o = model_.orientations[k];
    for (int j : g.sorted_nodes()) {
      if (!o.reachable[j] || j == o.root || !IsLoopNode(j)) continue;
      const auto entries = cat.For(k, j);
      if (entries.empty()) {
        // Only reachable through another DER's node.
        m.SetBounds(ix.v[k][j], 0.0, 0.0);
        continue;
      }
      Terms pick{{ix.v[k][j], -1.0}};
      for (int e : entries) {
        const PathEntry& pe = cat.entries[e];
        const std::string tag = Tag(j) + ":" + DerTag(k) + ":" + std::to_string(pe.alpha);
        Terms row{{ix.v[k][j], 1.0}, {ix.y[e], 1.0}};
        const double share = 1.0 / pe.n_parents();
        for (int parent : pe.parents()) row.emplace_back(ix.v[k][parent], -share);
        m.AddConstraint(std::move(row), Sense::kLe, 1.0, "path_parents:" + tag, "path_parents");
        pick.emplace_back(ix.y[e], 1.0);

        // The route must agree with the route chosen at the last loop node
        // before j, so the selected paths form one tree.
        int last_loop = -1;
        for (int pos = pe.n_parents() - 1; pos >= 1; --pos) {
          if (IsLoopNode(pe.nodes[pos])) {
            last_loop = pos;
            break;
          }
        }
        if (last_loop >= 0) {
          const Path prefix(pe.nodes.begin(), pe.nodes.begin() + last_loop + 1);
          const int f = cat.Find(k, prefix);
          if (f >= 0) {
            m.AddConstraint({{ix.y[e], 1.0}, {ix.y[f], -1.0}}, Sense::kLe, 0.0, "path_prefix:" + tag,
                            "path_prefix");
          } else {
            m.SetBounds(ix.y[e], 0.0, 0.0);
          }
        }
      }
      m.AddConstraint(std::move(pick), Sense::kEq, 0.0, "path_pick:" + Tag(j) + ":" + DerTag(k), "path_pick");
    }
  }
}

void ModelBuilder::AddFlowRows(int k, bool reactive) {
  const FeederGraph& g = model_.graph;
  MilpModel& m = model_.milp;
  const ModelIndex& ix = model_.index;
  const PathCatalog& cat = model_.catalog;
  const Orientation& o = model_.orientations[k];
  const auto& flow = reactive ? ix.q : ix.p;
  const auto& path_flow = reactive ? ix.path_q : ix.path_p;
  const auto& z = reactive ? ix.z_q : ix.z_p;
  const std::string kind = reactive ? "q" : "p";

  for (int i : g.sorted_nodes()) {
    if (!o.reachable[i]) continue;
    const double demand = reactive ? PuQ(i) : PuP(i);
    Terms downstream;
    for (int c : o.children_of[i]) {
      if (!IsLoopNode(c)) downstream.emplace_back(flow[k][c], -1.0);
    }
    const std::string tag = Tag(i) + ":" + DerTag(k);
    if (i == o.root || !IsLoopNode(i)) {
      Terms row{{flow[k][i], 1.0}, {ix.v[k][i], -demand}};
      row.insert(row.end(), downstream.begin(), downstream.end());
      for (int e : cat.ByPred(k, i)) row.emplace_back(z[e], -1.0);
      m.AddConstraint(std::move(row), Sense::kEq, 0.0, "flow_" + kind + ":" + tag, "flow_" + kind);
      continue;
    }
    Terms recombine{{flow[k][i], 1.0}};
    for (int e : cat.For(k, i)) {
      const PathEntry& pe = cat.entries[e];
      Terms row{{path_flow[e], 1.0}, {ix.v[k][i], -demand}};
      row.insert(row.end(), downstream.begin(), downstream.end());
      for (int f : cat.Extensions(e)) row.emplace_back(z[f], -1.0);
      const std::string ptag = tag + ":" + std::to_string(pe.alpha);
      m.AddConstraint(std::move(row), Sense::kEq, 0.0, "path_flow_" + kind + ":" + ptag, "path_flow_" + kind);
      LinearizeProduct(m, ix.y[e], path_flow[e], model_.flow_bound_pu, false, "z" + kind + "_" + Tag(i) + "_" +
                       DerTag(k) + "_" + std::to_string(pe.alpha), z[e]);
      recombine.emplace_back(z[e], -1.0);
    }
    m.AddConstraint(std::move(recombine), Sense::kEq, 0.0, "flow_" + kind + ":" + tag, "flow_" + kind);
  }
}

void ModelBuilder::AddPowerflowConstraints() {
  const FeederGraph& g = model_.graph;
  MilpModel& m = model_.milp;
  const ModelIndex& ix = model_.index;
  const PathCatalog& cat = model_.catalog;
  const double v0 = model_.scenario.v_ref;
  const double big = model_.voltage_bound_pu;

  for (int k = 0; k < g.num_ders(); ++k) {
    AddFlowRows(k, false);
    AddFlowRows(k, true);
    const Orientation& o = model_.orientations[k];
    m.AddConstraint({{ix.voltage[k][o.root], 1.0}, {ix.v[k][o.root], -v0}}, Sense::kEq, 0.0,
                    "volt_root:" + DerTag(k), "volt_root");
    for (int i : g.sorted_nodes()) {
      if (!o.reachable[i] || i == o.root) continue;
      const std::string tag = Tag(i) + ":" + DerTag(k);
      if (!IsLoopNode(i)) {
        const EdgeRecord& line = g.edge(o.parent_edge[i]);
        // Voltage drop holds when i is energized; relaxed by Big-M otherwise.
        Terms drop{{ix.voltage[k][i], 1.0},
                   {ix.voltage[k][o.parent_of[i]], -1.0},
                   {ix.p[k][i], line.r_pu / v0},
                   {ix.q[k][i], line.x_pu / v0}};
        Terms upper = drop;
        upper.emplace_back(ix.v[k][i], big);
        m.AddConstraint(std::move(upper), Sense::kLe, big, "volt_drop_hi:" + tag, "volt_drop");
        drop.emplace_back(ix.v[k][i], -big);
        m.AddConstraint(std::move(drop), Sense::kGe, -big, "volt_drop_lo:" + tag, "volt_drop");
        continue;
      }
      Terms recombine{{ix.voltage[k][i], 1.0}};
      for (int e : cat.For(k, i)) {
        const PathEntry& pe = cat.entries[e];
        const EdgeRecord& line = g.edge(pe.last_edge());
        const std::string ptag = tag + ":" + std::to_string(pe.alpha);
        m.AddConstraint({{ix.path_voltage[e], 1.0},
                         {ix.voltage[k][pe.pred()], -1.0},
                         {ix.path_p[e], line.r_pu / v0},
                         {ix.path_q[e], line.x_pu / v0}},
                        Sense::kEq, 0.0, "path_volt:" + ptag, "path_volt");
        LinearizeProduct(m, ix.y[e], ix.path_voltage[e], big, true,
                         "zV_" + Tag(i) + "_" + DerTag(k) + "_" + std::to_string(pe.alpha), ix.z_voltage[e]);
        recombine.emplace_back(ix.z_voltage[e], -1.0);
      }
      m.AddConstraint(std::move(recombine), Sense::kEq, 0.0, "volt_recombine:" + tag, "volt_recombine");
    }
  }
}

void ModelBuilder::AddOperationalConstraints() {
  const FeederGraph& g = model_.graph;
  const ScenarioConfig& sc = model_.scenario;
  MilpModel& m = model_.milp;
  const ModelIndex& ix = model_.index;

  for (int k = 0; k < g.num_ders(); ++k) {
    const Orientation& o = model_.orientations[k];
    for (int i : g.sorted_nodes()) {
      if (!o.reachable[i]) continue;
      const std::string tag = Tag(i) + ":" + DerTag(k);
      m.AddConstraint({{ix.voltage[k][i], 1.0}, {ix.v[k][i], -sc.v_min}}, Sense::kGe, 0.0, "volt_lo:" + tag,
                      "volt_band");
      m.AddConstraint({{ix.voltage[k][i], 1.0}, {ix.v[k][i], -sc.v_max}}, Sense::kLe, 0.0, "volt_hi:" + tag,
                      "volt_band");
    }
  }

  double eps = 0.0;
  const double t_net = m.t_net_hours;
  if (sc.enforce_time_equity) {
    eps = *sc.epsilon_hours;
    if (eps >= t_net) {
      throw ModelError("equity band degenerate: epsilon (" + std::to_string(eps) + " h) must be below T_net (" +
                       std::to_string(t_net) + " h)");
    }
  }

  for (int k = 0; k < g.num_ders(); ++k) {
    const DerUnit& der = g.der(k);
    const Orientation& o = model_.orientations[k];
    Terms cap_p, cap_q, served;
    std::vector<int> loads;
    for (int i : g.CriticalLoads()) {
      if (!o.reachable[i]) continue;
      loads.push_back(i);
      cap_p.emplace_back(ix.v[k][i], g.RestorationDemandKw(i));
      cap_q.emplace_back(ix.v[k][i], g.RestorationDemandKvar(i));
      served.emplace_back(ix.v[k][i], g.RestorationDemandKw(i) / der.energy_kwh);
    }
    m.AddConstraint(cap_p, Sense::kLe, der.p_max_kw, "cap_p:" + DerTag(k), "capacity");
    m.AddConstraint(cap_q, Sense::kLe, der.q_max_kvar, "cap_q:" + DerTag(k), "capacity");
    if (!sc.enforce_time_equity) continue;

    // T_net - eps <= E_k / served_k <= T_net + eps, written on served_k / E_k.
    // The lower band only binds once DER k picks a critical load.
    m.AddConstraint(served, Sense::kLe, 1.0 / (t_net - eps), "equity_hi:" + DerTag(k), "equity");
    for (int j : loads) {
      Terms row = served;
      row.emplace_back(ix.v[k][j], -1.0 / (t_net + eps));
      m.AddConstraint(std::move(row), Sense::kGe, 0.0, "equity_lo:" + DerTag(k) + ":" + Tag(j), "equity");
    }
  }
}

void ModelBuilder::BuildObjective() {
  const FeederGraph& g = model_.graph;
  MilpModel& m = model_.milp;
  const ModelIndex& ix = model_.index;
  const double reward = static_cast<double>(g.num_ders()) * g.num_nodes();
  for (int k = 0; k < g.num_ders(); ++k) {
    const double weight = 1.0 - g.der(k).availability;
    for (int i = 0; i < g.num_nodes(); ++i) m.SetObjectiveCoefficient(ix.v[k][i], weight);
  }
  for (int i : g.CriticalLoads()) m.SetObjectiveCoefficient(ix.s[i], -reward);
}

RestorationModel BuildModel(const FeederGraph& graph, const ScenarioConfig& scenario) {
  ModelBuilder builder(graph, scenario);
  builder.BuildVariables();
  builder.AddConnectivityConstraints();
  builder.AddPowerflowConstraints();
  builder.AddOperationalConstraints();
  builder.BuildObjective();
  return std::move(builder).Release();
}

}  // namespace restore

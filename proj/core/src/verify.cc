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

#include "restore/verify.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <set>

#include "restore/error.h"
#include "restore/topology.h"

namespace restore {
namespace {

struct RsnTree {
  std::vector<int> order;  // root first, parents before children
  std::vector<int> parent;
  std::vector<int> parent_edge;
};

RsnTree BuildTree(const RsnPlan& rsn, const FeederGraph& graph) {
  RsnTree tree;
  tree.parent.assign(graph.num_nodes(), -1);
  tree.parent_edge.assign(graph.num_nodes(), -1);
  const int root = graph.NodeIndex(rsn.der_node);
  if (root < 0) throw SolutionError("unknown DER node " + rsn.der_node);
  std::vector<std::vector<int>> children(graph.num_nodes());
  for (const EdgeRef& ref : rsn.edges) {
    const int e = graph.FindEdge(ref.first, ref.second);
    if (e < 0) throw SolutionError("RSN of DER " + rsn.der_node + " uses unknown edge " + ref.first + "-" + ref.second);
    const int u = graph.NodeIndex(ref.first);
    const int v = graph.NodeIndex(ref.second);
    if (tree.parent[v] >= 0 || v == root) throw SolutionError("RSN of DER " + rsn.der_node + " is not a tree");
    tree.parent[v] = u;
    tree.parent_edge[v] = e;
    children[u].push_back(v);
  }
  tree.order.push_back(root);
  for (size_t head = 0; head < tree.order.size(); ++head) {
    for (int c : children[tree.order[head]]) tree.order.push_back(c);
  }
  if (tree.order.size() != rsn.nodes.size()) {
    throw SolutionError("RSN of DER " + rsn.der_node + " is not a tree rooted at its DER");
  }
  return tree;
}

NodeVoltages InNodeOrder(const RsnPlan& rsn, const FeederGraph& graph, const std::vector<double>& magnitude) {
  NodeVoltages out;
  for (const std::string& id : rsn.nodes) out.emplace_back(id, magnitude[graph.NodeIndex(id)]);
  return out;
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<RsnAudit> AuditRadiality(const RestorationPlan& plan, const FeederGraph& graph) {
  const LoopSet loops = FindLoops(graph);
  std::map<std::string, int> owner_count;
  for (const RsnPlan& rsn : plan.rsns) {
    for (const std::string& id : rsn.nodes) ++owner_count[id];
  }

  std::vector<RsnAudit> audits;
  for (const RsnPlan& rsn : plan.rsns) {
    RsnAudit audit;
    audit.der_node = rsn.der_node;
    auto flag = [&](const std::string& code, const std::string& subject, const std::string& message) {
      audit.radial_ok = false;
      audit.diagnostics.push_back({code, subject, message});
    };
    std::set<int> members;
    for (const std::string& id : rsn.nodes) {
      const int i = graph.NodeIndex(id);
      if (i < 0) {
        flag("unknown_node", id, "node " + id + " is not in the feeder");
        continue;
      }
      members.insert(i);
      if (owner_count[id] > 1) flag("overlap", id, "node " + id + " belongs to more than one RSN");
      if (graph.DerAt(i) >= 0 && id != rsn.der_node) flag("foreign_der", id, "RSN contains DER node " + id);
    }
    const int root = graph.NodeIndex(rsn.der_node);
    if (root < 0 || !members.count(root)) flag("missing_der", rsn.der_node, "RSN does not contain its DER");

    std::vector<std::vector<int>> adjacency(graph.num_nodes());
    std::set<int> energized;
    for (const EdgeRef& ref : rsn.edges) {
      const std::string label = ref.first + "-" + ref.second;
      const int e = graph.FindEdge(ref.first, ref.second);
      if (e < 0) {
        flag("unknown_edge", label, "edge " + label + " is not in the feeder");
        continue;
      }
      if (!energized.insert(e).second) flag("duplicate_edge", label, "edge " + label + " listed twice");
      if (graph.edge(e).faulted) flag("faulted_edge", label, "faulted edge " + label + " is energized");
      const int a = graph.EdgeFrom(e);
      const int b = graph.EdgeTo(e);
      if (!members.count(a) || !members.count(b)) {
        flag("edge_outside", label, "edge " + label + " leaves the RSN");
        continue;
      }
      adjacency[a].push_back(b);
      adjacency[b].push_back(a);
    }
    const size_t expected = members.empty() ? 0 : members.size() - 1;
    if (energized.size() > expected) {
      flag("cycle", rsn.der_node, std::to_string(energized.size()) + " edges for " + std::to_string(members.size()) +
                                      " nodes");
    }
    if (root >= 0 && members.count(root)) {
      std::set<int> seen{root};
      std::vector<int> stack{root};
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int w : adjacency[u]) {
          if (seen.insert(w).second) stack.push_back(w);
        }
      }
      for (int i : members) {
        if (!seen.count(i)) flag("disconnected", graph.id(i), "node " + graph.id(i) + " is not reached from the DER");
      }
    }

    for (int e = 0; e < graph.num_edges(); ++e) {
      const EdgeRecord& rec = graph.edge(e);
      if (rec.switchable || rec.normally_open || rec.faulted) continue;
      const bool a_in = members.count(graph.EdgeFrom(e)) > 0;
      const bool b_in = members.count(graph.EdgeTo(e)) > 0;
      if (a_in != b_in || (a_in && !energized.count(e))) {
        const std::string label = EdgeLabel(graph, e);
        flag("switch_coupling", label, "non-switchable edge " + label + " cannot be opened");
      }
    }

    std::map<std::string, int> selections;
    for (const LoopPathChoice& c : rsn.loop_paths) {
      ++selections[c.node];
      if (c.path != RouteTo(rsn, c.node)) {
        flag("loop_path", c.node, "selected path to " + c.node + " differs from the energized route");
      }
    }
    for (int i : members) {
      if (i == root || !loops.ContainsNode(i)) continue;
      const int count = selections.count(graph.id(i)) ? selections[graph.id(i)] : 0;
      if (count != 1) {
        flag("loop_path", graph.id(i),
             "loop node " + graph.id(i) + " has " + std::to_string(count) + " selected paths");
      }
    }
    audits.push_back(std::move(audit));
  }
  return audits;
}

SweepResult SweepPowerflow(const RsnPlan& rsn, const FeederGraph& graph, double v_ref, double tolerance,
                           int max_iterations) {
  using Complex = std::complex<double>;
  const RsnTree tree = BuildTree(rsn, graph);
  const int n = graph.num_nodes();
  const double base = graph.base_kva();
  std::vector<Complex> load(n), voltage(n, Complex(v_ref, 0.0)), receiving(n), current(n);
  double served = 0.0;
  for (int i : tree.order) {
    load[i] = Complex(graph.RestorationDemandKw(i), graph.RestorationDemandKvar(i)) / base;
    served += load[i].real();
  }

  SweepResult result;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    // Backward: receiving-end power of each line, losses folded upstream.
    std::vector<Complex> sending(n, Complex(0.0, 0.0));
    for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
      const int j = *it;
      receiving[j] = load[j] + sending[j];
      if (tree.parent[j] < 0) continue;
      const EdgeRecord& line = graph.edge(tree.parent_edge[j]);
      const Complex z(line.r_pu, line.x_pu);
      const double v2 = std::norm(voltage[j]);
      sending[tree.parent[j]] += receiving[j] + z * std::norm(receiving[j]) / v2;
    }
    // Forward: voltages from the source.
    double change = 0.0;
    for (int j : tree.order) {
      if (tree.parent[j] < 0) continue;
      const EdgeRecord& line = graph.edge(tree.parent_edge[j]);
      const Complex z(line.r_pu, line.x_pu);
      current[j] = std::conj(receiving[j] / voltage[j]);
      const Complex updated = voltage[tree.parent[j]] - z * current[j];
      change = std::max(change, std::abs(updated - voltage[j]));
      voltage[j] = updated;
    }
    result.iterations = iter;
    result.last_change = change;
    for (int j : tree.order) {
      if (std::abs(voltage[j]) < 0.5) result.collapsed = true;
    }
    if (result.collapsed) break;
    if (change < tolerance) {
      result.converged = true;
      break;
    }
  }

  double loss = 0.0;
  for (int j : tree.order) {
    if (tree.parent[j] < 0) continue;
    const EdgeRecord& line = graph.edge(tree.parent_edge[j]);
    loss += line.r_pu * std::norm(receiving[j]) / std::norm(voltage[j]);
  }
  std::vector<double> magnitude(n, 0.0);
  for (int j : tree.order) magnitude[j] = std::abs(voltage[j]);
  result.voltages = InNodeOrder(rsn, graph, magnitude);
  result.loss_kw = loss * base;
  result.loss_percent = served > 0.0 ? 100.0 * loss / served : 0.0;
  return result;
}

NodeVoltages LinearVoltages(const RsnPlan& rsn, const FeederGraph& graph, double v_ref) {
  const RsnTree tree = BuildTree(rsn, graph);
  const int n = graph.num_nodes();
  const double base = graph.base_kva();
  std::vector<double> p(n, 0.0), q(n, 0.0), v(n, v_ref);
  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    const int j = *it;
    p[j] += graph.RestorationDemandKw(j) / base;
    q[j] += graph.RestorationDemandKvar(j) / base;
    if (tree.parent[j] >= 0) {
      p[tree.parent[j]] += p[j];
      q[tree.parent[j]] += q[j];
    }
  }
  for (int j : tree.order) {
    if (tree.parent[j] < 0) continue;
    const EdgeRecord& line = graph.edge(tree.parent_edge[j]);
    v[j] = v[tree.parent[j]] - (line.r_pu * p[j] + line.x_pu * q[j]) / v_ref;
  }
  return InNodeOrder(rsn, graph, v);
}

double RestorationPathReliability(double p_success, int lines) { return std::pow(p_success, lines); }

double RsnReliability(const RsnPlan& rsn, const FeederGraph& graph) {
  double product = 1.0;
  for (const EdgeRef& ref : rsn.edges) {
    const int e = graph.FindEdge(ref.first, ref.second);
    if (e < 0) throw SolutionError("unknown edge " + ref.first + "-" + ref.second);
    product *= graph.edge(e).p_success;
  }
  return product;
}

double RsnUnavailability(const RsnPaths& rsn) {
  std::set<std::string> nodes;
  for (const auto& path : rsn.paths) nodes.insert(path.begin(), path.end());
  return (1.0 - rsn.availability) * static_cast<double>(nodes.size());
}

UnavailabilityMetrics EffectiveUnavailability(std::span<const RsnPaths> rsns, int picked_critical_loads,
                                              double pickup_reward) {
  UnavailabilityMetrics m;
  for (const RsnPaths& rsn : rsns) {
    std::set<std::string> nodes;
    for (const auto& path : rsn.paths) nodes.insert(path.begin(), path.end());
    m.u_p += static_cast<double>(nodes.size());
    m.u_r += RsnUnavailability(rsn);
  }
  m.u_rc = m.u_r - pickup_reward * picked_critical_loads;
  return m;
}

UnavailabilityMetrics EffectiveUnavailability(const RestorationPlan& plan, const FeederGraph& graph) {
  std::vector<RsnPaths> rsns;
  int picked = 0;
  for (const RsnPlan& rsn : plan.rsns) {
    const int k = graph.DerAt(graph.NodeIndex(rsn.der_node));
    rsns.push_back(RsnPaths{graph.der(k).availability, {rsn.nodes}});
    for (const std::string& id : rsn.nodes) picked += graph.IsCritical(graph.NodeIndex(id)) ? 1 : 0;
  }
  const double reward = static_cast<double>(graph.num_ders()) * graph.num_nodes();
  return EffectiveUnavailability(rsns, picked, reward);
}

TimeMetrics RestorationTimes(const RestorationPlan& plan, const FeederGraph& graph) {
  TimeMetrics t;
  double reserve = 0.0;
  for (const DerUnit& d : graph.ders()) reserve += d.energy_kwh;
  const double demand = graph.TotalCriticalDemandKw();
  t.t_net_hours = demand > 0.0 ? reserve / demand : kInf;
  double bias = 0.0;
  int active = 0;
  for (const RsnPlan& rsn : plan.rsns) {
    const int k = graph.DerAt(graph.NodeIndex(rsn.der_node));
    double served = 0.0;
    for (const std::string& id : rsn.nodes) served += graph.RestorationDemandKw(graph.NodeIndex(id));
    const double hours = served > 0.0 ? graph.der(k).energy_kwh / served : kInf;
    t.hours.push_back(hours);
    if (served > 0.0) {
      bias += std::abs(t.t_net_hours - hours);
      ++active;
    }
  }
  t.average_bias = active > 0 ? bias / active : 0.0;
  return t;
}

SurvivalEstimate MonteCarloSurvival(std::span<const double> failure_probabilities, long samples,
                                    std::uint64_t seed) {
  if (samples < 1) throw InputError("samples must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long survived = 0;
  for (long s = 0; s < samples; ++s) {
    bool alive = true;
    for (double q : failure_probabilities) {
      if (unit(rng) < q) alive = false;
    }
    survived += alive ? 1 : 0;
  }
  SurvivalEstimate out;
  out.samples = samples;
  out.estimate = static_cast<double>(survived) / static_cast<double>(samples);
  out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

SurvivalEstimate MonteCarloSurvival(const RsnPlan& rsn, const FeederGraph& graph, long samples, std::uint64_t seed) {
  std::vector<double> q;
  for (const EdgeRef& ref : rsn.edges) {
    const int e = graph.FindEdge(ref.first, ref.second);
    if (e < 0) throw SolutionError("unknown edge " + ref.first + "-" + ref.second);
    q.push_back(1.0 - graph.edge(e).p_success);
  }
  return MonteCarloSurvival(q, samples, seed);
}

VerificationReport Verify(const RestorationPlan& plan, const FeederGraph& graph, const VerifyOptions& options) {
  VerificationReport report;
  report.samples = options.samples;
  report.seed = options.seed;
  const std::vector<RsnAudit> audits = AuditRadiality(plan, graph);
  report.times = RestorationTimes(plan, graph);
  report.metrics = EffectiveUnavailability(plan, graph);
  for (size_t r = 0; r < plan.rsns.size(); ++r) {
    const RsnPlan& rsn = plan.rsns[r];
    RsnReport out;
    out.audit = audits[r];
    out.restoration_hours = report.times.hours[r];
    const int k = graph.DerAt(graph.NodeIndex(rsn.der_node));
    out.unavailability = (1.0 - graph.der(k).availability) * static_cast<double>(rsn.nodes.size());
    report.picked_critical_loads += static_cast<int>(rsn.critical_loads.size());
    if (out.audit.radial_ok) {
      out.sweep = SweepPowerflow(rsn, graph, options.v_ref, options.sweep_tolerance, options.max_iterations);
      out.linear_voltages = LinearVoltages(rsn, graph, options.v_ref);
      for (size_t i = 0; i < out.linear_voltages.size(); ++i) {
        out.max_linear_error =
            std::max(out.max_linear_error, std::abs(out.linear_voltages[i].second - out.sweep.voltages[i].second));
      }
      out.reliability = RsnReliability(rsn, graph);
      out.survival = MonteCarloSurvival(rsn, graph, options.samples, DeriveSeed(options.seed, r));
      report.ok = report.ok && out.sweep.converged;
    } else {
      report.ok = false;
    }
    report.total_reliability *= out.reliability;
    report.rsns.push_back(std::move(out));
  }
  return report;
}

}  // namespace restore

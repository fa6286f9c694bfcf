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

#include "restore/feeder.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "restore/error.h"
#include "restore/node_id.h"

namespace restore {

FeederGraph::FeederGraph(double base_kv, double base_kva, std::vector<NodeRecord> nodes,
                         std::vector<EdgeRecord> edges, std::vector<DerUnit> ders)
    : base_kv_(base_kv),
      base_kva_(base_kva),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      ders_(std::move(ders)) {
  id_index_.reserve(nodes_.size());
  for (int i = 0; i < num_nodes(); ++i) id_index_.emplace_back(nodes_[i].id, i);
  std::sort(id_index_.begin(), id_index_.end());
  for (size_t i = 1; i < id_index_.size(); ++i) {
    if (id_index_[i].first == id_index_[i - 1].first) {
      throw InputError("duplicate node id \"" + id_index_[i].first + "\"");
    }
  }

  adjacency_.assign(nodes_.size(), {});
  endpoints_.reserve(edges_.size());
  for (int e = 0; e < num_edges(); ++e) {
    const EdgeRecord& rec = edges_[e];
    const int a = NodeIndex(rec.from);
    const int b = NodeIndex(rec.to);
    if (a < 0) throw InputError("edge references unknown node \"" + rec.from + "\"");
    if (b < 0) throw InputError("edge references unknown node \"" + rec.to + "\"");
    if (a == b) throw InputError("edge " + rec.from + "-" + rec.to + " is a self-loop");
    if (FindEdge(a, b) >= 0) {
      throw InputError("duplicate edge " + rec.from + "-" + rec.to);
    }
    endpoints_.emplace_back(a, b);
    adjacency_[a].push_back({b, e});
    adjacency_[b].push_back({a, e});
  }

  der_at_.assign(nodes_.size(), -1);
  for (int k = 0; k < num_ders(); ++k) {
    const int i = NodeIndex(ders_[k].node);
    if (i < 0) throw InputError("DER references unknown node \"" + ders_[k].node + "\"");
    if (der_at_[i] >= 0) throw InputError("more than one DER at node \"" + ders_[k].node + "\"");
    der_at_[i] = k;
    der_nodes_.push_back(i);
  }

  sorted_nodes_.resize(nodes_.size());
  std::iota(sorted_nodes_.begin(), sorted_nodes_.end(), 0);
  std::sort(sorted_nodes_.begin(), sorted_nodes_.end(),
            [this](int a, int b) { return NodeIdLess(nodes_[a].id, nodes_[b].id); });
}

int FeederGraph::NodeIndex(std::string_view id) const {
  auto it = std::lower_bound(
      id_index_.begin(), id_index_.end(), id,
      [](const std::pair<std::string, int>& entry, std::string_view key) { return entry.first < key; });
  if (it == id_index_.end() || it->first != id) return -1;
  return it->second;
}

int FeederGraph::FindEdge(int a, int b) const {
  if (a < 0 || b < 0) return -1;
  for (const Incidence& inc : adjacency_[a]) {
    if (inc.neighbor == b) return inc.edge;
  }
  return -1;
}

int FeederGraph::FindEdge(std::string_view a, std::string_view b) const {
  return FindEdge(NodeIndex(a), NodeIndex(b));
}

std::vector<int> FeederGraph::CriticalLoads() const {
  std::vector<int> out;
  for (int i : sorted_nodes_) {
    if (nodes_[i].is_critical) out.push_back(i);
  }
  return out;
}

double FeederGraph::TotalCriticalDemandKw() const {
  double total = 0.0;
  for (const NodeRecord& n : nodes_) {
    if (n.is_critical) total += n.demand_p_kw;
  }
  return total;
}

FeederGraph ApplyScenario(const FeederGraph& graph, const ScenarioConfig& scenario) {
  std::vector<EdgeRecord> edges = graph.edges();
  for (const EdgeRef& ref : scenario.faulted_edges) {
    int e = graph.FindEdge(ref.first, ref.second);
    if (e < 0) {
      const EdgeRef resolved = ResolveEdgeRef(graph, ref.first + "-" + ref.second);
      e = graph.FindEdge(resolved.first, resolved.second);
    }
    edges[e].faulted = true;
  }
  if (scenario.p_success_override) {
    for (EdgeRecord& rec : edges) rec.p_success = *scenario.p_success_override;
  }
  return FeederGraph(graph.base_kv(), graph.base_kva(), graph.nodes(), std::move(edges), graph.ders());
}

namespace {

bool HasWhitespace(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

bool InRange(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

}  // namespace

std::vector<Diagnostic> ValidateFeeder(const FeederGraph& graph) {
  std::vector<Diagnostic> out;
  auto add = [&out](std::string code, std::string subject, std::string message) {
    out.push_back({std::move(code), std::move(subject), std::move(message)});
  };

  if (!(graph.base_kv() > 0.0)) add("range", "base_kv", "base_kv must be positive");
  if (!(graph.base_kva() > 0.0)) add("range", "base_kva", "base_kva must be positive");

  for (const NodeRecord& n : graph.nodes()) {
    if (n.id.empty() || HasWhitespace(n.id)) {
      add("range", n.id, "node id must be non-empty and contain no whitespace");
    }
    if (!InRange(n.demand_p_kw, 0.0, INFINITY)) add("range", n.id, "p_kw must be >= 0");
    if (!InRange(n.demand_q_kvar, 0.0, INFINITY)) add("range", n.id, "q_kvar must be >= 0");
  }
  for (int e = 0; e < graph.num_edges(); ++e) {
    const EdgeRecord& rec = graph.edge(e);
    const std::string label = EdgeLabel(graph, e);
    if (!InRange(rec.r_pu, 0.0, INFINITY)) add("range", label, "r_pu must be >= 0");
    if (!InRange(rec.x_pu, 0.0, INFINITY)) add("range", label, "x_pu must be >= 0");
    if (!InRange(rec.p_success, 0.0, 1.0)) add("range", label, "p_success must lie in [0, 1]");
  }
  for (int k = 0; k < graph.num_ders(); ++k) {
    const DerUnit& d = graph.der(k);
    if (!(d.p_max_kw > 0.0) || !std::isfinite(d.p_max_kw)) add("range", d.node, "p_max_kw must be > 0");
    if (!InRange(d.q_max_kvar, 0.0, INFINITY)) add("range", d.node, "q_max_kvar must be >= 0");
    if (!(d.energy_kwh > 0.0) || !std::isfinite(d.energy_kwh)) add("range", d.node, "energy_kwh must be > 0");
    if (!(d.availability > 0.0 && d.availability <= 1.0)) {
      add("range", d.node, "availability must lie in (0, 1]");
    }
    const int i = graph.DerNode(k);
    bool reaches = false;
    for (const Incidence& inc : graph.incident(i)) {
      if (!graph.edge(inc.edge).faulted) reaches = true;
    }
    if (!reaches) add("der_isolated", d.node, "DER isolated: every incident line is faulted");
  }
  return out;
}

void CheckScenario(const ScenarioConfig& s) {
  if (!(s.v_min > 0.0 && s.v_min < s.v_ref && s.v_ref <= s.v_max)) {
    throw InputError("v_min/v_ref/v_max must satisfy 0 < v_min < v_ref <= v_max");
  }
  if (s.enforce_time_equity && !(s.epsilon_hours && *s.epsilon_hours > 0.0)) {
    throw InputError("epsilon_hours must be positive when enforce_time_equity is set");
  }
  if (s.epsilon_hours && !(*s.epsilon_hours > 0.0)) throw InputError("epsilon_hours must be positive");
  if (s.big_m && !(*s.big_m > 0.0 && std::isfinite(*s.big_m))) throw InputError("big_m must be positive");
  if (s.max_paths_per_loop < 1) throw InputError("max_paths_per_loop must be >= 1");
  if (s.p_success_override && !InRange(*s.p_success_override, 0.0, 1.0)) {
    throw InputError("p_success_override must lie in [0, 1]");
  }
}

EdgeRef ResolveEdgeRef(const FeederGraph& graph, std::string_view text) {
  std::vector<EdgeRef> matches;
  for (size_t pos = text.find('-'); pos != std::string_view::npos; pos = text.find('-', pos + 1)) {
    std::string a(text.substr(0, pos));
    std::string b(text.substr(pos + 1));
    if (graph.FindEdge(a, b) >= 0) matches.emplace_back(std::move(a), std::move(b));
  }
  if (matches.empty()) throw InputError("unknown edge reference \"" + std::string(text) + "\"");
  if (matches.size() > 1) throw InputError("ambiguous edge reference \"" + std::string(text) + "\"");
  return matches.front();
}

std::string EdgeLabel(const FeederGraph& graph, int e) {
  return graph.edge(e).from + "-" + graph.edge(e).to;
}

}  // namespace restore

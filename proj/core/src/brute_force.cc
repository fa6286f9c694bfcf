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

#include "restore/brute_force.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

#include "restore/error.h"
#include "restore/node_id.h"
#include "restore/topology.h"

namespace restore {
namespace {

constexpr double kTolerance = 1e-9;

using Mask = std::uint32_t;

struct Candidate {
  Mask nodes = 0;
  double cost = 0.0;
  std::vector<int> parent;
  std::vector<int> choice;  // catalog entry per node, -1 for non-loop nodes
};

class Search {
 public:
  Search(const FeederGraph& graph, const ScenarioConfig& scenario)
      : g_(ApplyScenario(graph, scenario)), scenario_(scenario) {
    loops_ = FindLoops(g_);
    for (int k = 0; k < g_.num_ders(); ++k) orientations_.push_back(Orient(g_, k, loops_));
    catalog_ = BuildPathCatalog(g_, loops_, scenario.max_paths_per_loop);
    reserve_ = 0.0;
    for (const DerUnit& d : g_.ders()) reserve_ += d.energy_kwh;
    const double demand = g_.TotalCriticalDemandKw();
    t_net_ = demand > 0.0 ? reserve_ / demand : kInf;
    reward_ = static_cast<double>(g_.num_ders()) * g_.num_nodes();
  }

  BruteForceResult Run();

 private:
  static bool Has(Mask m, int i) { return (m >> i) & 1U; }

  std::vector<int> Reachable(int k) const;
  bool Connected(int root, Mask s) const;
  bool PassesLocalRules(int k, Mask s) const;
  bool SelectPaths(int k, Mask s, Candidate& out) const;
  bool TreeIsValid(int k, Mask s, const std::vector<int>& parent) const;
  std::vector<Candidate> Enumerate(int k);
  RsnPlan ToRsn(int k, const Candidate& c) const;

  FeederGraph g_;
  ScenarioConfig scenario_;
  LoopSet loops_;
  std::vector<Orientation> orientations_;
  PathCatalog catalog_;
  double reserve_ = 0.0;
  double t_net_ = 0.0;
  double reward_ = 0.0;
  long checked_ = 0;
};

std::vector<int> Search::Reachable(int k) const {
  const int root = g_.DerNode(k);
  std::vector<bool> seen(g_.num_nodes(), false);
  std::vector<int> out{root};
  seen[root] = true;
  for (size_t head = 0; head < out.size(); ++head) {
    for (const Incidence& inc : g_.incident(out[head])) {
      if (g_.edge(inc.edge).faulted || seen[inc.neighbor] || g_.DerAt(inc.neighbor) >= 0) continue;
      seen[inc.neighbor] = true;
      out.push_back(inc.neighbor);
    }
  }
  return out;
}

bool Search::Connected(int root, Mask s) const {
  Mask seen = 1U << root;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const Incidence& inc : g_.incident(u)) {
      if (g_.edge(inc.edge).faulted || !Has(s, inc.neighbor) || Has(seen, inc.neighbor)) continue;
      seen |= 1U << inc.neighbor;
      stack.push_back(inc.neighbor);
    }
  }
  return seen == s;
}

bool Search::PassesLocalRules(int k, Mask s) const {
  for (int e = 0; e < g_.num_edges(); ++e) {
    const EdgeRecord& rec = g_.edge(e);
    const bool a = Has(s, g_.EdgeFrom(e));
    const bool b = Has(s, g_.EdgeTo(e));
    if (rec.faulted) {
      const bool inside_loops = loops_.ContainsNode(g_.EdgeFrom(e)) && loops_.ContainsNode(g_.EdgeTo(e));
      if (!inside_loops && a && b) return false;
    } else if (!rec.switchable && !rec.normally_open && a != b) {
      return false;
    }
  }
  const DerUnit& der = g_.der(k);
  double p = 0.0;
  double q = 0.0;
  int loads = 0;
  for (int i = 0; i < g_.num_nodes(); ++i) {
    if (!Has(s, i) || !g_.IsCritical(i)) continue;
    p += g_.RestorationDemandKw(i);
    q += g_.RestorationDemandKvar(i);
    ++loads;
  }
  if (p > der.p_max_kw + kTolerance || q > der.q_max_kvar + kTolerance) return false;
  if (scenario_.enforce_time_equity) {
    const double eps = *scenario_.epsilon_hours;
    const double rate = p / der.energy_kwh;
    if (rate > 1.0 / (t_net_ - eps) + kTolerance) return false;
    if (loads > 0 && rate < 1.0 / (t_net_ + eps) - kTolerance) return false;
  }
  return true;
}

bool Search::TreeIsValid(int k, Mask s, const std::vector<int>& parent) const {
  const int n = g_.num_nodes();
  const int root = g_.DerNode(k);
  // Depth-ordered walk: every member must reach the root without cycling.
  std::vector<int> depth(n, -1);
  depth[root] = 0;
  std::function<int(int, int)> depth_of = [&](int i, int guard) -> int {
    if (depth[i] >= 0) return depth[i];
    if (guard > n || parent[i] < 0 || !Has(s, parent[i])) return -1;
    const int d = depth_of(parent[i], guard + 1);
    if (d < 0) return -1;
    return depth[i] = d + 1;
  };
  for (int i = 0; i < n; ++i) {
    if (Has(s, i) && depth_of(i, 0) < 0) return false;
  }
  // Selected routes must be the routes the tree actually uses.
  for (int i = 0; i < n; ++i) {
    if (!Has(s, i) || i == root || !loops_.ContainsNode(i)) continue;
    std::vector<int> route{i};
    for (int at = i; at != root; at = parent[at]) route.push_back(parent[at]);
    std::reverse(route.begin(), route.end());
    bool found = false;
    for (int e : catalog_.For(k, i)) {
      if (catalog_.entries[e].nodes == route && catalog_.entries[e].pred() == parent[i]) found = true;
    }
    if (!found) return false;
  }
  // A non-switchable line between two energized nodes must carry power.
  for (int e = 0; e < g_.num_edges(); ++e) {
    const EdgeRecord& rec = g_.edge(e);
    if (rec.switchable || rec.normally_open || rec.faulted) continue;
    const int a = g_.EdgeFrom(e);
    const int b = g_.EdgeTo(e);
    if (Has(s, a) && Has(s, b) && parent[a] != b && parent[b] != a) return false;
  }
  // Linear voltage drop along the tree.
  const double base = g_.base_kva();
  std::vector<double> p(n, 0.0), q(n, 0.0);
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (Has(s, i)) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return depth[a] > depth[b]; });
  for (int i : order) {
    p[i] += g_.RestorationDemandKw(i) / base;
    q[i] += g_.RestorationDemandKvar(i) / base;
    if (i != root) {
      p[parent[i]] += p[i];
      q[parent[i]] += q[i];
    }
  }
  std::reverse(order.begin(), order.end());
  std::vector<double> v(n, 0.0);
  const double v0 = scenario_.v_ref;
  for (int i : order) {
    if (i == root) {
      v[i] = v0;
    } else {
      const EdgeRecord& line = g_.edge(g_.FindEdge(i, parent[i]));
      v[i] = v[parent[i]] - (line.r_pu * p[i] + line.x_pu * q[i]) / v0;
    }
    if (v[i] < scenario_.v_min - kTolerance || v[i] > scenario_.v_max + kTolerance) return false;
  }
  return true;
}

bool Search::SelectPaths(int k, Mask s, Candidate& out) const {
  const Orientation& o = orientations_[k];
  const int n = g_.num_nodes();
  std::vector<int> parent(n, -1);
  std::vector<int> choice(n, -1);
  std::vector<int> loop_members;
  std::vector<std::vector<int>> options;
  for (int i : g_.sorted_nodes()) {
    if (!Has(s, i) || i == o.root) continue;
    if (!loops_.ContainsNode(i)) {
      parent[i] = o.parent_of[i];
      continue;
    }
    std::vector<int> usable;
    for (int e : catalog_.For(k, i)) {
      const auto& nodes = catalog_.entries[e].nodes;
      if (std::all_of(nodes.begin(), nodes.end(), [&](int x) { return Has(s, x); })) usable.push_back(e);
    }
    if (usable.empty()) return false;
    loop_members.push_back(i);
    options.push_back(std::move(usable));
  }
  std::function<bool(size_t)> assign = [&](size_t pos) -> bool {
    if (pos == loop_members.size()) return TreeIsValid(k, s, parent);
    const int i = loop_members[pos];
    for (int e : options[pos]) {
      parent[i] = catalog_.entries[e].pred();
      choice[i] = e;
      if (assign(pos + 1)) return true;
    }
    return false;
  };
  if (!assign(0)) return false;
  out.parent = parent;
  out.choice = choice;
  return true;
}

std::vector<Candidate> Search::Enumerate(int k) {
  const int root = g_.DerNode(k);
  std::vector<int> others;
  for (int i : Reachable(k)) {
    if (i != root) others.push_back(i);
  }
  std::sort(others.begin(), others.end(), [&](int a, int b) { return NodeIdLess(g_.id(a), g_.id(b)); });
  const double weight = 1.0 - g_.der(k).availability;
  std::vector<Candidate> out;
  for (Mask pick = 0; pick < (1U << others.size()); ++pick) {
    Mask s = 1U << root;
    for (size_t t = 0; t < others.size(); ++t) {
      if ((pick >> t) & 1U) s |= 1U << others[t];
    }
    ++checked_;
    if (!Connected(root, s) || !PassesLocalRules(k, s)) continue;
    Candidate c;
    c.nodes = s;
    if (!SelectPaths(k, s, c)) continue;
    int loads = 0;
    int size = 0;
    for (int i = 0; i < g_.num_nodes(); ++i) {
      if (!Has(s, i)) continue;
      ++size;
      loads += g_.IsCritical(i) ? 1 : 0;
    }
    c.cost = weight * size - reward_ * loads;
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
  return out;
}

RsnPlan Search::ToRsn(int k, const Candidate& c) const {
  RsnPlan rsn;
  const int root = g_.DerNode(k);
  rsn.der_node = g_.id(root);
  std::vector<std::vector<int>> children(g_.num_nodes());
  for (int i : g_.sorted_nodes()) {
    if (Has(c.nodes, i) && i != root) children[c.parent[i]].push_back(i);
  }
  std::vector<int> queue{root};
  for (size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    rsn.nodes.push_back(g_.id(u));
    for (int ch : children[u]) {
      rsn.edges.push_back({g_.id(u), g_.id(ch)});
      queue.push_back(ch);
    }
  }
  for (int i : g_.sorted_nodes()) {
    if (c.choice[i] < 0) continue;
    const PathEntry& pe = catalog_.entries[c.choice[i]];
    LoopPathChoice choice{g_.id(i), pe.alpha, {}};
    for (int x : pe.nodes) choice.path.push_back(g_.id(x));
    rsn.loop_paths.push_back(std::move(choice));
  }
  return rsn;
}

BruteForceResult Search::Run() {
  const int m = g_.num_ders();
  std::vector<std::vector<Candidate>> lists;
  for (int k = 0; k < m; ++k) lists.push_back(Enumerate(k));

  BruteForceResult result;
  result.sets_checked = checked_;
  for (const auto& list : lists) {
    if (list.empty()) return result;
  }
  std::vector<double> tail_bound(m + 1, 0.0);
  for (int k = m - 1; k >= 0; --k) tail_bound[k] = tail_bound[k + 1] + lists[k].front().cost;

  double best = kInf;
  std::vector<int> pick(m, -1), best_pick;
  std::function<void(int, Mask, double)> dfs = [&](int k, Mask used, double cost) {
    if (k == m) {
      if (cost < best - 1e-12) {
        best = cost;
        best_pick = pick;
      }
      return;
    }
    for (size_t t = 0; t < lists[k].size(); ++t) {
      const Candidate& c = lists[k][t];
      if (cost + c.cost + tail_bound[k + 1] >= best - 1e-12) break;
      if (c.nodes & used) continue;
      pick[k] = static_cast<int>(t);
      dfs(k + 1, used | c.nodes, cost + c.cost);
    }
  };
  dfs(0, 0, 0.0);
  if (best_pick.empty()) return result;

  result.feasible = true;
  for (int k = 0; k < m; ++k) result.plan.rsns.push_back(ToRsn(k, lists[k][best_pick[k]]));
  FinalizePlan(g_, result.plan);
  result.plan.objective = result.plan.u_rc;
  result.objective = result.plan.u_rc;
  return result;
}

}  // namespace

BruteForceResult BruteForceRestore(const FeederGraph& graph, const ScenarioConfig& scenario) {
  if (graph.num_nodes() > kBruteForceMaxNodes || graph.num_ders() > kBruteForceMaxDers) {
    throw ModelError("brute force is limited to " + std::to_string(kBruteForceMaxNodes) + " nodes and " +
                     std::to_string(kBruteForceMaxDers) + " DERs");
  }
  if (graph.num_ders() == 0) throw ModelError("feeder has no DER");
  CheckScenario(scenario);
  if (scenario.enforce_time_equity) {
    double reserve = 0.0;
    for (const DerUnit& d : graph.ders()) reserve += d.energy_kwh;
    if (*scenario.epsilon_hours >= reserve / graph.TotalCriticalDemandKw()) {
      throw ModelError("equity band degenerate: epsilon must be below T_net");
    }
  }
  Search search(graph, scenario);
  return search.Run();
}

}  // namespace restore

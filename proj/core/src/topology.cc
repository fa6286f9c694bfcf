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

#include "restore/topology.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>

namespace restore {
namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

// rank[i] = position of node i in NodeIdLess order.
std::vector<int> NodeRanks(const FeederGraph& graph) {
  std::vector<int> rank(graph.num_nodes());
  const auto& sorted = graph.sorted_nodes();
  for (int r = 0; r < graph.num_nodes(); ++r) rank[sorted[r]] = r;
  return rank;
}

// Incident non-faulted edges of each node, neighbors in NodeIdLess order.
std::vector<std::vector<Incidence>> SortedLiveAdjacency(const FeederGraph& graph,
                                                        const std::vector<int>& rank) {
  std::vector<std::vector<Incidence>> adj(graph.num_nodes());
  for (int i = 0; i < graph.num_nodes(); ++i) {
    for (const Incidence& inc : graph.incident(i)) {
      if (!graph.edge(inc.edge).faulted) adj[i].push_back(inc);
    }
    std::sort(adj[i].begin(), adj[i].end(),
              [&rank](const Incidence& a, const Incidence& b) { return rank[a.neighbor] < rank[b.neighbor]; });
  }
  return adj;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int Find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void Unite(int a, int b) { parent[Find(a)] = Find(b); }
};

bool LexLess(const Path& a, const Path& b, const std::vector<int>& rank) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return rank[a[i]] < rank[b[i]];
  }
  return false;
}

class PathSearch {
 public:
  PathSearch(const FeederGraph& graph, std::span<const int> blocked)
      : graph_(graph), rank_(NodeRanks(graph)), adj_(SortedLiveAdjacency(graph, rank_)) {
    blocked_.assign(graph.num_nodes(), false);
    for (int b : blocked) blocked_[b] = true;
  }

  const std::vector<int>& rank() const { return rank_; }

  // Lexicographically smallest shortest path avoiding the masks.
  std::optional<Path> Shortest(int src, int dst, const std::vector<bool>& node_off,
                               const std::vector<bool>& edge_off) const {
    const int n = graph_.num_nodes();
    auto usable = [&](int node) { return !blocked_[node] && !node_off[node]; };
    if (!usable(src) || !usable(dst)) return std::nullopt;
    std::vector<int> dist(n, kUnreached);
    std::deque<int> queue{dst};
    dist[dst] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const Incidence& inc : adj_[u]) {
        if (edge_off[inc.edge] || !usable(inc.neighbor) || dist[inc.neighbor] != kUnreached) continue;
        dist[inc.neighbor] = dist[u] + 1;
        queue.push_back(inc.neighbor);
      }
    }
    if (dist[src] == kUnreached) return std::nullopt;
    Path path{src};
    int cur = src;
    while (cur != dst) {
      // adj_ is rank-sorted, so the first qualifying neighbor is the
      // lexicographically smallest continuation.
      for (const Incidence& inc : adj_[cur]) {
        if (!edge_off[inc.edge] && usable(inc.neighbor) && dist[inc.neighbor] == dist[cur] - 1) {
          cur = inc.neighbor;
          break;
        }
      }
      path.push_back(cur);
    }
    return path;
  }

  long Count(int src, int dst, long cap) const {
    std::vector<bool> on_path(graph_.num_nodes(), false);
    long count = 0;
    std::function<void(int)> dfs = [&](int u) {
      if (count >= cap) return;
      if (u == dst) {
        ++count;
        return;
      }
      on_path[u] = true;
      for (const Incidence& inc : adj_[u]) {
        if (!on_path[inc.neighbor] && !blocked_[inc.neighbor]) dfs(inc.neighbor);
      }
      on_path[u] = false;
    };
    if (!blocked_[src] && !blocked_[dst]) dfs(src);
    return count;
  }

 private:
  const FeederGraph& graph_;
  std::vector<int> rank_;
  std::vector<std::vector<Incidence>> adj_;
  std::vector<bool> blocked_;
};

std::vector<bool> LiveReach(const FeederGraph& graph, int root) {
  std::vector<bool> seen(graph.num_nodes(), false);
  std::deque<int> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const Incidence& inc : graph.incident(u)) {
      if (graph.edge(inc.edge).faulted || seen[inc.neighbor]) continue;
      seen[inc.neighbor] = true;
      queue.push_back(inc.neighbor);
    }
  }
  return seen;
}

}  // namespace

bool LoopSet::ContainsNode(int i) const { return std::binary_search(loop_nodes.begin(), loop_nodes.end(), i); }

bool LoopSet::ContainsEdge(int e) const { return std::binary_search(loop_edges.begin(), loop_edges.end(), e); }

LoopSet FindLoops(const FeederGraph& graph) {
  const int n = graph.num_nodes();
  const std::vector<int> rank = NodeRanks(graph);
  const auto adj = SortedLiveAdjacency(graph, rank);

  // Spanning forest; every non-tree live edge closes one fundamental cycle.
  std::vector<int> parent(n, -1), parent_edge(n, -1), depth(n, -1);
  std::vector<bool> tree_edge(graph.num_edges(), false);
  for (int start : graph.sorted_nodes()) {
    if (depth[start] >= 0) continue;
    depth[start] = 0;
    std::deque<int> queue{start};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const Incidence& inc : adj[u]) {
        if (depth[inc.neighbor] >= 0) continue;
        depth[inc.neighbor] = depth[u] + 1;
        parent[inc.neighbor] = u;
        parent_edge[inc.neighbor] = inc.edge;
        tree_edge[inc.edge] = true;
        queue.push_back(inc.neighbor);
      }
    }
  }

  std::vector<bool> on_cycle(graph.num_edges(), false);
  for (int e = 0; e < graph.num_edges(); ++e) {
    if (graph.edge(e).faulted || tree_edge[e]) continue;
    on_cycle[e] = true;
    int a = graph.EdgeFrom(e);
    int b = graph.EdgeTo(e);
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      on_cycle[parent_edge[a]] = true;
      a = parent[a];
    }
  }

  LoopSet loops;
  UnionFind uf(n);
  std::vector<bool> is_loop_node(n, false);
  for (int e = 0; e < graph.num_edges(); ++e) {
    if (!on_cycle[e]) continue;
    loops.loop_edges.push_back(e);
    is_loop_node[graph.EdgeFrom(e)] = true;
    is_loop_node[graph.EdgeTo(e)] = true;
    uf.Unite(graph.EdgeFrom(e), graph.EdgeTo(e));
  }
  std::map<int, std::vector<int>> groups;
  for (int i : graph.sorted_nodes()) {
    if (!is_loop_node[i]) continue;
    loops.loop_nodes.push_back(i);
    groups[uf.Find(i)].push_back(i);
  }
  std::sort(loops.loop_nodes.begin(), loops.loop_nodes.end());
  for (auto& [_, members] : groups) loops.clusters.push_back(std::move(members));
  std::sort(loops.clusters.begin(), loops.clusters.end(),
            [&rank](const std::vector<int>& a, const std::vector<int>& b) { return rank[a[0]] < rank[b[0]]; });
  return loops;
}

Orientation Orient(const FeederGraph& graph, int der, const LoopSet& loops) {
  const int n = graph.num_nodes();
  const std::vector<int> rank = NodeRanks(graph);
  const auto adj = SortedLiveAdjacency(graph, rank);

  Orientation o;
  o.der = der;
  o.root = graph.DerNode(der);
  o.reachable.assign(n, false);
  o.parent_of.assign(n, -1);
  o.parent_edge.assign(n, -1);
  o.children_of.assign(n, {});
  o.loop_handled.assign(n, false);

  std::vector<int> bfs_parent(n, -1), bfs_edge(n, -1);
  std::deque<int> queue{o.root};
  o.reachable[o.root] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    o.bfs_order.push_back(u);
    for (const Incidence& inc : adj[u]) {
      if (o.reachable[inc.neighbor]) continue;
      o.reachable[inc.neighbor] = true;
      bfs_parent[inc.neighbor] = u;
      bfs_edge[inc.neighbor] = inc.edge;
      queue.push_back(inc.neighbor);
    }
  }

  for (int i : o.bfs_order) {
    if (i == o.root) continue;
    const bool entry = loops.ContainsNode(i) && !loops.ContainsEdge(bfs_edge[i]);
    if (!loops.ContainsNode(i) || entry) {
      o.parent_of[i] = bfs_parent[i];
      o.parent_edge[i] = bfs_edge[i];
      o.children_of[bfs_parent[i]].push_back(i);
    } else {
      o.loop_handled[i] = true;
    }
  }
  return o;
}

std::vector<Path> EnumeratePaths(const FeederGraph& graph, int source, int target, int k,
                                 std::span<const int> blocked) {
  std::vector<Path> accepted;
  if (k <= 0) return accepted;
  if (source == target) {
    if (std::find(blocked.begin(), blocked.end(), source) == blocked.end()) accepted.push_back({source});
    return accepted;
  }
  PathSearch search(graph, blocked);
  const auto& rank = search.rank();
  std::vector<bool> node_off(graph.num_nodes(), false);
  std::vector<bool> edge_off(graph.num_edges(), false);

  auto first = search.Shortest(source, target, node_off, edge_off);
  if (!first) return accepted;
  accepted.push_back(std::move(*first));

  auto less = [&rank](const Path& a, const Path& b) { return LexLess(a, b, rank); };
  std::set<Path, decltype(less)> candidates(less);

  while (static_cast<int>(accepted.size()) < k) {
    const Path& last = accepted.back();
    for (size_t i = 0; i + 1 < last.size(); ++i) {
      const int spur = last[i];
      std::fill(node_off.begin(), node_off.end(), false);
      std::fill(edge_off.begin(), edge_off.end(), false);
      for (const Path& p : accepted) {
        if (p.size() > i + 1 && std::equal(p.begin(), p.begin() + i + 1, last.begin())) {
          edge_off[graph.FindEdge(p[i], p[i + 1])] = true;
        }
      }
      for (size_t j = 0; j < i; ++j) node_off[last[j]] = true;
      auto spur_path = search.Shortest(spur, target, node_off, edge_off);
      if (!spur_path) continue;
      Path total(last.begin(), last.begin() + i);
      total.insert(total.end(), spur_path->begin(), spur_path->end());
      if (std::find(accepted.begin(), accepted.end(), total) == accepted.end()) {
        candidates.insert(std::move(total));
      }
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return accepted;
}

long CountSimplePaths(const FeederGraph& graph, int source, int target, long cap, std::span<const int> blocked) {
  return PathSearch(graph, blocked).Count(source, target, cap);
}

std::span<const int> PathCatalog::For(int der, int target) const {
  auto it = by_pair_.find({der, target});
  if (it == by_pair_.end()) return {};
  return it->second;
}

int PathCatalog::Find(int der, const Path& nodes) const {
  if (nodes.empty()) return -1;
  for (int e : For(der, nodes.back())) {
    if (entries[e].nodes == nodes) return e;
  }
  return -1;
}

std::span<const int> PathCatalog::Extensions(int entry) const { return extensions_[entry]; }

std::span<const int> PathCatalog::ByPred(int der, int node) const {
  auto it = by_pred_.find({der, node});
  if (it == by_pred_.end()) return {};
  return it->second;
}

void PathCatalog::Reindex() {
  by_pair_.clear();
  by_pred_.clear();
  extensions_.assign(entries.size(), {});
  for (int e = 0; e < static_cast<int>(entries.size()); ++e) {
    by_pair_[{entries[e].der, entries[e].target}].push_back(e);
    by_pred_[{entries[e].der, entries[e].pred()}].push_back(e);
  }
  for (int e = 0; e < static_cast<int>(entries.size()); ++e) {
    const PathEntry& entry = entries[e];
    if (entry.nodes.size() < 3) continue;
    const Path prefix(entry.nodes.begin(), entry.nodes.end() - 1);
    const int parent = Find(entry.der, prefix);
    if (parent >= 0) extensions_[parent].push_back(e);
  }
}

PathCatalog BuildPathCatalog(const FeederGraph& graph, const LoopSet& loops, int k) {
  PathCatalog catalog;
  for (int der = 0; der < graph.num_ders(); ++der) {
    const int root = graph.DerNode(der);
    const std::vector<bool> reach = LiveReach(graph, root);
    std::vector<int> blocked;
    for (int other = 0; other < graph.num_ders(); ++other) {
      if (other != der) blocked.push_back(graph.DerNode(other));
    }
    for (int j : graph.sorted_nodes()) {
      if (!loops.ContainsNode(j) || !reach[j] || j == root || graph.DerAt(j) >= 0) continue;
      std::vector<Path> paths = EnumeratePaths(graph, root, j, k + 1, blocked);
      if (static_cast<int>(paths.size()) > k) {
        paths.resize(k);
        const long total = CountSimplePaths(graph, root, j, 100000, blocked);
        catalog.diagnostics.push_back(
            {"paths_truncated", graph.id(j),
             "paths from DER " + graph.der(der).node + " to node " + graph.id(j) + " truncated to " +
                 std::to_string(k) + " of " + (total >= 100000 ? std::string(">=100000") : std::to_string(total))});
      }
      int alpha = 0;
      for (Path& p : paths) {
        PathEntry entry;
        entry.der = der;
        entry.target = j;
        entry.alpha = ++alpha;
        for (size_t s = 0; s + 1 < p.size(); ++s) entry.edges.push_back(graph.FindEdge(p[s], p[s + 1]));
        entry.nodes = std::move(p);
        catalog.entries.push_back(std::move(entry));
      }
    }
  }
  catalog.Reindex();
  return catalog;
}

}  // namespace restore

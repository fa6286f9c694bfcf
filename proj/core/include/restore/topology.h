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

#ifndef RESTORE_TOPOLOGY_H_
#define RESTORE_TOPOLOGY_H_

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "restore/feeder.h"

namespace restore {

// Nodes and edges lying on at least one cycle of the non-faulted graph
// (normally-open ties included). Overlapping cycles are merged into one
// cluster per connected group.
struct LoopSet {
  std::vector<int> loop_nodes;  // sorted node indices
  std::vector<int> loop_edges;  // sorted edge indices
  std::vector<std::vector<int>> clusters;

  bool empty() const { return loop_edges.empty(); }
  bool ContainsNode(int i) const;
  bool ContainsEdge(int e) const;
};

LoopSet FindLoops(const FeederGraph& graph);

// Breadth-first orientation of the non-faulted graph rooted at a DER.
// Neighbors are visited in NodeIdLess order so the result is deterministic.
struct Orientation {
  int der = -1;
  int root = -1;
  std::vector<bool> reachable;
  // Parent node / connecting edge for reachable non-loop nodes and loop
  // entry points; -1 elsewhere.
  std::vector<int> parent_of;
  std::vector<int> parent_edge;
  std::vector<std::vector<int>> children_of;
  // Loop nodes whose supply route is chosen through the path catalog
  // (every reachable loop node except the root and the entry points).
  std::vector<bool> loop_handled;
  std::vector<int> bfs_order;

  bool IsEntry(int i) const { return i != root && parent_of[i] >= 0 && !loop_handled[i]; }
};

// An isolated DER yields a singleton orientation (validation reports it).
Orientation Orient(const FeederGraph& graph, int der, const LoopSet& loops);

using Path = std::vector<int>;

// Up to `k` loopless paths from `source` to `target` over non-faulted
// edges (Yen's algorithm on hop count), in nondecreasing hop count with
// ties broken lexicographically by node-id sequence. Nodes in `blocked`
// are never visited. Empty when `target` is unreachable.
std::vector<Path> EnumeratePaths(const FeederGraph& graph, int source, int target, int k,
                                 std::span<const int> blocked = {});

// Number of simple paths, counting stops at `cap`.
long CountSimplePaths(const FeederGraph& graph, int source, int target, long cap,
                      std::span<const int> blocked = {});

struct PathEntry {
  int der = -1;
  int target = -1;
  int alpha = 0;  // 1-based within (der, target)
  Path nodes;     // DER node first, target last
  std::vector<int> edges;

  int n_parents() const { return static_cast<int>(nodes.size()) - 1; }
  int pred() const { return nodes[nodes.size() - 2]; }
  int last_edge() const { return edges.back(); }
  std::span<const int> parents() const { return {nodes.data(), nodes.size() - 1}; }
};

// Candidate restoration paths for every (DER, loop node) pair. Paths that
// cross another DER's node are skipped.
class PathCatalog {
 public:
  std::vector<PathEntry> entries;
  std::vector<Diagnostic> diagnostics;  // truncation notices

  // Entry indices for (der, target), ordered by alpha.
  std::span<const int> For(int der, int target) const;
  // Entry index whose node sequence equals `nodes`, or -1.
  int Find(int der, const Path& nodes) const;
  // Entries whose path is `entry`'s path extended by one node.
  std::span<const int> Extensions(int entry) const;
  // Entries of `der` whose predecessor is `node`.
  std::span<const int> ByPred(int der, int node) const;

  void Reindex();

 private:
  std::map<std::pair<int, int>, std::vector<int>> by_pair_;
  std::map<std::pair<int, int>, std::vector<int>> by_pred_;
  std::vector<std::vector<int>> extensions_;
};

PathCatalog BuildPathCatalog(const FeederGraph& graph, const LoopSet& loops, int k);

}  // namespace restore

#endif  // RESTORE_TOPOLOGY_H_

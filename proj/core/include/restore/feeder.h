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

#ifndef RESTORE_FEEDER_H_
#define RESTORE_FEEDER_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace restore {

struct NodeRecord {
  std::string id;
  double demand_p_kw = 0.0;
  double demand_q_kvar = 0.0;
  bool is_critical = false;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

// A distribution line. r/x are per-unit on the feeder base. `p_success` is
// the probability that the line survives the event (q_e = 1 - p_success).
struct EdgeRecord {
  std::string from;
  std::string to;
  double r_pu = 0.0;
  double x_pu = 0.0;
  bool switchable = true;
  bool normally_open = false;
  bool faulted = false;
  double p_success = 1.0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct DerUnit {
  std::string node;
  double p_max_kw = 0.0;
  double q_max_kvar = 0.0;
  double energy_kwh = 0.0;
  double availability = 1.0;

  friend bool operator==(const DerUnit&, const DerUnit&) = default;
};

using EdgeRef = std::pair<std::string, std::string>;

struct ScenarioConfig {
  std::vector<EdgeRef> faulted_edges;
  std::optional<double> epsilon_hours;
  bool enforce_time_equity = false;
  double v_min = 0.95;
  double v_max = 1.05;
  double v_ref = 1.0;
  // Overrides the default Big-M bounds (flows and voltages, per-unit).
  std::optional<double> big_m;
  int max_paths_per_loop = 8;
  std::optional<double> p_success_override;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct Incidence {
  int neighbor;
  int edge;
};

// Immutable feeder model. Construction resolves edge endpoints and DER
// locations to dense indices and rejects structural defects (duplicate
// ids, dangling endpoints, duplicate edges, two DERs on one node). Range
// invariants (probabilities, impedances, ...) are enforced by ParseFeeder
// and reported by ValidateFeeder.
class FeederGraph {
 public:
  FeederGraph() = default;
  FeederGraph(double base_kv, double base_kva, std::vector<NodeRecord> nodes,
              std::vector<EdgeRecord> edges, std::vector<DerUnit> ders);

  double base_kv() const { return base_kv_; }
  double base_kva() const { return base_kva_; }
  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const std::vector<DerUnit>& ders() const { return ders_; }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_ders() const { return static_cast<int>(ders_.size()); }

  const NodeRecord& node(int i) const { return nodes_[i]; }
  const EdgeRecord& edge(int e) const { return edges_[e]; }
  const DerUnit& der(int k) const { return ders_[k]; }
  const std::string& id(int i) const { return nodes_[i].id; }

  // -1 when absent.
  int NodeIndex(std::string_view id) const;
  int FindEdge(int a, int b) const;
  int FindEdge(std::string_view a, std::string_view b) const;
  int EdgeFrom(int e) const { return endpoints_[e].first; }
  int EdgeTo(int e) const { return endpoints_[e].second; }
  int OtherEnd(int e, int node) const {
    return endpoints_[e].first == node ? endpoints_[e].second : endpoints_[e].first;
  }

  // All incident edges, faulted or not.
  const std::vector<Incidence>& incident(int i) const { return adjacency_[i]; }

  // Node index of DER k.
  int DerNode(int k) const { return der_nodes_[k]; }
  // DER index located at node i, or -1.
  int DerAt(int i) const { return der_at_[i]; }

  std::vector<int> CriticalLoads() const;
  bool IsCritical(int i) const { return nodes_[i].is_critical; }

  // Demand counted during restoration: non-critical loads are disconnected
  // beforehand and contribute nothing.
  double RestorationDemandKw(int i) const {
    return nodes_[i].is_critical ? nodes_[i].demand_p_kw : 0.0;
  }
  double RestorationDemandKvar(int i) const {
    return nodes_[i].is_critical ? nodes_[i].demand_q_kvar : 0.0;
  }
  double TotalCriticalDemandKw() const;

  // Nodes sorted by NodeIdLess; used wherever a deterministic order matters.
  const std::vector<int>& sorted_nodes() const { return sorted_nodes_; }

  friend bool operator==(const FeederGraph& a, const FeederGraph& b) {
    return a.base_kv_ == b.base_kv_ && a.base_kva_ == b.base_kva_ && a.nodes_ == b.nodes_ &&
           a.edges_ == b.edges_ && a.ders_ == b.ders_;
  }

 private:
  double base_kv_ = 0.0;
  double base_kva_ = 0.0;
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::vector<DerUnit> ders_;

  std::vector<std::pair<int, int>> endpoints_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<int> der_nodes_;
  std::vector<int> der_at_;
  std::vector<int> sorted_nodes_;
  std::vector<std::pair<std::string, int>> id_index_;  // sorted by id
};

// Returns a copy of `graph` with the scenario's faults marked and the
// optional uniform survival probability applied. Throws InputError for an
// edge reference that does not exist.
FeederGraph ApplyScenario(const FeederGraph& graph, const ScenarioConfig& scenario);

struct Diagnostic {
  std::string code;     // e.g. "range", "der_isolated"
  std::string subject;  // offending node/edge/DER
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Checks record invariants and DER reachability; never throws.
std::vector<Diagnostic> ValidateFeeder(const FeederGraph& graph);

// Checks ScenarioConfig invariants against a graph (edge references,
// voltage band, equity tolerance). Throws InputError naming the field.
void CheckScenario(const ScenarioConfig& scenario);

// Splits "a-b" against the graph's edge set, so ids containing '-' resolve
// as long as the split is unambiguous. Throws InputError otherwise.
EdgeRef ResolveEdgeRef(const FeederGraph& graph, std::string_view text);

// "a-b" rendering used in labels and scenario files.
std::string EdgeLabel(const FeederGraph& graph, int e);

}  // namespace restore

#endif  // RESTORE_FEEDER_H_

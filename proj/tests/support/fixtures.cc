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

#include "support/fixtures.h"

#include <algorithm>
#include <random>
#include <set>

namespace restore::testing {
namespace {

NodeRecord Load(const std::string& id, double p_kw, double q_kvar, bool critical) {
  return NodeRecord{id, p_kw, q_kvar, critical};
}

EdgeRecord Line(const std::string& from, const std::string& to, double r = 0.004, double x = 0.008) {
  EdgeRecord e;
  e.from = from;
  e.to = to;
  e.r_pu = r;
  e.x_pu = x;
  e.p_success = 0.95;
  return e;
}

template <typename T>
T Pick(std::mt19937_64& rng, const std::vector<T>& options) {
  return options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
}

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int UniformInt(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

FeederGraph Fx8(const Fx8Options& options) {
  std::vector<NodeRecord> nodes = {Load("1", 0, 0, false),   Load("2", 15, 5, false), Load("3", 15, 5, false),
                                   Load("4", 30, 10, true),  Load("5", 15, 5, false), Load("6", 15, 5, false),
                                   Load("7", 20, 8, true),   Load("8", 15, 5, false)};
  std::vector<EdgeRecord> edges = {Line("1", "2"), Line("2", "3"), Line("3", "4"), Line("2", "5"),
                                   Line("5", "6"), Line("6", "8"), Line("8", "4"), Line("5", "7")};
  edges[6].normally_open = true;
  std::vector<DerUnit> ders = {DerUnit{"1", options.p_max_kw, 60.0, options.energy_kwh, options.availability}};
  return FeederGraph(12.47, 1000.0, std::move(nodes), std::move(edges), std::move(ders));
}

FeederGraph TwoIslandEquity() {
  std::vector<NodeRecord> nodes = {Load("1", 10, 3, true), Load("2", 5, 1, false), Load("3", 10, 3, true),
                                   Load("4", 5, 1, false)};
  std::vector<EdgeRecord> edges = {Line("1", "2"), Line("3", "4")};
  std::vector<DerUnit> ders = {DerUnit{"1", 50.0, 30.0, 100.0, 0.95}, DerUnit{"3", 50.0, 30.0, 10.0, 0.95}};
  return FeederGraph(12.47, 1000.0, std::move(nodes), std::move(edges), std::move(ders));
}

FeederGraph TwoDerMeshed() {
  std::vector<NodeRecord> nodes;
  for (int i = 1; i <= 10; ++i) nodes.push_back(Load(std::to_string(i), 8, 3, false));
  nodes[2] = Load("3", 20, 6, true);
  nodes[3] = Load("4", 25, 8, true);
  nodes[7] = Load("8", 15, 5, true);
  nodes[9] = Load("10", 10, 3, true);
  std::vector<EdgeRecord> edges = {Line("1", "2"), Line("2", "3"), Line("3", "4"), Line("4", "5"),
                                   Line("5", "6"), Line("6", "7"), Line("7", "8"), Line("2", "9"),
                                   Line("9", "8"), Line("7", "10")};
  edges[8].normally_open = true;
  std::vector<DerUnit> ders = {DerUnit{"1", 60.0, 30.0, 120.0, 0.95}, DerUnit{"6", 60.0, 30.0, 60.0, 0.92}};
  return FeederGraph(12.47, 1000.0, std::move(nodes), std::move(edges), std::move(ders));
}

RandomFeederCase RandomFeeder(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = UniformInt(rng, 8, 12);
  const int num_ders = UniformInt(rng, 1, 2);
  const int num_loads = UniformInt(rng, 1, 3);
  const std::vector<double> availabilities = {0.90, 0.92, 0.95, 0.97, 1.0};

  std::vector<NodeRecord> nodes;
  for (int i = 1; i <= n; ++i) {
    const double p = std::round(Uniform(rng, 5.0, 40.0));
    nodes.push_back(Load(std::to_string(i), p, std::round(0.3 * p), false));
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int c = 0; c < num_loads; ++c) nodes[order[c]].is_critical = true;

  std::vector<EdgeRecord> edges;
  std::set<std::pair<int, int>> used;
  for (int i = 2; i <= n; ++i) {
    const int parent = UniformInt(rng, std::max(1, i - 4), i - 1);
    edges.push_back(Line(std::to_string(parent), std::to_string(i), Uniform(rng, 0.002, 0.01),
                         Uniform(rng, 0.004, 0.02)));
    used.insert({parent, i});
  }
  if (UniformInt(rng, 0, 1) == 1) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      int a = UniformInt(rng, 1, n);
      int b = UniformInt(rng, 1, n);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (used.count({a, b})) continue;
      EdgeRecord tie = Line(std::to_string(a), std::to_string(b), Uniform(rng, 0.002, 0.01), 0.01);
      tie.normally_open = true;
      edges.push_back(tie);
      break;
    }
  }
  for (EdgeRecord& e : edges) {
    e.switchable = Uniform(rng, 0.0, 1.0) < 0.8;
    e.p_success = 0.9;
  }

  std::shuffle(order.begin(), order.end(), rng);
  std::vector<DerUnit> ders;
  for (int k = 0; k < num_ders; ++k) {
    const double p_max = std::round(Uniform(rng, 20.0, 100.0));
    ders.push_back(DerUnit{std::to_string(order[k] + 1), p_max, std::round(0.6 * p_max),
                           std::round(Uniform(rng, 50.0, 300.0)), Pick(rng, availabilities)});
  }

  RandomFeederCase out{FeederGraph(12.47, 1000.0, std::move(nodes), edges, std::move(ders)), ScenarioConfig{}};
  for (const EdgeRecord& e : edges) {
    if (Uniform(rng, 0.0, 1.0) < 0.15) out.scenario.faulted_edges.push_back({e.from, e.to});
  }
  if (Uniform(rng, 0.0, 1.0) < 0.3) {
    double reserve = 0.0;
    for (const DerUnit& d : out.graph.ders()) reserve += d.energy_kwh;
    const double t_net = reserve / out.graph.TotalCriticalDemandKw();
    out.scenario.enforce_time_equity = true;
    out.scenario.epsilon_hours = std::round(100.0 * t_net * Uniform(rng, 0.2, 0.9)) / 100.0;
  }
  return out;
}

FeederGraph Synthetic123() {
  std::mt19937_64 rng(123);
  constexpr int kZones = 5;
  const int zone_size[kZones] = {25, 25, 24, 25, 24};
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  std::vector<int> zone_first;
  int next = 1;
  for (int z = 0; z < kZones; ++z) {
    zone_first.push_back(next);
    for (int t = 0; t < zone_size[z]; ++t, ++next) {
      const double p = std::round(Uniform(rng, 10.0, 40.0));
      nodes.push_back(Load(std::to_string(next), p, std::round(0.4 * p), false));
      if (t > 0) {
        const int parent = UniformInt(rng, std::max(zone_first[z], next - 3), next - 1);
        edges.push_back(Line(std::to_string(parent), std::to_string(next), Uniform(rng, 0.001, 0.004),
                             Uniform(rng, 0.002, 0.008)));
      }
    }
    if (z > 0) {
      edges.push_back(Line(std::to_string(zone_first[z] - 3), std::to_string(zone_first[z]), 0.002, 0.004));
    }
  }
  // Tie inside the middle zone, closing a loop through its lateral.
  EdgeRecord tie = Line(std::to_string(zone_first[2] + 4), std::to_string(zone_first[2] + 15), 0.003, 0.006);
  tie.normally_open = true;
  edges.push_back(tie);

  const int critical[11] = {6, 18, 30, 41, 54, 63, 69, 80, 93, 104, 117};
  for (int id : critical) {
    nodes[id - 1].is_critical = true;
    nodes[id - 1].demand_p_kw = 40.0;
    nodes[id - 1].demand_q_kvar = 15.0;
  }
  std::vector<DerUnit> ders;
  const double reserve[kZones] = {400.0, 300.0, 350.0, 250.0, 300.0};
  const double availability[kZones] = {0.95, 0.95, 0.92, 0.90, 0.95};
  for (int z = 0; z < kZones; ++z) {
    ders.push_back(DerUnit{std::to_string(zone_first[z] + 1), 100.0, 60.0, reserve[z], availability[z]});
  }
  return FeederGraph(4.16, 1000.0, std::move(nodes), std::move(edges), std::move(ders));
}

ScenarioConfig Synthetic123Faults() {
  ScenarioConfig scenario;
  const int zone_first[4] = {26, 51, 75, 100};
  for (int first : zone_first) scenario.faulted_edges.push_back({std::to_string(first - 3), std::to_string(first)});
  return scenario;
}

FeederGraph EditFeeder(const FeederGraph& graph, const FeederEdit& edit) {
  std::vector<NodeRecord> nodes = graph.nodes();
  std::vector<EdgeRecord> edges = graph.edges();
  std::vector<DerUnit> ders = graph.ders();
  edit(nodes, edges, ders);
  return FeederGraph(graph.base_kv(), graph.base_kva(), std::move(nodes), std::move(edges), std::move(ders));
}

SolvedCase SolveCase(const FeederGraph& graph, const ScenarioConfig& scenario) {
  SolvedCase out{BuildModel(graph, scenario), {}, {}};
  out.solution = SolveMilp(out.model.milp);
  if (out.solved()) out.plan = ExtractPlan(out.model, out.solution.values);
  return out;
}

}  // namespace restore::testing

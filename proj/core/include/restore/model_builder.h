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

#ifndef RESTORE_MODEL_BUILDER_H_
#define RESTORE_MODEL_BUILDER_H_

#include <string>
#include <vector>

#include "restore/feeder.h"
#include "restore/milp.h"
#include "restore/topology.h"

namespace restore {

// Variable lookup tables. Per-(DER, node) tables are indexed [der][node];
// per-path tables are indexed by PathCatalog entry. -1 marks "absent".
struct ModelIndex {
  std::vector<std::vector<int>> v;
  std::vector<int> s;
  std::vector<int> y;
  std::vector<std::vector<int>> p;
  std::vector<std::vector<int>> q;
  std::vector<int> path_p;
  std::vector<int> path_q;
  std::vector<std::vector<int>> voltage;
  std::vector<int> path_voltage;
  std::vector<int> z_p;
  std::vector<int> z_q;
  std::vector<int> z_voltage;
};

// The assembled program together with everything needed to interpret its
// solutions. `graph` is the damaged feeder (scenario applied).
struct RestorationModel {
  FeederGraph graph;
  ScenarioConfig scenario;
  LoopSet loops;
  std::vector<Orientation> orientations;
  PathCatalog catalog;
  MilpModel milp;
  ModelIndex index;
  double flow_bound_pu = 0.0;
  double voltage_bound_pu = 0.0;
};

// Pooled restoration time: sum of reserves over total critical demand.
// Throws ModelError when there is no critical demand.
double ComputeTNet(const FeederGraph& graph);

// Exact linearization of z = y * w for binary y and w in [0, bound]
// (or [-bound, bound] when `symmetric`). Emits four rows; creates z when
// `z < 0`. Returns z. Throws ModelError when w's bounds exceed `bound`.
int LinearizeProduct(MilpModel& model, int y, int w, double bound, bool symmetric, const std::string& label,
                     int z = -1);

// Builds the restoration MILP step by step. The free function BuildModel
// runs every stage in order; the stages are exposed for inspection.
class ModelBuilder {
 public:
  // Applies `scenario` to `graph` and derives loops, orientations and the
  // path catalog. Throws InputError/ModelError on invalid input.
  ModelBuilder(const FeederGraph& graph, const ScenarioConfig& scenario);

  void BuildVariables();
  void AddConnectivityConstraints();
  void AddPowerflowConstraints();
  void AddOperationalConstraints();
  void BuildObjective();

  const RestorationModel& model() const { return model_; }
  RestorationModel Release() && { return std::move(model_); }

 private:
  std::string Tag(int node) const { return model_.graph.id(node); }
  std::string DerTag(int der) const { return model_.graph.der(der).node; }
  double PuP(int node) const { return model_.graph.RestorationDemandKw(node) / model_.graph.base_kva(); }
  double PuQ(int node) const { return model_.graph.RestorationDemandKvar(node) / model_.graph.base_kva(); }
  bool IsLoopNode(int node) const { return model_.loops.ContainsNode(node); }
  std::vector<int> EntryOrder() const;
  void AddFlowRows(int der, bool reactive);

  RestorationModel model_;
};

RestorationModel BuildModel(const FeederGraph& graph, const ScenarioConfig& scenario);

}  // namespace restore

#endif  // RESTORE_MODEL_BUILDER_H_

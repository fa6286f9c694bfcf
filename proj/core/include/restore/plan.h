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

#ifndef RESTORE_PLAN_H_
#define RESTORE_PLAN_H_

#include <string>
#include <vector>

#include "restore/feeder.h"
#include "restore/model_builder.h"

namespace restore {

struct LoopPathChoice {
  std::string node;
  int alpha = 0;
  std::vector<std::string> path;  // DER node first

  friend bool operator==(const LoopPathChoice&, const LoopPathChoice&) = default;
};

// One restored subtree network.
struct RsnPlan {
  std::string der_node;
  std::vector<std::string> nodes;         // NodeIdLess order
  std::vector<EdgeRef> edges;             // parent first, breadth-first from the DER
  std::vector<std::string> critical_loads;
  std::vector<LoopPathChoice> loop_paths;
  double served_p_kw = 0.0;
  double served_q_kvar = 0.0;
  double restoration_hours = 0.0;  // infinite when nothing is served
  double unavailability = 0.0;

  int line_count() const { return static_cast<int>(nodes.size()) - 1; }
  bool active() const { return !critical_loads.empty(); }

  friend bool operator==(const RsnPlan&, const RsnPlan&) = default;
};

struct RestorationPlan {
  std::vector<RsnPlan> rsns;  // DER order
  std::vector<std::string> unrestored_critical_loads;
  int picked_critical_loads = 0;
  double pickup_reward = 0.0;  // per picked critical load
  double u_p = 0.0;
  double u_r = 0.0;
  double u_rc = 0.0;
  double t_net_hours = 0.0;
  double objective = 0.0;

  friend bool operator==(const RestorationPlan&, const RestorationPlan&) = default;
};

// Fills the derived fields of every RSN (critical loads, served power,
// T_k, U_R^k) and the plan totals from the node sets. `graph` supplies
// demands and DER data; `objective` is left untouched.
void FinalizePlan(const FeederGraph& graph, RestorationPlan& plan);

// Builds the plan encoded by a solution vector of `model`. Binaries are
// thresholded at 0.5; a binary farther than `integer_tolerance` from 0/1
// or an RSN that is not a tree rooted at its DER throws SolutionError.
RestorationPlan ExtractPlan(const RestorationModel& model, const std::vector<double>& values,
                            double integer_tolerance = 1e-6);

// Node sequence from the DER to `node` along the RSN's edges; empty when
// `node` is not in the RSN.
std::vector<std::string> RouteTo(const RsnPlan& rsn, const std::string& node);

}  // namespace restore

#endif  // RESTORE_PLAN_H_

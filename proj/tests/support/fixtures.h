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

#ifndef RESTORE_TESTS_SUPPORT_FIXTURES_H_
#define RESTORE_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "restore/branch_and_bound.h"
#include "restore/feeder.h"
#include "restore/model_builder.h"
#include "restore/plan.h"

namespace restore::testing {

struct Fx8Options {
  double p_max_kw = 100.0;
  double energy_kwh = 200.0;
  double availability = 0.95;
};

// Eight-node feeder: trunk 1-2-3-4, lateral 2-5-6-8 closed back onto 4 by
// a normally-open tie 8-4, and a spur 5-7. One DER at node 1, critical
// loads at 4 (30 kW) and 7 (20 kW).
FeederGraph Fx8(const Fx8Options& options = {});

// Two DERs on separate islands, each sitting on a critical load.
// Pooled restoration time is 5.5 h; the islands run 10 h and 1 h.
FeederGraph TwoIslandEquity();

// Two DERs sharing one meshed feeder, used for equity trade-offs.
FeederGraph TwoDerMeshed();

struct RandomFeederCase {
  FeederGraph graph;
  ScenarioConfig scenario;
};

// Seeded random feeder: 8-12 nodes, 1-2 DERs, 0-1 tie, 1-3 critical loads,
// random faults.
RandomFeederCase RandomFeeder(std::uint64_t seed);

// A 123-node feeder with five DERs, eleven critical loads and one tie.
FeederGraph Synthetic123();

// Scenario that splits Synthetic123 into DER zones.
ScenarioConfig Synthetic123Faults();

using FeederEdit = std::function<void(std::vector<NodeRecord>&, std::vector<EdgeRecord>&, std::vector<DerUnit>&)>;

// Copy of `graph` with its records rewritten by `edit`.
FeederGraph EditFeeder(const FeederGraph& graph, const FeederEdit& edit);

struct SolvedCase {
  RestorationModel model;
  MilpSolution solution;
  RestorationPlan plan;  // empty unless a solution was found
  bool solved() const {
    return solution.status == MilpStatus::kOptimal || solution.status == MilpStatus::kFeasible;
  }
};

// Builds and solves the restoration model with the embedded solver.
SolvedCase SolveCase(const FeederGraph& graph, const ScenarioConfig& scenario = {});

}  // namespace restore::testing

#endif  // RESTORE_TESTS_SUPPORT_FIXTURES_H_

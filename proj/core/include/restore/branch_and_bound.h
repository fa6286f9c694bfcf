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

#ifndef RESTORE_BRANCH_AND_BOUND_H_
#define RESTORE_BRANCH_AND_BOUND_H_

#include <string_view>
#include <vector>

#include "restore/lp_solver.h"
#include "restore/milp.h"

namespace restore {

enum class MilpStatus { kOptimal, kFeasible, kInfeasible, kUnbounded, kLimit };

std::string_view MilpStatusName(MilpStatus status);

struct MilpOptions {
  double gap_tolerance = 1e-6;
  double integer_tolerance = 1e-6;
  long node_limit = 1000000;
  double time_limit_seconds = 600.0;
  LpOptions lp;
};

struct MilpStats {
  long nodes = 0;
  long lp_iterations = 0;
  double wall_seconds = 0.0;
  // Objective of every accepted incumbent, in order of discovery.
  std::vector<double> incumbents;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kLimit;
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;
  std::vector<double> values;
  MilpStats stats;
};

// Gap between an incumbent and a bound, relative to |incumbent| (absolute
// when the incumbent is zero).
double RelativeGap(double incumbent, double bound);

// Single-threaded branch-and-bound over the LP relaxation. Branches on the
// most fractional integer variable (lowest index on ties), dives depth
// first toward the nearer rounding, then restarts dives from the open node
// with the best bound (creation order on ties). Integer values in the
// returned vector are snapped and the objective recomputed from them.
MilpSolution SolveMilp(const MilpModel& model, const MilpOptions& options = {});

}  // namespace restore

#endif  // RESTORE_BRANCH_AND_BOUND_H_

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

#ifndef RESTORE_LP_SOLVER_H_
#define RESTORE_LP_SOLVER_H_

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "restore/milp.h"

namespace restore {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view LpStatusName(LpStatus status);

enum class BasisStatus : std::uint8_t { kBasic, kAtLower, kAtUpper };

// Status of every column: structurals first, then one logical per row.
struct LpBasis {
  std::vector<BasisStatus> status;
};

struct LpOptions {
  long iteration_limit = 1000000;
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 100;
  bool perturb_costs = true;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;             // structural values
  std::vector<double> row_activity;  // A x
  std::vector<double> row_duals;
  LpBasis basis;
  long iterations = 0;
};

// Bounded-variable dual simplex on the relaxation of a MilpModel
// (integrality ignored). The instance keeps its own copy of the column
// bounds so branch-and-bound can tighten them between solves; a basis from
// an earlier solve is accepted as a warm start.
class LpSolver {
 public:
  explicit LpSolver(const MilpModel& model, LpOptions options = {});
  ~LpSolver();
  LpSolver(const LpSolver&) = delete;
  LpSolver& operator=(const LpSolver&) = delete;

  int num_columns() const;
  int num_rows() const;

  void SetBounds(int column, double lower, double upper);
  double lower(int column) const;
  double upper(int column) const;

  // Starts from `warm_start` when it is a valid basis, else from the
  // all-logical basis.
  LpResult Solve(const LpBasis* warm_start = nullptr);

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

LpResult SolveLp(const MilpModel& model, const LpOptions& options = {});

}  // namespace restore

#endif  // RESTORE_LP_SOLVER_H_

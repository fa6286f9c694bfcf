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

#ifndef RESTORE_MILP_H_
#define RESTORE_MILP_H_

#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace restore {

enum class VarKind {
  kAssignment,     // v: node i belongs to DER k's restored network
  kPickup,         // s: critical load i is picked up
  kPath,           // y: node i is supplied along catalog path alpha
  kFlowP,          // p: active power entering node i
  kFlowQ,          // q: reactive power entering node i
  kPathFlowP,      // p along path alpha
  kPathFlowQ,      // q along path alpha
  kVoltage,        // V: node voltage
  kPathVoltage,    // V along path alpha (sign-indefinite)
  kBilinearAux,    // z = binary * continuous
};

std::string_view VarKindName(VarKind kind);
bool IsBinaryKind(VarKind kind);

struct VariableHandle {
  int index = -1;
  VarKind kind = VarKind::kAssignment;
  int node = -1;
  int der = -1;
  int alpha = 0;
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  bool is_integer = false;
};

enum class Sense { kLe, kEq, kGe };

struct LinearConstraint {
  std::vector<std::pair<int, double>> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
  std::string label;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Canonical sparse MILP, minimization. Variables and rows are appended in
// construction order; indices are dense.
class MilpModel {
 public:
  int AddVariable(VarKind kind, std::string name, double lower, double upper, bool is_integer, int node = -1,
                  int der = -1, int alpha = 0);
  // Merges repeated variables and drops zero coefficients.
  int AddConstraint(std::vector<std::pair<int, double>> terms, Sense sense, double rhs, std::string label,
                    std::string_view family);
  void SetObjectiveCoefficient(int var, double coefficient);
  void SetBounds(int var, double lower, double upper);

  const std::vector<VariableHandle>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const VariableHandle& variable(int j) const { return variables_[j]; }
  const std::vector<double>& objective() const { return objective_; }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  // -1 when absent.
  int FindVariable(std::string_view name) const;

  double t_net_hours = 0.0;
  // Rows per constraint family, keyed by family name.
  std::map<std::string, int> family_counts;

  double ObjectiveValue(const std::vector<double>& x) const;
  // Largest bound or row violation of `x`.
  double MaxViolation(const std::vector<double>& x) const;
  // Deterministic text form: every variable and row, full precision.
  std::string CanonicalForm() const;

 private:
  std::vector<VariableHandle> variables_;
  std::vector<LinearConstraint> constraints_;
  std::vector<double> objective_;
  std::unordered_map<std::string, int> by_name_;
};

}  // namespace restore

#endif  // RESTORE_MILP_H_

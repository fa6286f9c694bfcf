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

#include "restore/milp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "restore/error.h"

namespace restore {

std::string_view VarKindName(VarKind kind) {
  switch (kind) {
    case VarKind::kAssignment: return "assignment";
    case VarKind::kPickup: return "pickup";
    case VarKind::kPath: return "path";
    case VarKind::kFlowP: return "flow_p";
    case VarKind::kFlowQ: return "flow_q";
    case VarKind::kPathFlowP: return "path_flow_p";
    case VarKind::kPathFlowQ: return "path_flow_q";
    case VarKind::kVoltage: return "voltage";
    case VarKind::kPathVoltage: return "path_voltage";
    case VarKind::kBilinearAux: return "bilinear_aux";
  }
  return "unknown";
}

bool IsBinaryKind(VarKind kind) {
  return kind == VarKind::kAssignment || kind == VarKind::kPickup || kind == VarKind::kPath;
}

int MilpModel::AddVariable(VarKind kind, std::string name, double lower, double upper, bool is_integer, int node,
                           int der, int alpha) {
  if (by_name_.count(name)) throw ModelError("duplicate variable name \"" + name + "\"");
  if (lower > upper) throw ModelError("variable \"" + name + "\" has empty bounds");
  VariableHandle v;
  v.index = num_variables();
  v.kind = kind;
  v.node = node;
  v.der = der;
  v.alpha = alpha;
  v.name = std::move(name);
  v.lower = lower;
  v.upper = upper;
  v.is_integer = is_integer;
  by_name_.emplace(v.name, v.index);
  variables_.push_back(std::move(v));
  objective_.push_back(0.0);
  return variables_.back().index;
}

int MilpModel::AddConstraint(std::vector<std::pair<int, double>> terms, Sense sense, double rhs, std::string label,
                             std::string_view family) {
  std::sort(terms.begin(), terms.end());
  std::vector<std::pair<int, double>> merged;
  for (const auto& [var, coef] : terms) {
    if (var < 0 || var >= num_variables()) throw ModelError("row \"" + label + "\" references a missing variable");
    if (!std::isfinite(coef)) throw ModelError("row \"" + label + "\" has a non-finite coefficient");
    if (!merged.empty() && merged.back().first == var) {
      merged.back().second += coef;
    } else {
      merged.emplace_back(var, coef);
    }
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
  if (!std::isfinite(rhs)) throw ModelError("row \"" + label + "\" has a non-finite right-hand side");
  constraints_.push_back({std::move(merged), sense, rhs, std::move(label)});
  ++family_counts[std::string(family)];
  return num_constraints() - 1;
}

void MilpModel::SetObjectiveCoefficient(int var, double coefficient) { objective_.at(var) = coefficient; }

void MilpModel::SetBounds(int var, double lower, double upper) {
  VariableHandle& v = variables_.at(var);
  if (lower > upper) throw ModelError("variable \"" + v.name + "\" has empty bounds");
  v.lower = lower;
  v.upper = upper;
}

int MilpModel::FindVariable(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? -1 : it->second;
}

double MilpModel::ObjectiveValue(const std::vector<double>& x) const {
  double total = 0.0;
  for (int j = 0; j < num_variables(); ++j) {
    if (objective_[j] != 0.0) total += objective_[j] * x[j];
  }
  return total;
}

double MilpModel::MaxViolation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (const VariableHandle& v : variables_) {
    worst = std::max({worst, v.lower - x[v.index], x[v.index] - v.upper});
  }
  for (const LinearConstraint& row : constraints_) {
    double activity = 0.0;
    for (const auto& [var, coef] : row.terms) activity += coef * x[var];
    const double diff = activity - row.rhs;
    switch (row.sense) {
      case Sense::kLe: worst = std::max(worst, diff); break;
      case Sense::kGe: worst = std::max(worst, -diff); break;
      case Sense::kEq: worst = std::max(worst, std::abs(diff)); break;
    }
  }
  return worst;
}

std::string MilpModel::CanonicalForm() const {
  std::ostringstream out;
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "variables " << variables_.size() << "\n";
  for (const VariableHandle& v : variables_) {
    out << v.index << ' ' << v.name << ' ' << VarKindName(v.kind) << ' ' << num(v.lower) << ' ' << num(v.upper)
        << (v.is_integer ? " int" : " cont") << " obj " << num(objective_[v.index]) << "\n";
  }
  out << "rows " << constraints_.size() << "\n";
  for (const LinearConstraint& row : constraints_) {
    out << row.label << (row.sense == Sense::kLe ? " <= " : row.sense == Sense::kGe ? " >= " : " = ")
        << num(row.rhs) << " :";
    for (const auto& [var, coef] : row.terms) out << ' ' << num(coef) << '*' << variables_[var].name;
    out << "\n";
  }
  out << "t_net " << num(t_net_hours) << "\n";
  return out.str();
}

}  // namespace restore

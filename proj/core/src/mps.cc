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

#include "restore/mps.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "restore/error.h"
#include "restore/log.h"

namespace restore {
namespace {

constexpr std::size_t kNameWidth = 8;
constexpr const char* kObjectiveRow = "OBJ";

bool FitsDirectly(const std::string& name) {
  if (name.empty() || name.size() > kNameWidth || name == kObjectiveRow) return false;
  for (char c : name) {
    if (c <= ' ' || c == '\'' || c == '$' || c == '*') return false;
  }
  return true;
}

std::uint32_t Fnv1a(std::string_view text, std::uint32_t salt) {
  std::uint32_t h = 2166136261U ^ salt;
  for (unsigned char c : text) {
    h ^= c;
    h *= 16777619U;
  }
  return h;
}

std::string ShortPrefix(const std::string& name) {
  std::string prefix;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) prefix += c;
    if (prefix.size() == 3) break;
  }
  while (prefix.size() < 3) prefix += '_';
  return prefix;
}

std::vector<std::string> ShortenAll(const std::vector<std::string>& names, std::set<std::string>& used) {
  std::vector<std::string> out(names.size());
  for (size_t t = 0; t < names.size(); ++t) {
    if (FitsDirectly(names[t]) && used.insert(names[t]).second) out[t] = names[t];
  }
  for (size_t t = 0; t < names.size(); ++t) {
    if (!out[t].empty()) continue;
    for (std::uint32_t salt = 0;; ++salt) {
      char hex[8];
      std::snprintf(hex, sizeof(hex), "%05x", Fnv1a(names[t], salt) & 0xFFFFFU);
      std::string candidate = ShortPrefix(names[t]) + hex;
      if (used.insert(candidate).second) {
        out[t] = candidate;
        break;
      }
    }
  }
  return out;
}

std::string Number(double value) {
  char buf[32];
  for (int precision = 12; precision >= 1; --precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::string_view(buf).size() <= 12) break;
  }
  return buf;
}

std::string Line(std::string_view type, std::string_view name1, std::string_view name2 = "",
                 std::string_view number = "") {
  char buf[96];
  std::snprintf(buf, sizeof(buf), " %-2.2s %-8.8s  %-8.8s  %12.12s", std::string(type).c_str(),
                std::string(name1).c_str(), std::string(name2).c_str(), std::string(number).c_str());
  std::string out = buf;
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out + "\n";
}

std::string Marker(std::string_view tag) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "    %-8s  %-8s  %12s   %s\n", "MARKER", "'MARKER'", "", std::string(tag).c_str());
  return buf;
}

std::vector<std::string> Tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

bool ParseNumber(const std::string& text, double& value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

VarKind KindFromName(const std::string& name, bool integer) {
  auto starts = [&](std::string_view p) { return name.rfind(p, 0) == 0; };
  if (starts("v_")) return VarKind::kAssignment;
  if (starts("s_")) return VarKind::kPickup;
  if (starts("y_")) return VarKind::kPath;
  if (starts("pp_")) return VarKind::kPathFlowP;
  if (starts("qq_")) return VarKind::kPathFlowQ;
  if (starts("p_")) return VarKind::kFlowP;
  if (starts("q_")) return VarKind::kFlowQ;
  if (starts("Vp_")) return VarKind::kPathVoltage;
  if (starts("V_")) return VarKind::kVoltage;
  return integer ? VarKind::kAssignment : VarKind::kBilinearAux;
}

}  // namespace

MpsNames AssignMpsNames(const MilpModel& model) {
  std::set<std::string> used{kObjectiveRow};
  std::vector<std::string> columns, rows;
  for (const VariableHandle& v : model.variables()) columns.push_back(v.name);
  for (const LinearConstraint& r : model.constraints()) rows.push_back(r.label);
  MpsNames names;
  names.columns = ShortenAll(columns, used);
  std::set<std::string> row_used{kObjectiveRow};
  names.rows = ShortenAll(rows, row_used);
  return names;
}

std::string ExportMps(const MilpModel& model, std::string_view problem_name) {
  const MpsNames names = AssignMpsNames(model);
  std::ostringstream out;
  out << "* Restoration MILP: " << model.num_variables() << " columns, " << model.num_constraints() << " rows\n";
  out << "* T_NET " << Number(model.t_net_hours) << "\n";
  for (int j = 0; j < model.num_variables(); ++j) {
    if (names.columns[j] != model.variable(j).name) {
      out << "* NAME " << names.columns[j] << " " << model.variable(j).name << "\n";
    }
  }
  for (int i = 0; i < model.num_constraints(); ++i) {
    if (names.rows[i] != model.constraints()[i].label) {
      out << "* ROWNAME " << names.rows[i] << " " << model.constraints()[i].label << "\n";
    }
  }
  out << "NAME          " << problem_name << "\n";
  out << "ROWS\n";
  out << Line("N", kObjectiveRow);
  for (int i = 0; i < model.num_constraints(); ++i) {
    const Sense s = model.constraints()[i].sense;
    out << Line(s == Sense::kLe ? "L" : s == Sense::kGe ? "G" : "E", names.rows[i]);
  }

  std::vector<std::vector<std::pair<int, double>>> by_column(model.num_variables());
  for (int i = 0; i < model.num_constraints(); ++i) {
    for (const auto& [j, a] : model.constraints()[i].terms) by_column[j].emplace_back(i, a);
  }
  out << "COLUMNS\n";
  bool in_integer_block = false;
  for (int j = 0; j < model.num_variables(); ++j) {
    const bool integer = model.variable(j).is_integer;
    if (integer != in_integer_block) {
      out << Marker(integer ? "'INTORG'" : "'INTEND'");
      in_integer_block = integer;
    }
    const double c = model.objective()[j];
    if (c != 0.0 || by_column[j].empty()) out << Line("", names.columns[j], kObjectiveRow, Number(c));
    for (const auto& [i, a] : by_column[j]) out << Line("", names.columns[j], names.rows[i], Number(a));
  }
  if (in_integer_block) out << Marker("'INTEND'");

  out << "RHS\n";
  for (int i = 0; i < model.num_constraints(); ++i) {
    const double rhs = model.constraints()[i].rhs;
    if (rhs != 0.0) out << Line("", "RHS", names.rows[i], Number(rhs));
  }

  out << "BOUNDS\n";
  for (int j = 0; j < model.num_variables(); ++j) {
    const VariableHandle& v = model.variable(j);
    const std::string& name = names.columns[j];
    if (v.lower == v.upper) {
      out << Line("FX", "BND", name, Number(v.lower));
      continue;
    }
    if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      out << Line("FR", "BND", name);
      continue;
    }
    if (!std::isfinite(v.lower)) {
      out << Line("MI", "BND", name);
    } else if (v.lower != 0.0) {
      out << Line("LO", "BND", name, Number(v.lower));
    }
    if (std::isfinite(v.upper)) {
      out << Line("UP", "BND", name, Number(v.upper));
    } else if (v.is_integer) {
      out << Line("PL", "BND", name);
    }
  }
  out << "ENDATA\n";
  return out.str();
}

MilpModel ReadMps(std::string_view text) {
  struct Column {
    std::string name;
    bool integer = false;
    double lower = 0.0;
    double upper = kInf;
    double cost = 0.0;
  };
  struct Row {
    std::string name;
    Sense sense = Sense::kLe;
    double rhs = 0.0;
    std::vector<std::pair<int, double>> terms;
  };
  std::map<std::string, std::string> full_column, full_row;
  std::vector<Column> columns;
  std::vector<Row> rows;
  std::unordered_map<std::string, int> column_index, row_index;
  std::string objective_row;
  std::string section;
  bool integer_block = false;
  double t_net = 0.0;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_number = 0;
  auto fail = [&](const std::string& why) {
    throw InputError("MPS line " + std::to_string(line_number) + ": " + why);
  };
  auto number = [&](const std::string& token) {
    double v;
    if (!ParseNumber(token, v)) fail("bad number \"" + token + "\"");
    return v;
  };
  auto column_of = [&](const std::string& name) {
    auto it = column_index.find(name);
    if (it == column_index.end()) fail("unknown column \"" + name + "\"");
    return it->second;
  };
  auto add_row_value = [&](const std::string& row, double value, int column, bool is_rhs) {
    if (row == objective_row) {
      if (!is_rhs) columns[column].cost += value;
      return;
    }
    auto it = row_index.find(row);
    if (it == row_index.end()) fail("unknown row \"" + row + "\"");
    if (is_rhs) {
      rows[it->second].rhs = value;
    } else {
      rows[it->second].terms.emplace_back(column, value);
    }
  };

  while (std::getline(in, raw)) {
    ++line_number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    if (raw[0] == '*') {
      const auto t = Tokens(raw.substr(1));
      if (t.size() == 3 && t[0] == "NAME") full_column[t[1]] = t[2];
      if (t.size() == 3 && t[0] == "ROWNAME") full_row[t[1]] = t[2];
      if (t.size() == 2 && t[0] == "T_NET") t_net = number(t[1]);
      continue;
    }
    const auto t = Tokens(raw);
    if (t.empty()) continue;
    if (raw[0] != ' ' && raw[0] != '\t') {
      section = t[0];
      if (section != "NAME" && section != "ROWS" && section != "COLUMNS" && section != "RHS" &&
          section != "BOUNDS" && section != "ENDATA" && section != "OBJSENSE") {
        fail("unsupported section \"" + section + "\"");
      }
      if (section == "ENDATA") break;
      continue;
    }
    if (section == "ROWS") {
      if (t.size() != 2) fail("expected row type and name");
      if (t[0] == "N") {
        if (objective_row.empty()) objective_row = t[1];
        continue;
      }
      Row row;
      row.name = t[1];
      if (t[0] == "L") {
        row.sense = Sense::kLe;
      } else if (t[0] == "G") {
        row.sense = Sense::kGe;
      } else if (t[0] == "E") {
        row.sense = Sense::kEq;
      } else {
        fail("unknown row type \"" + t[0] + "\"");
      }
      if (!row_index.emplace(row.name, static_cast<int>(rows.size())).second) fail("duplicate row " + row.name);
      rows.push_back(std::move(row));
    } else if (section == "COLUMNS") {
      if (t.size() >= 3 && t[1] == "'MARKER'") {
        if (t.back() == "'INTORG'") {
          integer_block = true;
        } else if (t.back() == "'INTEND'") {
          integer_block = false;
        } else {
          fail("unknown marker");
        }
        continue;
      }
      if (t.size() != 3 && t.size() != 5) fail("expected column, row, value");
      auto it = column_index.find(t[0]);
      int j;
      if (it == column_index.end()) {
        j = static_cast<int>(columns.size());
        column_index.emplace(t[0], j);
        columns.push_back(Column{t[0], integer_block});
      } else {
        j = it->second;
      }
      for (size_t pos = 1; pos + 1 < t.size(); pos += 2) add_row_value(t[pos], number(t[pos + 1]), j, false);
    } else if (section == "RHS") {
      if (t.size() != 3 && t.size() != 5) fail("expected rhs name, row, value");
      for (size_t pos = 1; pos + 1 < t.size(); pos += 2) add_row_value(t[pos], number(t[pos + 1]), -1, true);
    } else if (section == "BOUNDS") {
      if (t.size() < 3) fail("expected bound type, name, column");
      Column& c = columns[column_of(t[2])];
      const std::string& type = t[0];
      const bool needs_value = type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
      if (needs_value && t.size() != 4) fail("bound " + type + " needs a value");
      const double value = needs_value ? number(t[3]) : 0.0;
      if (type == "UP" || type == "UI") {
        c.upper = value;
      } else if (type == "LO" || type == "LI") {
        c.lower = value;
      } else if (type == "FX") {
        c.lower = c.upper = value;
      } else if (type == "FR") {
        c.lower = -kInf;
        c.upper = kInf;
      } else if (type == "MI") {
        c.lower = -kInf;
      } else if (type == "PL") {
        c.upper = kInf;
      } else if (type == "BV") {
        c.lower = 0.0;
        c.upper = 1.0;
        c.integer = true;
      } else {
        fail("unknown bound type \"" + type + "\"");
      }
      if (type == "LI" || type == "UI") c.integer = true;
    } else if (section == "NAME" || section == "OBJSENSE") {
      continue;
    } else {
      fail("data outside a section");
    }
  }

  MilpModel model;
  model.t_net_hours = t_net;
  for (const Column& c : columns) {
    auto it = full_column.find(c.name);
    const std::string name = it == full_column.end() ? c.name : it->second;
    const int j = model.AddVariable(KindFromName(name, c.integer), name, c.lower, c.upper, c.integer);
    model.SetObjectiveCoefficient(j, c.cost);
  }
  for (Row& r : rows) {
    auto it = full_row.find(r.name);
    const std::string label = it == full_row.end() ? r.name : it->second;
    const std::string family = label.substr(0, label.find(':'));
    model.AddConstraint(std::move(r.terms), r.sense, r.rhs, label, family);
  }
  return model;
}

ImportedSolution ImportSolution(const MilpModel& model, std::string_view text) {
  const MpsNames names = AssignMpsNames(model);
  std::unordered_map<std::string, int> short_index;
  for (int j = 0; j < model.num_variables(); ++j) short_index.emplace(names.columns[j], j);

  ImportedSolution out;
  std::vector<double>& values = out.solution.values;
  values.assign(model.num_variables(), 0.0);
  std::vector<bool> seen(model.num_variables(), false);
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    const auto t = Tokens(raw);
    if (t.empty()) continue;
    double value;
    if (t.size() != 2 || !ParseNumber(t[1], value)) {
      throw InputError("solution line " + std::to_string(line_number) + ": expected \"name value\"");
    }
    int j = model.FindVariable(t[0]);
    if (j < 0) {
      auto it = short_index.find(t[0]);
      if (it == short_index.end()) {
        throw InputError("solution line " + std::to_string(line_number) + ": unknown variable \"" + t[0] + "\"");
      }
      j = it->second;
    }
    values[j] = value;
    seen[j] = true;
  }
  for (int j = 0; j < model.num_variables(); ++j) {
    if (!seen[j]) out.warnings.push_back("variable " + model.variable(j).name + " missing from solution; set to 0");
  }
  if (!out.warnings.empty()) {
    LogWarning(std::to_string(out.warnings.size()) + " variables missing from imported solution");
  }

  MilpSolution& s = out.solution;
  s.objective = model.ObjectiveValue(values);
  s.best_bound = s.objective;
  const bool feasible = model.MaxViolation(values) <= 1e-6;
  bool integral = true;
  for (int j = 0; j < model.num_variables(); ++j) {
    if (model.variable(j).is_integer && std::abs(values[j] - std::round(values[j])) > 1e-6) integral = false;
  }
  s.status = feasible && integral ? MilpStatus::kFeasible : MilpStatus::kInfeasible;
  return out;
}

std::string FormatSolution(const MilpModel& model, const std::vector<double>& values) {
  std::ostringstream out;
  char buf[64];
  for (int j = 0; j < model.num_variables(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[j]);
    out << model.variable(j).name << ' ' << buf << '\n';
  }
  return out.str();
}

}  // namespace restore

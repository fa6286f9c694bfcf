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

#ifndef RESTORE_MPS_H_
#define RESTORE_MPS_H_

#include <string>
#include <string_view>
#include <vector>

#include "restore/branch_and_bound.h"
#include "restore/milp.h"

namespace restore {

// Eight-character MPS names for every column and row of `model`. Names
// that already fit are kept; longer ones become a short prefix plus a hash.
struct MpsNames {
  std::vector<std::string> columns;
  std::vector<std::string> rows;
};

MpsNames AssignMpsNames(const MilpModel& model);

// Fixed-format MPS. Shortened names are listed in comment lines
// "* NAME <short> <full>" so the file can be read back with full names.
std::string ExportMps(const MilpModel& model, std::string_view problem_name = "RESTORE");

// Parses fixed- or free-format MPS (whitespace separated fields). Full
// names are restored from the mapping comments when present. Throws
// InputError with the line number on malformed input.
MilpModel ReadMps(std::string_view text);

struct ImportedSolution {
  MilpSolution solution;
  std::vector<std::string> warnings;
};

// Reads "name value" lines ('#' starts a comment). Names may be model
// names or their MPS short names. Unknown names and unparseable lines
// throw InputError; variables left out default to 0 with a warning.
ImportedSolution ImportSolution(const MilpModel& model, std::string_view text);

// Writes every variable as a "name value" line.
std::string FormatSolution(const MilpModel& model, const std::vector<double>& values);

}  // namespace restore

#endif  // RESTORE_MPS_H_

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

#ifndef RESTORE_REPORT_IO_H_
#define RESTORE_REPORT_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "restore/feeder.h"
#include "restore/plan.h"
#include "restore/verify.h"

namespace restore {

// Invocation record embedded in every output document.
struct RunManifest {
  std::string command;
  std::string feeder_path;
  std::string scenario_path;
  std::string plan_path;
  std::string solution_path;
  std::string out_dir;
  std::string solver = "embedded";
  std::vector<double> eps;
  long samples = 0;
  std::uint64_t seed = 0;
  std::string tool_version;
};

// Plan document. Infinite restoration times are written as null.
std::string SerializePlan(const RestorationPlan& plan, const RunManifest* manifest = nullptr);

// Reads the RSN node/edge/path lists of a plan document and recomputes
// every derived quantity from `graph`. The stored objective is kept when
// present. Throws InputError for malformed documents or ids that are not
// in the feeder.
RestorationPlan ParsePlan(std::string_view document, const FeederGraph& graph);

std::string SerializeReport(const VerificationReport& report, const RestorationPlan& plan,
                            const RunManifest* manifest = nullptr);

enum class TableFormat { kTable, kCsv, kJson };

// One row per DER: critical loads, restoration path per critical load,
// T_k and exact-sweep losses (taken from `report` when given).
std::string FormatPlanTable(const RestorationPlan& plan, const VerificationReport* report, TableFormat format);

}  // namespace restore

#endif  // RESTORE_REPORT_IO_H_

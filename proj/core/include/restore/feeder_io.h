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

#ifndef RESTORE_FEEDER_IO_H_
#define RESTORE_FEEDER_IO_H_

#include <string>
#include <string_view>

#include "restore/feeder.h"

namespace restore {

// Parses a feeder JSON document:
//
//   { "base_kv": 4.16, "base_kva": 1000,
//     "nodes": [ {"id": "1", "p_kw": 0, "q_kvar": 0, "critical": false}, ... ],
//     "edges": [ {"from": "1", "to": "2", "r_pu": 0.003, "x_pu": 0.006,
//                 "switchable": true, "normally_open": false,
//                 "faulted": false, "p_success": 0.95}, ... ],
//     "ders":  [ {"node": "1", "p_max_kw": 100, "q_max_kvar": 60,
//                 "energy_kwh": 200, "availability": 0.95}, ... ] }
//
// Node ids may be strings or non-negative integers. Unknown keys are
// rejected. Throws InputError (syntax errors carry line:column).
FeederGraph ParseFeeder(std::string_view document);
std::string SerializeFeeder(const FeederGraph& graph);

// Scenario document: faulted_edges ("from-to" strings), epsilon_hours,
// enforce_time_equity, v_min, v_max, v_ref, big_m, max_paths_per_loop,
// p_success_override. Every key is optional.
ScenarioConfig ParseScenario(std::string_view document);
std::string SerializeScenario(const ScenarioConfig& scenario);

}  // namespace restore

#endif  // RESTORE_FEEDER_IO_H_

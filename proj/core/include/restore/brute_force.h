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

#ifndef RESTORE_BRUTE_FORCE_H_
#define RESTORE_BRUTE_FORCE_H_

#include "restore/feeder.h"
#include "restore/plan.h"

namespace restore {

struct BruteForceResult {
  bool feasible = false;
  double objective = 0.0;
  RestorationPlan plan;
  long sets_checked = 0;
};

inline constexpr int kBruteForceMaxNodes = 14;
inline constexpr int kBruteForceMaxDers = 3;

// Exhaustive search over node-to-DER assignments and loop-path choices,
// every restoration rule checked directly on the candidate trees. Uses the
// same path catalog as the model. Throws ModelError above the size guard.
BruteForceResult BruteForceRestore(const FeederGraph& graph, const ScenarioConfig& scenario);

}  // namespace restore

#endif  // RESTORE_BRUTE_FORCE_H_

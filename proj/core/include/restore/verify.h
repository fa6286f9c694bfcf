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

#ifndef RESTORE_VERIFY_H_
#define RESTORE_VERIFY_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "restore/feeder.h"
#include "restore/plan.h"

namespace restore {

struct RsnAudit {
  std::string der_node;
  bool radial_ok = true;
  std::vector<Diagnostic> diagnostics;
};

// Structural checks of every RSN against the damaged feeder: connected
// tree rooted at its own DER, no faulted or foreign edge energized,
// non-switchable lines either fully inside or fully outside, one selected
// path per energized loop node, no node shared between RSNs.
std::vector<RsnAudit> AuditRadiality(const RestorationPlan& plan, const FeederGraph& graph);

using NodeVoltages = std::vector<std::pair<std::string, double>>;

struct SweepResult {
  bool converged = false;
  bool collapsed = false;
  int iterations = 0;
  double last_change = 0.0;
  NodeVoltages voltages;  // RSN node order, per-unit magnitudes
  double loss_kw = 0.0;
  double loss_percent = 0.0;
};

// Backward/forward sweep with constant-power loads at the restoration
// demand, source fixed at `v_ref` on the DER node.
SweepResult SweepPowerflow(const RsnPlan& rsn, const FeederGraph& graph, double v_ref, double tolerance = 1e-8,
                           int max_iterations = 100);

// Lossless linear voltage estimate along the RSN tree.
NodeVoltages LinearVoltages(const RsnPlan& rsn, const FeederGraph& graph, double v_ref);

// p_success ^ lines.
double RestorationPathReliability(double p_success, int lines);

// Product of line survival probabilities over the RSN's energized edges.
double RsnReliability(const RsnPlan& rsn, const FeederGraph& graph);

struct UnavailabilityMetrics {
  double u_p = 0.0;
  double u_r = 0.0;
  double u_rc = 0.0;
};

// Node set of one RSN given as the restoration paths that span it.
struct RsnPaths {
  double availability = 1.0;
  std::vector<std::vector<std::string>> paths;
};

// (1 - availability) times the number of distinct nodes on `paths`.
double RsnUnavailability(const RsnPaths& rsn);

UnavailabilityMetrics EffectiveUnavailability(std::span<const RsnPaths> rsns, int picked_critical_loads = 0,
                                              double pickup_reward = 0.0);
UnavailabilityMetrics EffectiveUnavailability(const RestorationPlan& plan, const FeederGraph& graph);

struct TimeMetrics {
  std::vector<double> hours;  // per RSN, infinite when idle
  double t_net_hours = 0.0;
  // Mean |T_net - T_k| over RSNs that serve at least one critical load.
  double average_bias = 0.0;
};

TimeMetrics RestorationTimes(const RestorationPlan& plan, const FeederGraph& graph);

struct SurvivalEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  long samples = 0;
};

// Independent line failures with the given probabilities; a trial
// survives when no line fails.
SurvivalEstimate MonteCarloSurvival(std::span<const double> failure_probabilities, long samples,
                                    std::uint64_t seed);
SurvivalEstimate MonteCarloSurvival(const RsnPlan& rsn, const FeederGraph& graph, long samples, std::uint64_t seed);

// Independent substream seed for RSN `index` under a master seed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

struct VerifyOptions {
  double v_ref = 1.0;
  long samples = 100000;
  std::uint64_t seed = 1;
  double sweep_tolerance = 1e-8;
  int max_iterations = 100;
};

struct RsnReport {
  RsnAudit audit;
  SweepResult sweep;
  NodeVoltages linear_voltages;
  double max_linear_error = 0.0;
  double reliability = 1.0;
  double restoration_hours = 0.0;
  double unavailability = 0.0;
  SurvivalEstimate survival;
};

struct VerificationReport {
  std::vector<RsnReport> rsns;
  double total_reliability = 1.0;
  UnavailabilityMetrics metrics;
  TimeMetrics times;
  int picked_critical_loads = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  bool ok = true;  // every audit passed and every sweep converged
};

// Runs every check and metric on a plan. `graph` is the damaged feeder.
VerificationReport Verify(const RestorationPlan& plan, const FeederGraph& graph, const VerifyOptions& options = {});

}  // namespace restore

#endif  // RESTORE_VERIFY_H_

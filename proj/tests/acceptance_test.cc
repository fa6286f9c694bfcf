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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "restore/brute_force.h"
#include "restore/mps.h"
#include "restore/plan.h"
#include "restore/verify.h"
#include "support/fixtures.h"

namespace restore {
namespace {

constexpr double kMetricTol = 1e-9;
constexpr double kObjectiveTol = 1e-9;
constexpr double kRoundTripTol = 1e-6;
constexpr double kLossLimitPercent = 1.0;
constexpr double kVoltageGapLimit = 0.005;
constexpr double kStdErrors = 3.0;
constexpr long kMcSamples = 100000;
constexpr std::uint64_t kMcSeed = 20240601;

using PathList = std::vector<std::vector<std::string>>;

std::vector<std::string> Split(const std::string& path) {
  std::vector<std::string> out;
  std::stringstream in(path);
  std::string id;
  while (std::getline(in, id, '-')) out.push_back(id);
  return out;
}

RsnPaths Paths(double availability, std::initializer_list<const char*> paths) {
  RsnPaths rsn{availability, {}};
  for (const char* p : paths) rsn.paths.push_back(Split(p));
  return rsn;
}

struct Check {
  bool ok = true;
  std::string detail;
  void Fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

struct Criterion {
  int number;
  std::string name;
  double time_limit_seconds;
  std::function<void(Check&)> body;
};

std::string Num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

// Every solved fixture plan used by the per-RSN criteria.
struct FixturePlan {
  std::string name;
  testing::SolvedCase solved;
};

std::vector<FixturePlan> SolvedFixtures() {
  std::vector<FixturePlan> out;
  auto add = [&](std::string name, const FeederGraph& g, const ScenarioConfig& s) {
    testing::SolvedCase c = testing::SolveCase(g, s);
    if (c.solved()) out.push_back({std::move(name), std::move(c)});
  };
  ScenarioConfig fault;
  fault.faulted_edges = {{"3", "4"}};
  testing::Fx8Options small;
  small.p_max_kw = 25;
  add("fx8", testing::Fx8(), {});
  add("fx8-fault", testing::Fx8(), fault);
  add("fx8-pmax25", testing::Fx8(small), {});
  add("two-der", testing::TwoDerMeshed(), {});
  ScenarioConfig equity;
  equity.enforce_time_equity = true;
  equity.epsilon_hours = 1.0;
  add("two-der-equity", testing::TwoDerMeshed(), equity);
  add("synthetic123", testing::Synthetic123(), testing::Synthetic123Faults());
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto rc = testing::RandomFeeder(seed);
    add("random-" + std::to_string(seed), rc.graph, rc.scenario);
  }
  return out;
}

void MajorDamageUnavailability(Check& c) {
  const std::vector<RsnPaths> rsns = {
      Paths(0.95, {"4-3-1-7-8-9", "4-3-1-7-8-13-34-15-17", "4-3-1-7-8-13-152-52-53-54-94"}),
      Paths(0.95, {"26-25-28-29-30", "26-25-23-21-18-135-35-36-37"}),
      Paths(0.92, {"44-45-46"}),
      Paths(0.90, {"86-87"}),
      Paths(0.95, {"60-62-63-64-65-66", "60-160-67-72-76-77-78-79"}),
  };
  const double published[] = {0.75, 0.6, 0.24, 0.2, 0.65};
  std::string got;
  for (size_t k = 0; k < rsns.size(); ++k) {
    const double u = RsnUnavailability(rsns[k]);
    got += (k ? "/" : "") + Num(u);
    if (std::abs(u - published[k]) > kMetricTol) c.Fail("RSN " + std::to_string(k) + " gives " + Num(u, 12));
  }
  const double total = EffectiveUnavailability(rsns).u_r;
  if (std::abs(total - 2.44) > kMetricTol) c.Fail("total " + Num(total, 12));
  if (c.ok) c.detail = "U_R^k " + got;
}

void MinorDamageUnavailability(Check& c) {
  const std::vector<std::vector<RsnPaths>> cases = {
      {Paths(0.95, {"4-3-1-7-8-9", "4-3-1-7-8-13-34-15-17"}), Paths(0.95, {"26-27", "26-25-28-29-30"}),
       Paths(0.95, {"44-42-40-35-36-37", "44-45-46"}),
       Paths(0.95, {"86-76-77-78-79", "86-87", "86-76-72-67-97-197-101"}),
       Paths(0.95, {"60-62-63-64-65-66", "60-57-54-94"})},
      {Paths(0.95, {"4-3-1-7-8-9", "4-3-1-7-8-13-34-15-17"}),
       Paths(0.95, {"26-27", "26-25-28-29-30", "26-25-23-21-18-135-35-36-37"}), Paths(0.92, {"44-45-46"}),
       Paths(0.95, {"86-76-77-78-79", "86-87", "86-87-89-91-93-94", "86-76-72-67-97-197-101"}),
       Paths(0.90, {"60-62-63-64-65-66"})},
      {Paths(0.95, {"4-3-1-7-8-9", "4-3-1-7-8-13-34-15-17"}), Paths(0.95, {"26-27"}),
       Paths(0.92, {"44-45-46", "44-42-40-35-36-37", "44-42-40-35-135-18-21-23-25-28-29-30"}),
       Paths(0.95, {"86-76-77-78-79", "86-87"}),
       Paths(0.90, {"60-160-67-97-197-101", "60-62-63-64-65-66", "60-57-54-94"})},
  };
  const double published[] = {2.2, 2.74, 3.58};
  std::string got;
  for (size_t i = 0; i < cases.size(); ++i) {
    const double u = EffectiveUnavailability(cases[i]).u_r;
    got += (i ? "/" : "") + Num(u);
    if (std::abs(u - published[i]) > kMetricTol) c.Fail("case " + std::to_string(i + 1) + " gives " + Num(u, 12));
  }
  if (c.ok) c.detail = "U_R " + got;
}

void OracleEquivalence(Check& c) {
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto rc = testing::RandomFeeder(seed);
    const BruteForceResult oracle = BruteForceRestore(rc.graph, rc.scenario);
    const testing::SolvedCase milp = testing::SolveCase(rc.graph, rc.scenario);
    const std::string tag = "seed " + std::to_string(seed);
    if (oracle.feasible != milp.solved()) {
      c.Fail(tag + ": feasibility differs");
      continue;
    }
    if (!oracle.feasible) continue;
    ++feasible;
    if (milp.solution.status != MilpStatus::kOptimal) c.Fail(tag + ": not proven optimal");
    if (std::abs(oracle.objective - milp.solution.objective) > kObjectiveTol) {
      c.Fail(tag + ": " + Num(milp.solution.objective, 12) + " vs oracle " + Num(oracle.objective, 12));
    }
    if (oracle.plan.picked_critical_loads != milp.plan.picked_critical_loads) c.Fail(tag + ": picked counts differ");
  }
  if (c.ok) c.detail = "100 feeders, " + std::to_string(feasible) + " feasible, all objectives equal";
}

void Fx8Regression(Check& c) {
  using Ids = std::vector<std::string>;
  struct Case {
    std::string name;
    FeederGraph graph;
    ScenarioConfig scenario;
    double objective;
    Ids nodes;
    Ids critical_loads;
  };
  ScenarioConfig fault;
  fault.faulted_edges = {{"3", "4"}};
  testing::Fx8Options small;
  small.p_max_kw = 25;
  const std::vector<Case> cases = {
      {"undamaged", testing::Fx8(), {}, -15.7, {"1", "2", "3", "4", "5", "7"}, {"4", "7"}},
      {"fault 3-4", testing::Fx8(), fault, -15.65, {"1", "2", "4", "5", "6", "7", "8"}, {"4", "7"}},
      {"p_max 25", testing::Fx8(small), {}, -7.8, {"1", "2", "5", "7"}, {"7"}},
  };
  for (const Case& k : cases) {
    const BruteForceResult oracle = BruteForceRestore(k.graph, k.scenario);
    const testing::SolvedCase milp = testing::SolveCase(k.graph, k.scenario);
    if (!oracle.feasible || !milp.solved()) {
      c.Fail(k.name + ": no plan");
      continue;
    }
    if (std::abs(oracle.objective - k.objective) > kObjectiveTol) c.Fail(k.name + ": oracle " + Num(oracle.objective));
    if (std::abs(milp.solution.objective - k.objective) > kObjectiveTol) {
      c.Fail(k.name + ": solver " + Num(milp.solution.objective));
    }
    if (milp.plan.rsns[0].nodes != k.nodes) c.Fail(k.name + ": RSN node set differs");
    if (milp.plan.rsns[0].critical_loads != k.critical_loads) c.Fail(k.name + ": picked loads differ");
  }
  if (c.ok) c.detail = "-15.7 / -15.65 tie path / CL-7 only";
}

void Equity(Check& c) {
  const FeederGraph g = testing::TwoDerMeshed();
  const testing::SolvedCase free_run = testing::SolveCase(g);
  if (!free_run.solved()) {
    c.Fail("unconstrained run has no plan");
    return;
  }
  int feasible = 0;
  double worst_margin = 0.0;
  for (double eps : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5}) {
    ScenarioConfig s;
    s.enforce_time_equity = true;
    s.epsilon_hours = eps;
    const testing::SolvedCase run = testing::SolveCase(g, s);
    if (!run.solved()) continue;
    ++feasible;
    for (const RsnPlan& rsn : run.plan.rsns) {
      if (!rsn.active()) continue;
      const double bias = std::abs(run.plan.t_net_hours - rsn.restoration_hours);
      worst_margin = std::max(worst_margin, bias - eps);
      if (bias > eps + kMetricTol) c.Fail("eps " + Num(eps) + ": bias " + Num(bias));
    }
    if (free_run.solution.objective > run.solution.objective + kObjectiveTol) {
      c.Fail("eps " + Num(eps) + ": dropping equity worsened the objective");
    }
  }
  if (feasible == 0) c.Fail("no tolerance was feasible");
  ScenarioConfig tight;
  tight.enforce_time_equity = true;
  tight.epsilon_hours = 0.01;
  if (testing::SolveCase(testing::TwoIslandEquity(), tight).solved()) c.Fail("disjoint reserves met a 0.01 h band");
  if (c.ok) c.detail = std::to_string(feasible) + " tolerances feasible, every active |T_net - T_k| within eps";
}

void PowerFlow(Check& c, const std::vector<FixturePlan>& fixtures) {
  double worst_loss = 0.0;
  double worst_gap = 0.0;
  int rsns = 0;
  for (const FixturePlan& f : fixtures) {
    for (const RsnPlan& rsn : f.solved.plan.rsns) {
      const FeederGraph& g = f.solved.model.graph;
      const SweepResult sweep = SweepPowerflow(rsn, g, f.solved.model.scenario.v_ref);
      const NodeVoltages linear = LinearVoltages(rsn, g, f.solved.model.scenario.v_ref);
      ++rsns;
      if (!sweep.converged) {
        c.Fail(f.name + " DER-" + rsn.der_node + ": sweep did not converge");
        continue;
      }
      double gap = 0.0;
      for (size_t i = 0; i < linear.size(); ++i) gap = std::max(gap, std::abs(linear[i].second - sweep.voltages[i].second));
      worst_loss = std::max(worst_loss, sweep.loss_percent);
      worst_gap = std::max(worst_gap, gap);
      if (sweep.loss_percent >= kLossLimitPercent) c.Fail(f.name + ": losses " + Num(sweep.loss_percent) + "%");
      if (gap >= kVoltageGapLimit) c.Fail(f.name + ": voltage gap " + Num(gap));
    }
  }
  if (c.ok) {
    c.detail = std::to_string(rsns) + " RSNs, max losses " + Num(worst_loss, 4) + "%, max |dV| " + Num(worst_gap, 3) +
               " pu";
  }
}

void Reliability(Check& c, const std::vector<FixturePlan>& fixtures) {
  auto check = [&](const std::string& tag, std::span<const double> q, double expected, std::uint64_t seed) {
    const SurvivalEstimate s = MonteCarloSurvival(q, kMcSamples, seed);
    const double se = std::sqrt(expected * (1 - expected) / kMcSamples);
    if (std::abs(s.estimate - expected) > kStdErrors * se + 1e-15) {
      c.Fail(tag + ": " + Num(s.estimate) + " vs " + Num(expected) + " (se " + Num(se) + ")");
    }
  };
  check("anchor 0.9^3", std::vector<double>(3, 0.1), 0.729, kMcSeed);
  check("anchor 0.95^5", std::vector<double>(5, 0.05), std::pow(0.95, 5), kMcSeed);
  int rsns = 0;
  for (const FixturePlan& f : fixtures) {
    for (size_t k = 0; k < f.solved.plan.rsns.size(); ++k) {
      const RsnPlan& rsn = f.solved.plan.rsns[k];
      const FeederGraph& g = f.solved.model.graph;
      std::vector<double> q;
      double expected = 1.0;
      for (const EdgeRef& e : rsn.edges) {
        const double p = g.edge(g.FindEdge(e.first, e.second)).p_success;
        q.push_back(1 - p);
        expected *= p;
      }
      if (std::abs(RsnReliability(rsn, g) - expected) > kMetricTol) c.Fail(f.name + ": analytic reliability");
      check(f.name + " DER-" + rsn.der_node, q, expected, DeriveSeed(kMcSeed, k));
      ++rsns;
    }
  }
  if (c.ok) c.detail = "anchors 0.729 and 0.77378 plus " + std::to_string(rsns) + " RSNs within 3 standard errors";
}

void StructuralIdentity(Check& c, const std::vector<FixturePlan>& fixtures) {
  for (const FixturePlan& f : fixtures) {
    const testing::SolvedCase& s = f.solved;
    for (size_t k = 0; k < s.plan.rsns.size(); ++k) {
      double sum = 0.0;
      for (int j : s.model.index.v[k]) sum += s.solution.values[j];
      if (std::abs(sum - (s.plan.rsns[k].line_count() + 1)) > kMetricTol) c.Fail(f.name + ": node count");
      if (static_cast<int>(s.plan.rsns[k].edges.size()) != s.plan.rsns[k].line_count()) c.Fail(f.name + ": edges");
    }
    const double recomputed = EffectiveUnavailability(s.plan, s.model.graph).u_rc;
    if (std::abs(s.solution.objective - recomputed) > kObjectiveTol) {
      c.Fail(f.name + ": objective " + Num(s.solution.objective, 12) + " vs U_RC " + Num(recomputed, 12));
    }
  }
  if (c.ok) c.detail = std::to_string(fixtures.size()) + " solved plans";
}

void Interchange(Check& c) {
  const std::vector<std::pair<std::string, testing::SolvedCase>> cases = {
      {"fx8", testing::SolveCase(testing::Fx8())},
      {"two-der", testing::SolveCase(testing::TwoDerMeshed())},
      {"synthetic123", testing::SolveCase(testing::Synthetic123(), testing::Synthetic123Faults())},
  };
  for (const auto& [name, s] : cases) {
    if (!s.solved()) {
      c.Fail(name + ": no plan");
      continue;
    }
    const MilpModel reread = ReadMps(ExportMps(s.model.milp));
    if (reread.num_variables() != s.model.milp.num_variables()) c.Fail(name + ": column count");
    const ImportedSolution imported = ImportSolution(reread, FormatSolution(s.model.milp, s.solution.values));
    if (imported.solution.status != MilpStatus::kFeasible) {
      c.Fail(name + ": imported solution infeasible in re-read model");
      continue;
    }
    if (std::abs(imported.solution.objective - s.solution.objective) > kRoundTripTol) c.Fail(name + ": objective");
    if (ExtractPlan(s.model, imported.solution.values) != s.plan) c.Fail(name + ": plan differs");
  }
  if (c.ok) c.detail = "3 models exported, re-read and re-imported";
}

void Scale(Check& c) {
  const testing::SolvedCase s = testing::SolveCase(testing::Synthetic123(), testing::Synthetic123Faults());
  if (s.solution.status != MilpStatus::kOptimal) {
    c.Fail(std::string("status ") + std::string(MilpStatusName(s.solution.status)));
    return;
  }
  c.detail = std::to_string(s.model.milp.num_variables()) + " columns, " + std::to_string(s.solution.stats.nodes) +
             " nodes, " + std::to_string(s.plan.picked_critical_loads) + " critical loads";
}

}  // namespace
}  // namespace restore

int main() {
  using namespace restore;
  std::vector<FixturePlan> fixtures;
  const std::vector<Criterion> criteria = {
      {1, "major-damage-unavailability", 1.0, MajorDamageUnavailability},
      {2, "minor-damage-unavailability", 1.0, MinorDamageUnavailability},
      {3, "oracle-equivalence", 300.0, OracleEquivalence},
      {4, "fx8-regression", 10.0, Fx8Regression},
      {5, "equity-constraint", 30.0, Equity},
      {6, "powerflow-fidelity", 60.0, [&](Check& c) { PowerFlow(c, fixtures); }},
      {7, "reliability-consistency", 60.0, [&](Check& c) { Reliability(c, fixtures); }},
      {8, "structural-identity", 60.0, [&](Check& c) { StructuralIdentity(c, fixtures); }},
      {9, "mps-round-trip", 60.0, Interchange},
      {10, "scale-123-node", 60.0, Scale},
  };
  const auto t0 = std::chrono::steady_clock::now();
  fixtures = SolvedFixtures();
  std::printf("solved %zu fixture plans in %.2f s\n", fixtures.size(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  int failures = 0;
  for (const Criterion& k : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      k.body(check);
    } catch (const std::exception& e) {
      check.Fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > k.time_limit_seconds) check.Fail("took " + std::to_string(seconds) + " s");
    failures += !check.ok;
    std::printf("%s %2d %-26s %.3f s  %s\n", check.ok ? "PASS" : "FAIL", k.number, k.name.c_str(), seconds,
                check.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

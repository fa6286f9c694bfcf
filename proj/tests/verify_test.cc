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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "restore/plan.h"
#include "restore/verify.h"
#include "support/fixtures.h"

namespace restore {
namespace {

using Complex = std::complex<double>;

FeederGraph TwoNode(double r, double x, double p_kw, double q_kvar) {
  return FeederGraph(12.47, 1000.0, {{"1", 0, 0, false}, {"2", p_kw, q_kvar, true}},
                     {{"1", "2", r, x, true, false, false, 0.95}}, {{"1", 500, 300, 1000, 0.95}});
}

RsnPlan Rsn(const FeederGraph& g, const std::string& der, std::vector<std::string> nodes, std::vector<EdgeRef> edges) {
  RestorationPlan plan;
  RsnPlan rsn;
  rsn.der_node = der;
  rsn.nodes = std::move(nodes);
  rsn.edges = std::move(edges);
  plan.rsns = {rsn};
  FinalizePlan(g, plan);
  return plan.rsns[0];
}

double VoltageOf(const NodeVoltages& v, const std::string& id) {
  for (const auto& [node, value] : v) {
    if (node == id) return value;
  }
  return NAN;
}

// Closed form for one line: |V2|^2 is the larger root of
// u^2 + (2(rP + xQ) - V1^2) u + (r^2 + x^2)(P^2 + Q^2) = 0.
double TwoNodeVoltage(double r, double x, double p, double q, double v1) {
  const double b = 2 * (r * p + x * q) - v1 * v1;
  const double c = (r * r + x * x) * (p * p + q * q);
  return std::sqrt((-b + std::sqrt(b * b - 4 * c)) / 2);
}

// Independent fixed point on the path-impedance form
// V_j = V_0 - sum_k Z(common path of j and k) conj(S_k / V_k).
std::map<std::string, double> PathImpedanceVoltages(const RsnPlan& rsn, const FeederGraph& g, double v_ref) {
  std::map<std::string, std::string> parent;
  std::map<std::string, Complex> z_up;
  for (const EdgeRef& e : rsn.edges) {
    parent[e.second] = e.first;
    const EdgeRecord& rec = g.edge(g.FindEdge(e.first, e.second));
    z_up[e.second] = Complex(rec.r_pu, rec.x_pu);
  }
  auto ancestors = [&](std::string n) {
    std::vector<std::string> out;
    while (parent.count(n)) {
      out.push_back(n);
      n = parent[n];
    }
    return out;
  };
  std::map<std::string, Complex> v;
  for (const std::string& n : rsn.nodes) v[n] = v_ref;
  for (int iter = 0; iter < 200; ++iter) {
    std::map<std::string, Complex> current;
    for (const std::string& n : rsn.nodes) {
      const int i = g.NodeIndex(n);
      const Complex s(g.RestorationDemandKw(i) / g.base_kva(), g.RestorationDemandKvar(i) / g.base_kva());
      current[n] = std::conj(s / v[n]);
    }
    std::map<std::string, Complex> next;
    for (const std::string& j : rsn.nodes) {
      const auto aj = ancestors(j);
      Complex drop = 0;
      for (const std::string& k : rsn.nodes) {
        const auto ak = ancestors(k);
        for (const std::string& e : aj) {
          if (std::find(ak.begin(), ak.end(), e) != ak.end()) drop += z_up[e] * current[k];
        }
      }
      next[j] = v_ref - drop;
    }
    v = next;
  }
  std::map<std::string, double> out;
  for (const auto& [n, value] : v) out[n] = std::abs(value);
  return out;
}

TEST(SweepPowerflow, TwoNodeMatchesClosedForm) {
  const FeederGraph g = TwoNode(0.01, 0.02, 100, 50);
  const RsnPlan rsn = Rsn(g, "1", {"1", "2"}, {{"1", "2"}});
  const SweepResult r = SweepPowerflow(rsn, g, 1.0);
  ASSERT_TRUE(r.converged);
  EXPECT_FALSE(r.collapsed);
  EXPECT_LT(r.last_change, 1e-8);
  const double v2 = TwoNodeVoltage(0.01, 0.02, 0.1, 0.05, 1.0);
  EXPECT_NEAR(VoltageOf(r.voltages, "2"), v2, 1e-9);
  EXPECT_NEAR(VoltageOf(r.voltages, "1"), 1.0, 1e-15);
  const double loss = 0.01 * (0.1 * 0.1 + 0.05 * 0.05) / (v2 * v2);
  EXPECT_NEAR(r.loss_kw, loss * 1000, 1e-6);
  EXPECT_NEAR(r.loss_percent, 100 * loss / 0.1, 1e-6);
  EXPECT_NEAR(r.loss_percent, 0.1255, 1e-3);
}

TEST(LinearVoltages, TwoNodeDropAndAgreement) {
  const FeederGraph g = TwoNode(0.01, 0.02, 100, 50);
  const RsnPlan rsn = Rsn(g, "1", {"1", "2"}, {{"1", "2"}});
  const NodeVoltages lin = LinearVoltages(rsn, g, 1.0);
  EXPECT_NEAR(VoltageOf(lin, "2"), 0.998, 1e-12);
  const SweepResult exact = SweepPowerflow(rsn, g, 1.0);
  EXPECT_LT(std::abs(VoltageOf(lin, "2") - VoltageOf(exact.voltages, "2")), 2e-5);
}

TEST(SweepPowerflow, AgreesWithPathImpedanceFormOnSolvedPlans) {
  std::vector<FeederGraph> graphs = {testing::Fx8(), testing::TwoDerMeshed()};
  for (const FeederGraph& g : graphs) {
    const testing::SolvedCase c = testing::SolveCase(g);
    ASSERT_TRUE(c.solved());
    for (const RsnPlan& rsn : c.plan.rsns) {
      const SweepResult r = SweepPowerflow(rsn, c.model.graph, 1.0);
      ASSERT_TRUE(r.converged);
      const auto want = PathImpedanceVoltages(rsn, c.model.graph, 1.0);
      for (const auto& [node, value] : r.voltages) EXPECT_NEAR(value, want.at(node), 1e-9) << node;
    }
  }
}

TEST(SweepPowerflow, HeavyLoadCollapses) {
  const FeederGraph g = TwoNode(0.5, 1.0, 2000, 1500);
  const RsnPlan rsn = Rsn(g, "1", {"1", "2"}, {{"1", "2"}});
  const SweepResult r = SweepPowerflow(rsn, g, 1.0);
  EXPECT_FALSE(r.converged);
}

TEST(SweepPowerflow, SingletonHasNoLoss) {
  const FeederGraph g = TwoNode(0.01, 0.02, 100, 50);
  const RsnPlan rsn = Rsn(g, "1", {"1"}, {});
  const SweepResult r = SweepPowerflow(rsn, g, 1.0);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.loss_kw, 0.0);
  EXPECT_EQ(r.loss_percent, 0.0);
}

TEST(Reliability, PathFormula) {
  EXPECT_NEAR(RestorationPathReliability(0.9, 3), 0.729, 1e-15);
  EXPECT_NEAR(RestorationPathReliability(0.95, 5), 0.7737809375, 1e-12);
  EXPECT_EQ(RestorationPathReliability(0.5, 0), 1.0);
  const testing::SolvedCase c = testing::SolveCase(testing::Fx8());
  ASSERT_TRUE(c.solved());
  EXPECT_NEAR(RsnReliability(c.plan.rsns[0], c.model.graph), std::pow(0.95, 5), 1e-15);
}

TEST(Unavailability, DistinctNodesTimesOutage) {
  RsnPaths rsn{0.9, {{"1", "2", "3"}, {"1", "2", "4"}}};
  EXPECT_NEAR(RsnUnavailability(rsn), 0.4, 1e-15);
  RsnPaths other{0.95, {{"7", "8"}}};
  const std::vector<RsnPaths> both = {rsn, other};
  const UnavailabilityMetrics m = EffectiveUnavailability(both, 2, 5.0);
  EXPECT_NEAR(m.u_r, 0.5, 1e-15);
  EXPECT_NEAR(m.u_p, 6.0, 1e-15);
  EXPECT_NEAR(m.u_rc, 0.5 - 10.0, 1e-15);
}

TEST(MonteCarloSurvival, AnalyticAnchors) {
  const std::vector<double> three = {0.1, 0.1, 0.1};
  const SurvivalEstimate a = MonteCarloSurvival(three, 100000, 42);
  const double se_a = std::sqrt(0.729 * 0.271 / 100000);
  EXPECT_NEAR(a.estimate, 0.729, 3 * se_a);
  EXPECT_NEAR(a.standard_error, se_a, 1e-4);
  EXPECT_EQ(a.samples, 100000);
  const std::vector<double> five(5, 0.05);
  const double p5 = std::pow(0.95, 5);
  const SurvivalEstimate b = MonteCarloSurvival(five, 100000, 42);
  EXPECT_NEAR(b.estimate, p5, 3 * std::sqrt(p5 * (1 - p5) / 100000));
}

TEST(MonteCarloSurvival, DeterministicUnderSeed) {
  const std::vector<double> q = {0.2, 0.05, 0.3};
  const SurvivalEstimate a = MonteCarloSurvival(q, 5000, 9);
  const SurvivalEstimate b = MonteCarloSurvival(q, 5000, 9);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.standard_error, b.standard_error);
  const std::vector<double> none = {0.0, 0.0};
  EXPECT_EQ(MonteCarloSurvival(none, 1000, 3).estimate, 1.0);
  EXPECT_NE(DeriveSeed(1, 0), DeriveSeed(1, 1));
  EXPECT_NE(DeriveSeed(1, 0), DeriveSeed(2, 0));
  EXPECT_EQ(DeriveSeed(5, 3), DeriveSeed(5, 3));
}

class AuditTest : public ::testing::Test {
 protected:
  void SetUp() override {
    c_ = testing::SolveCase(testing::Fx8());
    ASSERT_TRUE(c_.solved());
  }
  std::vector<std::string> Codes(const RestorationPlan& plan) {
    std::vector<std::string> out;
    for (const RsnAudit& a : AuditRadiality(plan, c_.model.graph)) {
      for (const Diagnostic& d : a.diagnostics) out.push_back(d.code);
    }
    return out;
  }
  testing::SolvedCase c_;
};

TEST_F(AuditTest, OptimumPasses) {
  const auto audits = AuditRadiality(c_.plan, c_.model.graph);
  ASSERT_EQ(audits.size(), 1u);
  EXPECT_TRUE(audits[0].radial_ok);
  EXPECT_TRUE(audits[0].diagnostics.empty());
}

TEST_F(AuditTest, CycleIsReported) {
  RestorationPlan plan = c_.plan;
  RsnPlan& rsn = plan.rsns[0];
  rsn.nodes = {"1", "2", "3", "4", "5", "6", "7", "8"};
  rsn.edges = {{"1", "2"}, {"2", "3"}, {"3", "4"}, {"2", "5"}, {"5", "6"}, {"6", "8"}, {"8", "4"}, {"5", "7"}};
  rsn.loop_paths.clear();
  const auto codes = Codes(plan);
  EXPECT_NE(std::find(codes.begin(), codes.end(), "cycle"), codes.end());
}

TEST_F(AuditTest, DisconnectedAndUnknownEdges) {
  RestorationPlan plan = c_.plan;
  plan.rsns[0].nodes.push_back("8");
  auto codes = Codes(plan);
  EXPECT_NE(std::find(codes.begin(), codes.end(), "disconnected"), codes.end());
  plan = c_.plan;
  plan.rsns[0].edges.push_back({"1", "8"});
  codes = Codes(plan);
  EXPECT_NE(std::find(codes.begin(), codes.end(), "unknown_edge"), codes.end());
}

TEST_F(AuditTest, FaultedEdgeIsReported) {
  ScenarioConfig s;
  s.faulted_edges = {{"3", "4"}};
  const FeederGraph damaged = ApplyScenario(testing::Fx8(), s);
  bool found = false;
  for (const RsnAudit& a : AuditRadiality(c_.plan, damaged)) {
    for (const Diagnostic& d : a.diagnostics) found |= d.code == "faulted_edge";
  }
  EXPECT_TRUE(found);
}

TEST_F(AuditTest, LoopPathMismatch) {
  RestorationPlan plan = c_.plan;
  ASSERT_FALSE(plan.rsns[0].loop_paths.empty());
  plan.rsns[0].loop_paths[0].path = {"1", "9"};
  const auto codes = Codes(plan);
  EXPECT_NE(std::find(codes.begin(), codes.end(), "loop_path"), codes.end());
}

TEST(AuditRadiality, OverlapAndForeignDer) {
  const FeederGraph g = testing::TwoDerMeshed();
  RestorationPlan plan;
  RsnPlan a;
  a.der_node = "1";
  a.nodes = {"1", "2", "3"};
  a.edges = {{"1", "2"}, {"2", "3"}};
  RsnPlan b;
  b.der_node = "6";
  b.nodes = {"3", "4", "5", "6"};
  b.edges = {{"6", "5"}, {"5", "4"}, {"4", "3"}};
  plan.rsns = {a, b};
  FinalizePlan(g, plan);
  std::vector<std::string> codes;
  for (const RsnAudit& r : AuditRadiality(plan, g)) {
    for (const Diagnostic& d : r.diagnostics) codes.push_back(d.code);
  }
  EXPECT_NE(std::find(codes.begin(), codes.end(), "overlap"), codes.end());

  plan.rsns[1].nodes = {"4", "5", "6", "1"};
  plan.rsns[1].edges = {{"6", "5"}, {"5", "4"}};
  codes.clear();
  for (const RsnAudit& r : AuditRadiality(plan, g)) {
    for (const Diagnostic& d : r.diagnostics) codes.push_back(d.code);
  }
  EXPECT_NE(std::find(codes.begin(), codes.end(), "foreign_der"), codes.end());
}

TEST(Verify, Fx8Report) {
  const testing::SolvedCase c = testing::SolveCase(testing::Fx8());
  ASSERT_TRUE(c.solved());
  VerifyOptions options;
  options.samples = 20000;
  const VerificationReport r = Verify(c.plan, c.model.graph, options);
  EXPECT_TRUE(r.ok);
  ASSERT_EQ(r.rsns.size(), 1u);
  EXPECT_NEAR(r.total_reliability, std::pow(0.95, 5), 1e-12);
  EXPECT_NEAR(r.metrics.u_r, 0.3, 1e-12);
  EXPECT_NEAR(r.metrics.u_rc, -15.7, 1e-12);
  EXPECT_DOUBLE_EQ(r.times.t_net_hours, 4.0);
  EXPECT_DOUBLE_EQ(r.times.average_bias, 0.0);
  EXPECT_DOUBLE_EQ(r.rsns[0].restoration_hours, 4.0);
  EXPECT_LT(r.rsns[0].sweep.loss_percent, 1.0);
  EXPECT_LT(r.rsns[0].max_linear_error, 0.005);
  EXPECT_EQ(r.rsns[0].survival.samples, 20000);
  EXPECT_EQ(r.picked_critical_loads, 2);
}

TEST(RestorationTimes, BiasOverActiveRsns) {
  const FeederGraph g = testing::TwoIslandEquity();
  RestorationPlan plan;
  RsnPlan a;
  a.der_node = "1";
  a.nodes = {"1"};
  RsnPlan b;
  b.der_node = "3";
  b.nodes = {"3"};
  plan.rsns = {a, b};
  FinalizePlan(g, plan);
  const TimeMetrics t = RestorationTimes(plan, g);
  EXPECT_DOUBLE_EQ(t.t_net_hours, 5.5);
  ASSERT_EQ(t.hours.size(), 2u);
  EXPECT_DOUBLE_EQ(t.hours[0], 10.0);
  EXPECT_DOUBLE_EQ(t.hours[1], 1.0);
  EXPECT_DOUBLE_EQ(t.average_bias, 4.5);
}

}  // namespace
}  // namespace restore

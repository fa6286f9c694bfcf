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

#include <cmath>
#include <string>

#include "restore/error.h"
#include "restore/milp.h"
#include "restore/model_builder.h"
#include "support/fixtures.h"

namespace restore {
namespace {

using testing::Fx8;

const LinearConstraint& Row(const MilpModel& m, const std::string& label) {
  for (const LinearConstraint& c : m.constraints()) {
    if (c.label == label) return c;
  }
  throw std::runtime_error("no row " + label);
}

double Coefficient(const MilpModel& m, const LinearConstraint& c, const std::string& var) {
  double sum = 0.0;
  for (const auto& [j, a] : c.terms) {
    if (m.variable(j).name == var) sum += a;
  }
  return sum;
}

int CountKind(const MilpModel& m, VarKind kind) {
  int n = 0;
  for (const VariableHandle& v : m.variables()) n += v.kind == kind;
  return n;
}

TEST(ComputeTNet, PooledReserveOverCriticalDemand) {
  EXPECT_DOUBLE_EQ(ComputeTNet(Fx8()), 200.0 / 50.0);
  EXPECT_DOUBLE_EQ(ComputeTNet(testing::TwoIslandEquity()), 110.0 / 20.0);
  const FeederGraph none = testing::EditFeeder(Fx8(), [](auto& n, auto&, auto&) {
    for (NodeRecord& r : n) r.is_critical = false;
  });
  EXPECT_THROW(ComputeTNet(none), ModelError);
}

TEST(LinearizeProduct, FeasibleSetIsExactlyTheProduct) {
  for (bool symmetric : {false, true}) {
    MilpModel m;
    const double bound = 2.0;
    const int y = m.AddVariable(VarKind::kAssignment, "y", 0, 1, true);
    const int w = m.AddVariable(VarKind::kVoltage, "w", symmetric ? -bound : 0.0, bound, false);
    const int z = LinearizeProduct(m, y, w, bound, symmetric, "t", -1);
    EXPECT_EQ(m.num_constraints(), 4);
    for (double yv : {0.0, 1.0}) {
      for (double wv : {symmetric ? -2.0 : 0.0, -0.7, 0.0, 0.3, 1.9, 2.0}) {
        if (!symmetric && wv < 0) continue;
        std::vector<double> x(3);
        x[y] = yv;
        x[w] = wv;
        x[z] = yv * wv;
        EXPECT_LE(m.MaxViolation(x), 1e-12) << yv << " " << wv;
        for (double delta : {-0.05, 0.05}) {
          x[z] = yv * wv + delta;
          EXPECT_GT(m.MaxViolation(x), 1e-3) << yv << " " << wv << " " << delta;
        }
      }
    }
  }
}

TEST(LinearizeProduct, RejectsFactorBeyondBound) {
  MilpModel m;
  const int y = m.AddVariable(VarKind::kAssignment, "y", 0, 1, true);
  const int w = m.AddVariable(VarKind::kVoltage, "w", 0, 5, false);
  EXPECT_THROW(LinearizeProduct(m, y, w, 2.0, false, "t", -1), ModelError);
  const int u = m.AddVariable(VarKind::kVoltage, "u", 0, kInf, false);
  EXPECT_THROW(LinearizeProduct(m, y, u, 2.0, false, "t", -1), ModelError);
}

TEST(BuildModel, Fx8VariableCounts) {
  const RestorationModel model = BuildModel(Fx8(), {});
  const MilpModel& m = model.milp;
  EXPECT_EQ(CountKind(m, VarKind::kAssignment), 8);
  EXPECT_EQ(CountKind(m, VarKind::kPickup), 2);
  EXPECT_EQ(CountKind(m, VarKind::kPath), static_cast<int>(model.catalog.entries.size()));
  EXPECT_EQ(static_cast<int>(model.index.y.size()), static_cast<int>(model.catalog.entries.size()));
  for (const VariableHandle& v : m.variables()) {
    EXPECT_EQ(v.is_integer, IsBinaryKind(v.kind)) << v.name;
  }
  EXPECT_DOUBLE_EQ(m.t_net_hours, 4.0);
}

TEST(BuildModel, Fx8FamilyCounts) {
  const MilpModel m = BuildModel(Fx8(), {}).milp;
  const auto& f = m.family_counts;
  EXPECT_EQ(f.at("der_root"), 1);
  EXPECT_EQ(f.at("one_rsn"), 6);  // one per non-DER, non-critical node
  EXPECT_EQ(f.at("pickup"), 2);
  EXPECT_EQ(f.at("capacity"), 2);
  EXPECT_EQ(f.at("flow_p"), 8);
  EXPECT_EQ(f.at("flow_q"), 8);
  EXPECT_EQ(f.count("fault_split"), 0u);
  EXPECT_EQ(f.count("equity"), 0u);
  EXPECT_EQ(f.at("path_pick"), 6);
}

TEST(BuildModel, Fx8Objective) {
  const MilpModel m = BuildModel(Fx8(), {}).milp;
  for (int j = 0; j < m.num_variables(); ++j) {
    const VariableHandle& v = m.variable(j);
    const double c = m.objective()[j];
    if (v.kind == VarKind::kAssignment) {
      EXPECT_NEAR(c, 0.05, 1e-15) << v.name;
    } else if (v.kind == VarKind::kPickup) {
      EXPECT_DOUBLE_EQ(c, -8.0) << v.name;
    } else {
      EXPECT_EQ(c, 0.0) << v.name;
    }
  }
}

TEST(BuildModel, Fx8CapacityRowUsesCriticalDemandOnly) {
  const MilpModel m = BuildModel(Fx8(), {}).milp;
  const LinearConstraint& cap = Row(m, "cap_p:1");
  EXPECT_EQ(cap.sense, Sense::kLe);
  EXPECT_DOUBLE_EQ(cap.rhs, 100.0);
  EXPECT_DOUBLE_EQ(Coefficient(m, cap, "v_4_1"), 30.0);
  EXPECT_DOUBLE_EQ(Coefficient(m, cap, "v_7_1"), 20.0);
  EXPECT_EQ(cap.terms.size(), 2u);
}

TEST(BuildModel, Fx8LeafFlow) {
  const MilpModel m = BuildModel(Fx8(), {}).milp;
  const LinearConstraint& row = Row(m, "flow_p:7:1");
  EXPECT_EQ(row.sense, Sense::kEq);
  EXPECT_EQ(row.terms.size(), 2u);
  EXPECT_DOUBLE_EQ(Coefficient(m, row, "p_7_1"), 1.0);
  EXPECT_DOUBLE_EQ(Coefficient(m, row, "v_7_1"), -20.0 / 1000.0);
}

TEST(BuildModel, Fx8EquityBand) {
  ScenarioConfig s;
  s.enforce_time_equity = true;
  s.epsilon_hours = 1.0;
  const MilpModel m = BuildModel(Fx8(), s).milp;
  EXPECT_EQ(m.family_counts.at("equity"), 3);
  const LinearConstraint& hi = Row(m, "equity_hi:1");
  EXPECT_EQ(hi.sense, Sense::kLe);
  EXPECT_NEAR(hi.rhs, 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(Coefficient(m, hi, "v_4_1"), 30.0 / 200.0);
  EXPECT_DOUBLE_EQ(Coefficient(m, hi, "v_7_1"), 20.0 / 200.0);
  // (30 v4 + 20 v7)/200 >= v4/5 once CL-4 is served.
  const LinearConstraint& lo = Row(m, "equity_lo:1:4");
  EXPECT_EQ(lo.sense, Sense::kGe);
  EXPECT_NEAR(Coefficient(m, lo, "v_4_1"), 30.0 / 200.0 - 1.0 / 5.0, 1e-15);
  EXPECT_NEAR(Coefficient(m, lo, "v_7_1"), 20.0 / 200.0, 1e-15);
}

TEST(BuildModel, EquityToleranceMustStayBelowTNet) {
  ScenarioConfig s;
  s.enforce_time_equity = true;
  s.epsilon_hours = 4.0;
  EXPECT_THROW(BuildModel(Fx8(), s), ModelError);
}

TEST(BuildModel, FaultedEdgeSplitsEveryDer) {
  ScenarioConfig s;
  s.faulted_edges = {{"3", "4"}};
  const RestorationModel model = BuildModel(Fx8(), s);
  EXPECT_EQ(model.milp.family_counts.at("fault_split"), 1);
  const LinearConstraint& row = Row(model.milp, "fault_split:3-4:1");
  EXPECT_EQ(row.sense, Sense::kLe);
  EXPECT_DOUBLE_EQ(row.rhs, 1.0);
  EXPECT_TRUE(model.graph.edge(model.graph.FindEdge("3", "4")).faulted);
}

TEST(BuildModel, TreeVariantHasNoPathVariables) {
  const FeederGraph tree = testing::EditFeeder(Fx8(), [](auto&, auto& e, auto&) { e.erase(e.begin() + 6); });
  const MilpModel m = BuildModel(tree, {}).milp;
  EXPECT_EQ(CountKind(m, VarKind::kPath), 0);
  EXPECT_EQ(CountKind(m, VarKind::kPathFlowP), 0);
  EXPECT_EQ(CountKind(m, VarKind::kBilinearAux), 0);
}

TEST(BuildModel, UnreachableNodesAreFixedOff) {
  ScenarioConfig s;
  s.faulted_edges = {{"1", "2"}};
  const MilpModel m = BuildModel(Fx8(), s).milp;
  for (const char* name : {"v_2_1", "v_3_1", "v_4_1", "v_5_1", "v_6_1", "v_7_1", "v_8_1"}) {
    const int j = m.FindVariable(name);
    ASSERT_GE(j, 0) << name;
    EXPECT_EQ(m.variable(j).upper, 0.0) << name;
  }
}

TEST(BuildModel, BigMMustDominateCapacities) {
  ScenarioConfig s;
  s.big_m = 0.01;
  EXPECT_THROW(BuildModel(Fx8(), s), ModelError);
  s.big_m = 5.0;
  EXPECT_NO_THROW(BuildModel(Fx8(), s));
}

TEST(BuildModel, CanonicalFormIsDeterministic) {
  const FeederGraph g = testing::Synthetic123();
  EXPECT_EQ(BuildModel(g, testing::Synthetic123Faults()).milp.CanonicalForm(),
            BuildModel(g, testing::Synthetic123Faults()).milp.CanonicalForm());
}

}  // namespace
}  // namespace restore

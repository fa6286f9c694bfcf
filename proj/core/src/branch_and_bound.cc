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

#include "restore/branch_and_bound.h"

#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <tuple>

namespace restore {
namespace {

struct BoundChange {
  int column;
  double lower;
  double upper;
};

struct Node {
  double bound = -kInf;
  long id = 0;
  std::vector<BoundChange> changes;
  std::shared_ptr<const LpBasis> basis;
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const { return std::tie(a.bound, a.id) > std::tie(b.bound, b.id); }
};

}  // namespace

std::string_view MilpStatusName(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal:
      return "optimal";
    case MilpStatus::kFeasible:
      return "feasible";
    case MilpStatus::kInfeasible:
      return "infeasible";
    case MilpStatus::kUnbounded:
      return "unbounded";
    case MilpStatus::kLimit:
      return "limit";
  }
  return "unknown";
}

double RelativeGap(double incumbent, double bound) {
  const double diff = std::max(0.0, incumbent - bound);
  return incumbent == 0.0 ? diff : diff / std::abs(incumbent);
}

MilpSolution SolveMilp(const MilpModel& model, const MilpOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  MilpSolution out;
  LpSolver lp(model, options.lp);
  const int n = model.num_variables();
  std::vector<double> root_lower(n), root_upper(n);
  std::vector<int> integers;
  for (int j = 0; j < n; ++j) {
    const VariableHandle& var = model.variable(j);
    root_lower[j] = var.lower;
    root_upper[j] = var.upper;
    if (var.is_integer) {
      root_lower[j] = std::ceil(var.lower - options.integer_tolerance);
      root_upper[j] = std::floor(var.upper + options.integer_tolerance);
      lp.SetBounds(j, root_lower[j], root_upper[j]);
      integers.push_back(j);
    }
  }

  bool have_incumbent = false;
  double incumbent = kInf;
  bool exhausted = true;
  bool unbounded = false;
  auto cutoff = [&] { return incumbent - options.gap_tolerance * std::max(std::abs(incumbent), 1e-9); };

  std::priority_queue<Node, std::vector<Node>, WorseNode> open;
  long next_id = 0;
  std::vector<BoundChange> applied;
  open.push(Node{-kInf, next_id++, {}, nullptr});

  bool stopped = false;
  while (!open.empty() && !stopped) {
    Node node = open.top();
    open.pop();
    // Dive from this node until it is pruned or integral.
    while (true) {
      if (have_incumbent && node.bound >= cutoff()) break;
      if (out.stats.nodes >= options.node_limit || elapsed() > options.time_limit_seconds) {
        exhausted = false;
        open.push(std::move(node));
        stopped = true;
        break;
      }
      for (const BoundChange& c : applied) lp.SetBounds(c.column, root_lower[c.column], root_upper[c.column]);
      for (const BoundChange& c : node.changes) lp.SetBounds(c.column, c.lower, c.upper);
      applied = node.changes;

      ++out.stats.nodes;
      LpResult relax = lp.Solve(node.basis.get());
      out.stats.lp_iterations += relax.iterations;
      if (relax.status == LpStatus::kUnbounded) {
        unbounded = true;
        break;
      }
      if (relax.status == LpStatus::kIterationLimit) {
        exhausted = false;
        break;
      }
      if (relax.status == LpStatus::kInfeasible) break;
      if (have_incumbent && relax.objective >= cutoff()) break;

      int branch = -1;
      double best_distance = 0.0;
      for (int j : integers) {
        const double value = relax.x[j];
        const double frac = value - std::floor(value);
        const double distance = std::min(frac, 1.0 - frac);
        if (distance > options.integer_tolerance && distance > best_distance + 1e-12) {
          best_distance = distance;
          branch = j;
        }
      }
      if (branch < 0) {
        std::vector<double> snapped = relax.x;
        for (int j : integers) snapped[j] = std::round(snapped[j]);
        const double value = model.ObjectiveValue(snapped);
        if (!have_incumbent || value < incumbent) {
          have_incumbent = true;
          incumbent = value;
          out.values = std::move(snapped);
          out.stats.incumbents.push_back(value);
        }
        break;
      }

      const double value = relax.x[branch];
      auto basis = std::make_shared<const LpBasis>(std::move(relax.basis));
      Node down{relax.objective, next_id++, node.changes, basis};
      Node up{relax.objective, next_id++, node.changes, basis};
      down.changes.push_back({branch, lp.lower(branch), std::floor(value)});
      up.changes.push_back({branch, std::ceil(value), lp.upper(branch)});
      const bool up_first = value - std::floor(value) > 0.5;
      open.push(up_first ? std::move(down) : std::move(up));
      node = up_first ? std::move(up) : std::move(down);
    }
  }

  out.stats.wall_seconds = elapsed();
  double bound = have_incumbent ? incumbent : kInf;
  if (!open.empty()) bound = std::min(bound, open.top().bound);
  out.best_bound = bound;
  if (unbounded && !have_incumbent) {
    out.status = MilpStatus::kUnbounded;
    return out;
  }
  if (!have_incumbent) {
    out.status = exhausted ? MilpStatus::kInfeasible : MilpStatus::kLimit;
    out.values.assign(n, 0.0);
    return out;
  }
  out.objective = incumbent;
  out.gap = RelativeGap(incumbent, bound);
  out.status = exhausted && !unbounded ? MilpStatus::kOptimal : MilpStatus::kFeasible;
  return out;
}

}  // namespace restore

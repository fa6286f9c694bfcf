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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "restore/branch_and_bound.h"
#include "restore/error.h"
#include "restore/feeder_io.h"
#include "restore/log.h"
#include "restore/model_builder.h"
#include "restore/mps.h"
#include "restore/plan.h"
#include "restore/report_io.h"
#include "restore/verify.h"

#ifndef RESTORE_VERSION
#define RESTORE_VERSION "0.0.0"
#endif

namespace restore::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string command;
  std::string feeder;
  std::string scenario;
  std::string out_dir;
  std::string solver = "embedded";
  std::string solution;
  std::string plan;
  std::string format = "table";
  std::vector<double> eps;
  bool first_feasible = false;
  long samples = 100000;
  std::uint64_t seed = 1;
  double time_limit = 600.0;
  long node_limit = 1000000;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

std::string Fixed(double value, int digits) {
  if (!std::isfinite(value)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

TableFormat FormatOf(const Options& o) {
  if (o.format == "csv") return TableFormat::kCsv;
  if (o.format == "json") return TableFormat::kJson;
  return TableFormat::kTable;
}

RunManifest MakeManifest(const Options& o) {
  RunManifest m;
  m.command = o.command;
  m.feeder_path = o.feeder;
  m.scenario_path = o.scenario;
  m.plan_path = o.plan;
  m.solution_path = o.solution;
  m.out_dir = o.out_dir;
  m.solver = o.solver;
  m.eps = o.eps;
  m.samples = o.samples;
  m.seed = o.seed;
  m.tool_version = RESTORE_VERSION;
  return m;
}

FeederGraph LoadFeeder(const Options& o) {
  FeederGraph graph = ParseFeeder(ReadFile(o.feeder));
  for (const Diagnostic& d : ValidateFeeder(graph)) LogWarning(d.subject + ": " + d.message);
  return graph;
}

ScenarioConfig LoadScenario(const Options& o) {
  if (o.scenario.empty()) return ScenarioConfig{};
  return ParseScenario(ReadFile(o.scenario));
}

std::string InfeasibleMessage(const ScenarioConfig& scenario, double t_net) {
  std::string message = "infeasible: no restoration plan satisfies every constraint";
  if (scenario.enforce_time_equity) {
    message += "; the restoration-time equity band (equity rows: |T_net - T_k| <= " +
               Fixed(*scenario.epsilon_hours, 3) + " h around T_net = " + Fixed(t_net, 3) +
               " h) cannot be met; widen epsilon";
  }
  return message;
}

double MaxBias(const RestorationPlan& plan) {
  double worst = 0.0;
  for (const RsnPlan& rsn : plan.rsns) {
    if (rsn.active()) worst = std::max(worst, std::abs(plan.t_net_hours - rsn.restoration_hours));
  }
  return worst;
}

int Solve(const Options& o, std::ostream& out, std::ostream& err) {
  const FeederGraph graph = LoadFeeder(o);
  const ScenarioConfig scenario = LoadScenario(o);
  const RunManifest manifest = MakeManifest(o);
  const RestorationModel model = BuildModel(graph, scenario);
  for (const Diagnostic& d : model.catalog.diagnostics) LogWarning(d.subject + ": " + d.message);

  if (o.solver == "mps-export") {
    const std::string dir = o.out_dir.empty() ? "." : o.out_dir;
    WriteFile(dir, "model.mps", ExportMps(model.milp));
    out << "wrote " << (std::filesystem::path(dir) / "model.mps").string() << " (" << model.milp.num_variables()
        << " columns, " << model.milp.num_constraints() << " rows)\n";
    return kExitOk;
  }

  MilpSolution solution;
  if (!o.solution.empty()) {
    ImportedSolution imported = ImportSolution(model.milp, ReadFile(o.solution));
    if (!imported.warnings.empty()) {
      err << "warning: " << imported.warnings.size() << " variables missing from " << o.solution << "; set to 0\n";
    }
    if (imported.solution.status != MilpStatus::kFeasible) {
      err << "imported solution violates the model constraints\n";
      return kExitVerificationFailed;
    }
    solution = std::move(imported.solution);
  } else {
    MilpOptions options;
    options.time_limit_seconds = o.time_limit;
    options.node_limit = o.node_limit;
    solution = SolveMilp(model.milp, options);
    LogInfo("branch-and-bound: " + std::to_string(solution.stats.nodes) + " nodes, " +
            std::to_string(solution.stats.lp_iterations) + " LP iterations");
  }

  switch (solution.status) {
    case MilpStatus::kInfeasible:
    case MilpStatus::kUnbounded:
      err << InfeasibleMessage(scenario, model.milp.t_net_hours) << "\n";
      return kExitInfeasible;
    case MilpStatus::kLimit:
      err << "limit reached before any feasible plan was found\n";
      return kExitLimit;
    default:
      break;
  }

  const RestorationPlan plan = ExtractPlan(model, solution.values);
  VerifyOptions vo;
  vo.v_ref = scenario.v_ref;
  vo.samples = o.samples;
  vo.seed = o.seed;
  const VerificationReport report = Verify(plan, model.graph, vo);
  if (!o.out_dir.empty()) {
    WriteFile(o.out_dir, "plan.json", SerializePlan(plan, &manifest));
    WriteFile(o.out_dir, "report.json", SerializeReport(report, plan, &manifest));
    WriteFile(o.out_dir, "table.txt", FormatPlanTable(plan, &report, TableFormat::kTable));
    WriteFile(o.out_dir, "table.csv", FormatPlanTable(plan, &report, TableFormat::kCsv));
    WriteFile(o.out_dir, "solution.txt", FormatSolution(model.milp, solution.values));
  }
  out << FormatPlanTable(plan, &report, FormatOf(o));
  if (FormatOf(o) == TableFormat::kTable) {
    out << "\nstatus " << MilpStatusName(solution.status) << "; objective " << Fixed(plan.objective, 6) << "; U_R "
        << Fixed(plan.u_r, 4) << "; critical loads " << plan.picked_critical_loads << "/"
        << graph.CriticalLoads().size() << "; T_net " << Fixed(plan.t_net_hours, 2) << " h\n";
  }
  if (!report.ok) {
    err << "verification failed for the solved plan\n";
    return kExitVerificationFailed;
  }
  return solution.status == MilpStatus::kFeasible && o.solution.empty() ? kExitLimit : kExitOk;
}

int Verify(const Options& o, std::ostream& out, std::ostream& err) {
  const ScenarioConfig scenario = LoadScenario(o);
  const FeederGraph graph = ApplyScenario(LoadFeeder(o), scenario);
  const RunManifest manifest = MakeManifest(o);
  const RestorationPlan plan = ParsePlan(ReadFile(o.plan), graph);
  VerifyOptions vo;
  vo.v_ref = scenario.v_ref;
  vo.samples = o.samples;
  vo.seed = o.seed;
  const VerificationReport report = restore::Verify(plan, graph, vo);
  const bool consistent = std::abs(plan.objective - report.metrics.u_rc) <= 1e-6;
  if (!o.out_dir.empty()) WriteFile(o.out_dir, "report.json", SerializeReport(report, plan, &manifest));

  const TableFormat format = FormatOf(o);
  if (format == TableFormat::kJson) {
    out << SerializeReport(report, plan, &manifest);
  } else {
    const char* sep = format == TableFormat::kCsv ? "," : " | ";
    out << "der" << sep << "nodes" << sep << "unavailability" << sep << "t_hours" << sep << "losses_percent" << sep
        << "reliability" << sep << "radial\n";
    for (size_t r = 0; r < report.rsns.size(); ++r) {
      const RsnReport& item = report.rsns[r];
      out << "DER-" << plan.rsns[r].der_node << sep << plan.rsns[r].nodes.size() << sep
          << Fixed(item.unavailability, 4) << sep << Fixed(item.restoration_hours, 2) << sep
          << Fixed(item.sweep.loss_percent, 4) << sep << Fixed(item.reliability, 6) << sep
          << (item.audit.radial_ok ? "ok" : "FAIL") << "\n";
    }
    if (format == TableFormat::kTable) {
      out << "\nU_P " << Fixed(report.metrics.u_p, 0) << "; U_R " << Fixed(report.metrics.u_r, 4) << "; U_RC "
          << Fixed(report.metrics.u_rc, 4) << "; R_P " << Fixed(report.total_reliability, 6) << "; T_net "
          << Fixed(report.times.t_net_hours, 2) << " h; average bias " << Fixed(report.times.average_bias, 3)
          << " h\n";
    }
  }
  for (const RsnReport& item : report.rsns) {
    for (const Diagnostic& d : item.audit.diagnostics) {
      err << "DER-" << item.audit.der_node << ": " << d.code << " (" << d.subject << "): " << d.message << "\n";
    }
  }
  if (!consistent) {
    err << "plan objective " << plan.objective << " does not match recomputed U_RC " << report.metrics.u_rc << "\n";
  }
  return report.ok && consistent ? kExitOk : kExitVerificationFailed;
}

int SweepEps(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.eps.empty()) {
    err << "--eps needs at least one value\n";
    return kExitInputError;
  }
  const FeederGraph graph = LoadFeeder(o);
  const ScenarioConfig base = LoadScenario(o);
  const RunManifest manifest = MakeManifest(o);
  std::vector<double> eps = o.eps;
  std::sort(eps.begin(), eps.end());

  Json rows = Json::array();
  bool any_feasible = false;
  for (double e : eps) {
    ScenarioConfig scenario = base;
    scenario.enforce_time_equity = true;
    scenario.epsilon_hours = e;
    Json row;
    row["eps"] = e;
    try {
      const RestorationModel model = BuildModel(graph, scenario);
      MilpOptions options;
      options.time_limit_seconds = o.time_limit;
      options.node_limit = o.node_limit;
      const MilpSolution solution = SolveMilp(model.milp, options);
      row["status"] = std::string(MilpStatusName(solution.status));
      if (solution.status == MilpStatus::kOptimal || solution.status == MilpStatus::kFeasible) {
        const RestorationPlan plan = ExtractPlan(model, solution.values);
        row["feasible"] = true;
        row["objective"] = plan.objective;
        row["u_r"] = plan.u_r;
        row["picked_critical_loads"] = plan.picked_critical_loads;
        row["max_bias_hours"] = MaxBias(plan);
        any_feasible = true;
      } else {
        row["feasible"] = false;
      }
    } catch (const ModelError& ex) {
      row["status"] = "invalid";
      row["feasible"] = false;
      row["message"] = ex.what();
    }
    const bool feasible = row["feasible"].get<bool>();
    rows.push_back(row);
    if (feasible && o.first_feasible) break;
  }

  Json doc;
  doc["manifest"] = Json::parse(SerializePlan(RestorationPlan{}, &manifest))["manifest"];
  doc["rows"] = rows;
  if (!o.out_dir.empty()) WriteFile(o.out_dir, "sweep.json", doc.dump(2) + "\n");

  const TableFormat format = FormatOf(o);
  if (format == TableFormat::kJson) {
    out << doc.dump(2) << "\n";
  } else {
    const char* sep = format == TableFormat::kCsv ? "," : " | ";
    out << "eps" << sep << "status" << sep << "u_r" << sep << "picked_critical_loads" << sep << "max_bias_hours\n";
    for (const Json& row : rows) {
      const bool feasible = row["feasible"].get<bool>();
      out << Fixed(row["eps"].get<double>(), 3) << sep << row["status"].get<std::string>() << sep
          << (feasible ? Fixed(row["u_r"].get<double>(), 4) : "-") << sep
          << (feasible ? std::to_string(row["picked_critical_loads"].get<int>()) : "-") << sep
          << (feasible ? Fixed(row["max_bias_hours"].get<double>(), 3) : "-") << "\n";
    }
  }
  return any_feasible ? kExitOk : kExitInfeasible;
}

int MonteCarlo(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.samples < 1) {
    err << "--samples must be at least 1\n";
    return kExitInputError;
  }
  const ScenarioConfig scenario = LoadScenario(o);
  const FeederGraph graph = ApplyScenario(LoadFeeder(o), scenario);
  const RunManifest manifest = MakeManifest(o);
  const RestorationPlan plan = ParsePlan(ReadFile(o.plan), graph);

  Json rsns = Json::array();
  for (size_t r = 0; r < plan.rsns.size(); ++r) {
    const RsnPlan& rsn = plan.rsns[r];
    const SurvivalEstimate s = MonteCarloSurvival(rsn, graph, o.samples, DeriveSeed(o.seed, r));
    rsns.push_back(Json{{"der", rsn.der_node},
                        {"lines", rsn.edges.size()},
                        {"reliability", RsnReliability(rsn, graph)},
                        {"estimate", s.estimate},
                        {"stderr", s.standard_error}});
  }
  Json doc;
  doc["manifest"] = Json::parse(SerializePlan(RestorationPlan{}, &manifest))["manifest"];
  doc["samples"] = o.samples;
  doc["seed"] = o.seed;
  doc["rsns"] = rsns;
  if (!o.out_dir.empty()) WriteFile(o.out_dir, "mc.json", doc.dump(2) + "\n");

  const TableFormat format = FormatOf(o);
  if (format == TableFormat::kJson) {
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  const char* sep = format == TableFormat::kCsv ? "," : " | ";
  out << "der" << sep << "lines" << sep << "reliability" << sep << "estimate" << sep << "stderr\n";
  for (const Json& row : rsns) {
    out << "DER-" << row["der"].get<std::string>() << sep << row["lines"].get<size_t>() << sep
        << Fixed(row["reliability"].get<double>(), 6) << sep << Fixed(row["estimate"].get<double>(), 6) << sep
        << Fixed(row["stderr"].get<double>(), 6) << "\n";
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Critical-load restoration planning with distributed energy resources", "restore"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RESTORE_VERSION);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--feeder", o.feeder, "Feeder JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--scenario", o.scenario, "Scenario JSON")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--format", o.format, "Console output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--samples", o.samples, "Monte Carlo samples");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
  };
  CLI::App* solve = app.add_subcommand("solve", "Solve the restoration problem and verify the plan");
  common(solve);
  solve->add_option("--solver", o.solver, "embedded or mps-export")
      ->check(CLI::IsMember({"embedded", "mps-export"}));
  solve->add_option("--solution", o.solution, "Import a \"name value\" solution instead of solving")
      ->check(CLI::ExistingFile);
  solve->add_option("--time-limit", o.time_limit, "Branch-and-bound time limit (s)");
  solve->add_option("--node-limit", o.node_limit, "Branch-and-bound node limit");

  CLI::App* verify = app.add_subcommand("verify", "Audit a plan and compute its metrics");
  common(verify);
  verify->add_option("--plan", o.plan, "Plan JSON")->required()->check(CLI::ExistingFile);

  CLI::App* sweep = app.add_subcommand("sweep-eps", "Solve once per equity tolerance, ascending");
  common(sweep);
  sweep->add_option("--eps", o.eps, "Equity tolerances in hours")->required()->delimiter(',');
  sweep->add_flag("--first-feasible", o.first_feasible, "Stop at the first feasible tolerance");
  sweep->add_option("--time-limit", o.time_limit, "Branch-and-bound time limit (s)");
  sweep->add_option("--node-limit", o.node_limit, "Branch-and-bound node limit");

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo survival of a plan's restored networks");
  common(mc);
  mc->add_option("--plan", o.plan, "Plan JSON")->required()->check(CLI::ExistingFile);

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (solve->parsed()) {
      o.command = "solve";
      return Solve(o, out, err);
    }
    if (verify->parsed()) {
      o.command = "verify";
      return Verify(o, out, err);
    }
    if (sweep->parsed()) {
      o.command = "sweep-eps";
      return SweepEps(o, out, err);
    }
    o.command = "mc";
    return MonteCarlo(o, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SolutionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
}

}  // namespace restore::cli

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

#include "restore/lp_solver.h"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>

#include "restore/error.h"

namespace restore {
namespace {

constexpr double kArtificialBound = 1e9;
constexpr int kDegenerateLimit = 50;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

struct Eta {
  int row = -1;
  double pivot = 1.0;
  std::vector<int> index;
  std::vector<double> value;
};

}  // namespace

std::string_view LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

class LpSolver::Impl {
 public:
  Impl(const MilpModel& model, LpOptions options);

  LpResult Solve(const LpBasis* warm_start);

  int n_ = 0;
  int m_ = 0;
  LpOptions opt_;
  SparseMatrix a_;
  std::vector<double> cost_;
  std::vector<double> col_lo_;
  std::vector<double> col_hi_;
  std::vector<Sense> sense_;
  std::vector<double> rhs_;

 private:
  bool SetupBounds();
  void InstallBasis(const LpBasis* warm_start);
  void SlackBasis();
  bool Factorize();
  void Refactor();
  void Ftran(Eigen::VectorXd& v) const;
  void Btran(Eigen::VectorXd& v) const;
  void ComputePrimal();
  void ComputeDual();
  int FlipToDualFeasible();
  void PerturbCosts();
  void SetNonbasicValue(int j);
  template <typename F>
  void ForColumn(int j, F&& f) const;
  double RowDot(const Eigen::VectorXd& v, int j) const;
  int SelectLeaving(bool bland) const;
  int RatioTest(double delta, bool bland, const std::vector<double>& alpha_row) const;
  LpStatus Iterate();
  LpResult Finish(LpStatus status);

  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> c_;
  std::vector<double> x_;
  std::vector<double> d_;
  std::vector<BasisStatus> status_;
  std::vector<int> head_;
  std::vector<Eta> etas_;
  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  long iterations_ = 0;
};

LpSolver::Impl::Impl(const MilpModel& model, LpOptions options)
    : n_(model.num_variables()), m_(model.num_constraints()), opt_(options) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < m_; ++i) {
    const LinearConstraint& row = model.constraints()[i];
    for (const auto& [j, a] : row.terms) triplets.emplace_back(i, j, a);
    sense_.push_back(row.sense);
    rhs_.push_back(row.rhs);
  }
  a_.resize(m_, n_);
  a_.setFromTriplets(triplets.begin(), triplets.end());
  a_.makeCompressed();
  cost_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    cost_[j] = model.objective()[j];
    col_lo_.push_back(model.variable(j).lower);
    col_hi_.push_back(model.variable(j).upper);
  }
}

template <typename F>
void LpSolver::Impl::ForColumn(int j, F&& f) const {
  if (j < n_) {
    for (SparseMatrix::InnerIterator it(a_, j); it; ++it) f(static_cast<int>(it.row()), it.value());
  } else {
    f(j - n_, -1.0);
  }
}

double LpSolver::Impl::RowDot(const Eigen::VectorXd& v, int j) const {
  double sum = 0.0;
  ForColumn(j, [&](int i, double a) { sum += v[i] * a; });
  return sum;
}

bool LpSolver::Impl::SetupBounds() {
  lo_.assign(n_ + m_, 0.0);
  hi_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    lo_[j] = std::isfinite(col_lo_[j]) ? col_lo_[j] : -kArtificialBound;
    hi_[j] = std::isfinite(col_hi_[j]) ? col_hi_[j] : kArtificialBound;
    if (lo_[j] > hi_[j] + opt_.primal_tolerance) return false;
    hi_[j] = std::max(hi_[j], lo_[j]);
  }
  std::vector<double> act_lo(m_, 0.0);
  std::vector<double> act_hi(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    for (SparseMatrix::InnerIterator it(a_, j); it; ++it) {
      const double a = it.value();
      act_lo[it.row()] += a > 0 ? a * lo_[j] : a * hi_[j];
      act_hi[it.row()] += a > 0 ? a * hi_[j] : a * lo_[j];
    }
  }
  for (int i = 0; i < m_; ++i) {
    double lo = act_lo[i];
    double hi = act_hi[i];
    if (sense_[i] != Sense::kLe) lo = std::max(lo, rhs_[i]);
    if (sense_[i] != Sense::kGe) hi = std::min(hi, rhs_[i]);
    const double slack = opt_.primal_tolerance * (1.0 + std::abs(rhs_[i]));
    if (lo > hi + slack) return false;
    if (lo > hi) {
      // Within tolerance of the implied range: pin to the row's own rhs.
      lo = hi = (sense_[i] == Sense::kLe) ? hi : lo;
    }
    lo_[n_ + i] = lo;
    hi_[n_ + i] = hi;
  }
  return true;
}

void LpSolver::Impl::SetNonbasicValue(int j) {
  x_[j] = status_[j] == BasisStatus::kAtUpper ? hi_[j] : lo_[j];
}

void LpSolver::Impl::SlackBasis() {
  status_.assign(n_ + m_, BasisStatus::kAtLower);
  head_.resize(m_);
  for (int j = 0; j < n_; ++j) {
    if (cost_[j] < 0.0) status_[j] = BasisStatus::kAtUpper;
  }
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    status_[n_ + i] = BasisStatus::kBasic;
  }
}

void LpSolver::Impl::InstallBasis(const LpBasis* warm_start) {
  bool usable = warm_start != nullptr && static_cast<int>(warm_start->status.size()) == n_ + m_ &&
                std::count(warm_start->status.begin(), warm_start->status.end(), BasisStatus::kBasic) == m_;
  if (usable) {
    status_ = warm_start->status;
    head_.clear();
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == BasisStatus::kBasic) head_.push_back(j);
    }
    usable = Factorize();
  }
  if (!usable) {
    SlackBasis();
    Factorize();
  }
  x_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] != BasisStatus::kBasic) SetNonbasicValue(j);
  }
}

bool LpSolver::Impl::Factorize() {
  etas_.clear();
  std::vector<Eigen::Triplet<double>> triplets;
  for (int r = 0; r < m_; ++r) {
    ForColumn(head_[r], [&](int i, double a) { triplets.emplace_back(i, r, a); });
  }
  SparseMatrix basis(m_, m_);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  return lu_.info() == Eigen::Success;
}

void LpSolver::Impl::Ftran(Eigen::VectorXd& v) const {
  v = lu_.solve(v).eval();
  for (const Eta& eta : etas_) {
    const double pivot_value = v[eta.row] / eta.pivot;
    v[eta.row] = pivot_value;
    if (pivot_value == 0.0) continue;
    for (size_t t = 0; t < eta.index.size(); ++t) v[eta.index[t]] -= eta.value[t] * pivot_value;
  }
}

void LpSolver::Impl::Btran(Eigen::VectorXd& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double sum = v[it->row];
    for (size_t t = 0; t < it->index.size(); ++t) sum -= it->value[t] * v[it->index[t]];
    v[it->row] = sum / it->pivot;
  }
  v = lu_.transpose().solve(v).eval();
}

void LpSolver::Impl::ComputePrimal() {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == BasisStatus::kBasic || x_[j] == 0.0) continue;
    const double xj = x_[j];
    ForColumn(j, [&](int i, double a) { rhs[i] -= a * xj; });
  }
  Ftran(rhs);
  for (int r = 0; r < m_; ++r) x_[head_[r]] = rhs[r];
}

void LpSolver::Impl::ComputeDual() {
  Eigen::VectorXd y(m_);
  for (int r = 0; r < m_; ++r) y[r] = c_[head_[r]];
  Btran(y);
  d_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] != BasisStatus::kBasic) d_[j] = c_[j] - RowDot(y, j);
  }
}

int LpSolver::Impl::FlipToDualFeasible() {
  int flips = 0;
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == BasisStatus::kBasic || lo_[j] == hi_[j]) continue;
    if (status_[j] == BasisStatus::kAtLower && d_[j] < -opt_.dual_tolerance) {
      status_[j] = BasisStatus::kAtUpper;
    } else if (status_[j] == BasisStatus::kAtUpper && d_[j] > opt_.dual_tolerance) {
      status_[j] = BasisStatus::kAtLower;
    } else {
      continue;
    }
    SetNonbasicValue(j);
    ++flips;
  }
  return flips;
}

void LpSolver::Impl::PerturbCosts() {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int j = 0; j < n_; ++j) {
    const double magnitude = 5e-7 * (1.0 + std::abs(cost_[j])) * (1.0 + unit(rng));
    c_[j] = cost_[j] + (status_[j] == BasisStatus::kAtUpper ? -magnitude : magnitude);
  }
}

void LpSolver::Impl::Refactor() {
  if (!Factorize()) {
    SlackBasis();
    Factorize();
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] != BasisStatus::kBasic) SetNonbasicValue(j);
    }
  }
  ComputeDual();
  FlipToDualFeasible();
  ComputePrimal();
}

int LpSolver::Impl::SelectLeaving(bool bland) const {
  int best_row = -1;
  double best = 0.0;
  for (int r = 0; r < m_; ++r) {
    const int j = head_[r];
    const double tol = opt_.primal_tolerance;
    double infeasibility = 0.0;
    if (x_[j] < lo_[j] - tol) {
      infeasibility = lo_[j] - x_[j];
    } else if (x_[j] > hi_[j] + tol) {
      infeasibility = x_[j] - hi_[j];
    } else {
      continue;
    }
    if (bland) {
      if (best_row < 0 || j < head_[best_row]) best_row = r;
    } else if (infeasibility > best) {
      best = infeasibility;
      best_row = r;
    }
  }
  return best_row;
}

int LpSolver::Impl::RatioTest(double delta, bool bland, const std::vector<double>& alpha_row) const {
  const double direction = delta < 0 ? -1.0 : 1.0;
  auto eligible = [&](int j, double& scaled) {
    if (status_[j] == BasisStatus::kBasic || lo_[j] == hi_[j]) return false;
    scaled = direction * alpha_row[j];
    if (status_[j] == BasisStatus::kAtLower) return scaled > opt_.pivot_tolerance;
    return scaled < -opt_.pivot_tolerance;
  };
  double bound = kInf;
  for (int j = 0; j < n_ + m_; ++j) {
    double scaled;
    if (!eligible(j, scaled)) continue;
    const double slack = bland ? 0.0 : (scaled > 0 ? opt_.dual_tolerance : -opt_.dual_tolerance);
    bound = std::min(bound, std::max(0.0, (d_[j] + slack) / scaled));
  }
  if (bound == kInf) return -1;
  int best = -1;
  double best_alpha = 0.0;
  double best_ratio = kInf;
  for (int j = 0; j < n_ + m_; ++j) {
    double scaled;
    if (!eligible(j, scaled)) continue;
    const double ratio = std::max(0.0, d_[j] / scaled);
    if (bland) {
      if (ratio < best_ratio - 1e-12) {
        best_ratio = ratio;
        best = j;
      }
    } else if (ratio <= bound && std::abs(scaled) > best_alpha) {
      best_alpha = std::abs(scaled);
      best = j;
    }
  }
  return best;
}

LpStatus LpSolver::Impl::Iterate() {
  int degenerate = 0;
  bool retried = false;
  std::vector<double> alpha_row(n_ + m_, 0.0);
  Eigen::VectorXd rho(m_);
  Eigen::VectorXd column(m_);
  for (;;) {
    if (iterations_ >= opt_.iteration_limit) return LpStatus::kIterationLimit;
    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) Refactor();
    const bool bland = degenerate > kDegenerateLimit;
    const int r = SelectLeaving(bland);
    if (r < 0) return LpStatus::kOptimal;
    const int leaving = head_[r];
    const double delta = x_[leaving] < lo_[leaving] ? x_[leaving] - lo_[leaving] : x_[leaving] - hi_[leaving];

    rho.setZero();
    rho[r] = 1.0;
    Btran(rho);
    for (int j = 0; j < n_ + m_; ++j) {
      alpha_row[j] = status_[j] == BasisStatus::kBasic ? 0.0 : RowDot(rho, j);
    }
    const int q = RatioTest(delta, bland, alpha_row);
    if (q < 0) {
      if (!retried && !etas_.empty()) {
        retried = true;
        Refactor();
        continue;
      }
      return LpStatus::kInfeasible;
    }

    column.setZero();
    ForColumn(q, [&](int i, double a) { column[i] = a; });
    Ftran(column);
    const double pivot = column[r];
    if (std::abs(pivot - alpha_row[q]) > 1e-7 * (1.0 + std::abs(pivot)) || std::abs(pivot) < opt_.pivot_tolerance) {
      if (!retried && !etas_.empty()) {
        retried = true;
        Refactor();
        continue;
      }
    }
    retried = false;

    const double theta_dual = d_[q] / alpha_row[q];
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] != BasisStatus::kBasic && alpha_row[j] != 0.0) d_[j] -= theta_dual * alpha_row[j];
    }
    d_[leaving] = -theta_dual;
    d_[q] = 0.0;

    const double theta_primal = delta / pivot;
    for (int i = 0; i < m_; ++i) {
      if (column[i] != 0.0) x_[head_[i]] -= theta_primal * column[i];
    }
    const double entering_value = x_[q] + theta_primal;
    status_[leaving] = delta < 0 ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
    if (lo_[leaving] == hi_[leaving]) status_[leaving] = BasisStatus::kAtLower;
    SetNonbasicValue(leaving);
    status_[q] = BasisStatus::kBasic;
    x_[q] = entering_value;
    head_[r] = q;

    Eta eta;
    eta.row = r;
    eta.pivot = pivot;
    for (int i = 0; i < m_; ++i) {
      if (i != r && column[i] != 0.0) {
        eta.index.push_back(i);
        eta.value.push_back(column[i]);
      }
    }
    etas_.push_back(std::move(eta));
    ++iterations_;
    degenerate = std::abs(theta_dual) < 1e-12 ? degenerate + 1 : 0;
  }
}

LpResult LpSolver::Impl::Finish(LpStatus status) {
  LpResult result;
  result.status = status;
  result.iterations = iterations_;
  result.x.assign(x_.begin(), x_.begin() + n_);
  result.basis.status = status_;
  result.row_activity.assign(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    for (SparseMatrix::InnerIterator it(a_, j); it; ++it) result.row_activity[it.row()] += it.value() * x_[j];
    result.objective += cost_[j] * x_[j];
  }
  Eigen::VectorXd y(m_);
  for (int r = 0; r < m_; ++r) y[r] = cost_[head_[r]];
  if (m_ > 0) Btran(y);
  result.row_duals.assign(y.data(), y.data() + m_);
  if (status == LpStatus::kOptimal) {
    for (int j = 0; j < n_; ++j) {
      const bool artificial = !std::isfinite(col_lo_[j]) || !std::isfinite(col_hi_[j]);
      if (artificial && std::abs(x_[j]) >= kArtificialBound * (1.0 - 1e-9)) {
        result.status = LpStatus::kUnbounded;
        break;
      }
    }
  }
  return result;
}

LpResult LpSolver::Impl::Solve(const LpBasis* warm_start) {
  iterations_ = 0;
  if (!SetupBounds()) {
    LpResult result;
    result.status = LpStatus::kInfeasible;
    result.x.assign(n_, 0.0);
    if (warm_start != nullptr) result.basis = *warm_start;
    return result;
  }
  if (m_ == 0) {
    status_.assign(n_, BasisStatus::kAtLower);
    x_.assign(n_, 0.0);
    head_.clear();
    for (int j = 0; j < n_; ++j) {
      if (cost_[j] < 0.0) status_[j] = BasisStatus::kAtUpper;
      SetNonbasicValue(j);
    }
    c_ = cost_;
    return Finish(LpStatus::kOptimal);
  }
  c_ = cost_;
  InstallBasis(warm_start);
  if (opt_.perturb_costs) PerturbCosts();
  ComputeDual();
  FlipToDualFeasible();
  ComputePrimal();

  LpStatus status = Iterate();
  if (status == LpStatus::kOptimal || opt_.perturb_costs) {
    // Remove the perturbation (if any) and clean up from a fresh factorization.
    c_ = cost_;
    Refactor();
    if (status == LpStatus::kOptimal) status = Iterate();
    if (status == LpStatus::kOptimal) {
      Refactor();
      status = Iterate();
    }
  }
  return Finish(status);
}

LpSolver::LpSolver(const MilpModel& model, LpOptions options) : impl_(std::make_unique<Impl>(model, options)) {}

LpSolver::~LpSolver() = default;

int LpSolver::num_columns() const { return impl_->n_; }

int LpSolver::num_rows() const { return impl_->m_; }

void LpSolver::SetBounds(int column, double lower, double upper) {
  if (column < 0 || column >= impl_->n_) throw ModelError("LP column out of range");
  impl_->col_lo_[column] = lower;
  impl_->col_hi_[column] = upper;
}

double LpSolver::lower(int column) const { return impl_->col_lo_[column]; }

double LpSolver::upper(int column) const { return impl_->col_hi_[column]; }

LpResult LpSolver::Solve(const LpBasis* warm_start) { return impl_->Solve(warm_start); }

LpResult SolveLp(const MilpModel& model, const LpOptions& options) {
  LpSolver solver(model, options);
  return solver.Solve();
}

}  // namespace restore

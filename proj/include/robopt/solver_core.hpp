// Copyright 2026 The robopt Authors
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

// Deterministic LP/MILP solving: a dense two-phase tableau simplex with a
// Bland fallback, and a depth-first branch-and-bound on top of it.
//
// The LP solver works on the standard form
//
//   min c'x'   s.t.  A'x' (+ slack) = b',  x' >= 0,  b' >= 0
//
// obtained by shifting/reflecting every bounded variable, splitting free
// variables, and turning finite upper bounds into explicit rows. The columns
// that form the initial identity basis (slacks of <= rows, artificials of
// >= and = rows) are kept for the whole solve so that B^-1 can be read off
// the tableau, which yields row duals and Farkas multipliers.

#ifndef ROBOPT_SOLVER_CORE_HPP_
#define ROBOPT_SOLVER_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace robopt {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class ObjectiveSense { kMinimize, kMaximize };
enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

inline const char* ToString(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

inline const char* ToString(RowSense s) {
  switch (s) {
    case RowSense::kLessEqual:
      return "<=";
    case RowSense::kEqual:
      return "=";
    case RowSense::kGreaterEqual:
      return ">=";
  }
  return "?";
}

// Sparse linear form: (variable index, coefficient) pairs.
using LinearExpr = std::vector<std::pair<int, double>>;

struct MilpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integer = false;
  // Fractional variables with higher priority are branched on first.
  int priority = 0;
};

struct MilpRow {
  std::string name;
  LinearExpr terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

struct DeterministicMILP {
  std::vector<MilpVariable> variables;
  std::vector<MilpRow> rows;
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::vector<double> objective;
  double objective_constant = 0.0;

  int AddVariable(std::string name, double lower = 0.0,
                  double upper = kInfinity, bool integer = false) {
    variables.push_back({std::move(name), lower, upper, integer});
    objective.push_back(0.0);
    return static_cast<int>(variables.size()) - 1;
  }

  int AddRow(LinearExpr terms, RowSense sense, double rhs,
             std::string name = "") {
    rows.push_back({std::move(name), std::move(terms), sense, rhs});
    return static_cast<int>(rows.size()) - 1;
  }

  int num_variables() const { return static_cast<int>(variables.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  bool HasIntegers() const {
    for (const MilpVariable& v : variables) {
      if (v.integer) return true;
    }
    return false;
  }

  // Returns an empty string when the invariants hold.
  std::string Validate() const {
    if (objective.size() != variables.size()) {
      return "objective size differs from variable count";
    }
    for (std::size_t j = 0; j < variables.size(); ++j) {
      const MilpVariable& v = variables[j];
      if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
          v.lower == kInfinity || v.upper == -kInfinity) {
        return "variable '" + v.name + "' has invalid bounds";
      }
      if (!std::isfinite(objective[j])) {
        return "objective coefficient of '" + v.name + "' is not finite";
      }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const MilpRow& r = rows[i];
      if (!std::isfinite(r.rhs)) {
        return "row " + std::to_string(i) + " has a non-finite rhs";
      }
      for (const auto& [var, coef] : r.terms) {
        if (var < 0 || var >= num_variables()) {
          return "row " + std::to_string(i) + " references variable " +
                 std::to_string(var) + " which is not declared";
        }
        if (!std::isfinite(coef)) {
          return "row " + std::to_string(i) + " has a non-finite coefficient";
        }
      }
    }
    return "";
  }

  double RowActivity(int i, const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& [var, coef] : rows[i].terms) s += coef * x[var];
    return s;
  }

  double ObjectiveValue(const std::vector<double>& x) const {
    double s = objective_constant;
    for (std::size_t j = 0; j < objective.size(); ++j) s += objective[j] * x[j];
    return s;
  }

  // Largest violation of any row or bound at x (0 when feasible).
  double MaxViolation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (int i = 0; i < num_rows(); ++i) {
      const double act = RowActivity(i, x);
      const double rhs = rows[i].rhs;
      double v = 0.0;
      switch (rows[i].sense) {
        case RowSense::kLessEqual:
          v = act - rhs;
          break;
        case RowSense::kGreaterEqual:
          v = rhs - act;
          break;
        case RowSense::kEqual:
          v = std::fabs(act - rhs);
          break;
      }
      worst = std::max(worst, v);
    }
    for (int j = 0; j < num_variables(); ++j) {
      worst = std::max(worst, variables[j].lower - x[j]);
      worst = std::max(worst, x[j] - variables[j].upper);
    }
    return worst;
  }
};

struct SolverOptions {
  double feasibility_tolerance = 1e-7;
  double integrality_tolerance = 1e-6;
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  int degenerate_pivots_before_bland = 50;
  int max_iterations = 200000;
  int max_nodes = 200000;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> values;
  // Optimal LP: derivative of the optimal objective w.r.t. each row rhs.
  std::vector<double> row_duals;
  // Optimal LP: c - A^T y.
  std::vector<double> reduced_costs;
  // Infeasible LP: row multipliers mu whose aggregate row sum_i mu_i a_i x <=
  // sum_i mu_i b_i cannot be met anywhere in the bound box.
  std::vector<double> farkas;
  // Unbounded LP: a recession direction that improves the objective.
  std::vector<double> ray;
  // Feasible point accompanying an unbounded ray.
  std::vector<double> ray_origin;
  // MILP: best bound over unexplored nodes at termination.
  double best_bound = 0.0;
  int iterations = 0;
  int nodes = 0;
};

namespace internal {

// Dense tableau with an explicit basis and the column layout described at the
// top of the file.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), t_(static_cast<std::size_t>(rows) * (cols + 1)) {}

  double& at(int i, int j) {
    return t_[static_cast<std::size_t>(i) * (n_ + 1) + j];
  }
  double at(int i, int j) const {
    return t_[static_cast<std::size_t>(i) * (n_ + 1) + j];
  }
  double& rhs(int i) { return at(i, n_); }
  double rhs(int i) const { return at(i, n_); }
  int rows() const { return m_; }
  int cols() const { return n_; }

  void Pivot(int r, int c) {
    const double p = at(r, c);
    double* prow = &t_[static_cast<std::size_t>(r) * (n_ + 1)];
    for (int j = 0; j <= n_; ++j) prow[j] /= p;
    prow[c] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[static_cast<std::size_t>(i) * (n_ + 1)];
      const double f = row[c];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) {
        if (prow[j] != 0.0) row[j] -= f * prow[j];
      }
      row[c] = 0.0;
    }
  }

 private:
  int m_;
  int n_;
  std::vector<double> t_;
};

// How an original variable maps onto standard-form columns:
// x = offset + sign * x'[col] - x'[col2] (col2 only for free variables).
struct ColumnMap {
  int col = -1;
  int col2 = -1;
  double sign = 1.0;
  double offset = 0.0;
};

class SimplexSolver {
 public:
  SimplexSolver(const DeterministicMILP& p, const SolverOptions& opt)
      : p_(p), opt_(opt) {}

  SolveResult Solve() {
    SolveResult res;
    BuildStandardForm();
    if (trivially_infeasible_row_ >= 0) {
      res.status = SolveStatus::kInfeasible;
      res.farkas.assign(p_.num_rows(), 0.0);
      const MilpRow& row = p_.rows[trivially_infeasible_row_];
      double mu = 1.0;
      if (row.sense == RowSense::kGreaterEqual) mu = -1.0;
      if (row.sense == RowSense::kEqual) {
        mu = (FixedActivity(trivially_infeasible_row_) > row.rhs) ? 1.0 : -1.0;
      }
      res.farkas[trivially_infeasible_row_] = mu;
      return res;
    }
    BuildTableau();

    // Phase 1: minimize the sum of artificials.
    std::vector<double> cost1(ncols_, 0.0);
    for (int j = art_begin_; j < ncols_; ++j) cost1[j] = 1.0;
    std::vector<char> allowed(ncols_, 1);
    int unbounded_col = -1;
    SolveStatus st = RunPhase(cost1, allowed, &unbounded_col);
    res.iterations = iterations_;
    if (st == SolveStatus::kIterationLimit) {
      res.status = st;
      return res;
    }
    double phase1 = 0.0;
    for (int i = 0; i < m_; ++i) phase1 += cost1[basis_[i]] * tab_->rhs(i);
    if (phase1 > opt_.feasibility_tolerance * std::max(1.0, rhs_scale_)) {
      res.status = SolveStatus::kInfeasible;
      std::vector<double> y = BasisDuals(cost1);
      res.farkas.assign(p_.num_rows(), 0.0);
      for (int i = 0; i < p_.num_rows(); ++i) {
        // mu = -y maps the phase-1 optimality conditions onto a <= aggregate.
        double mu = -y[i];
        if (flipped_[i]) mu = -mu;
        res.farkas[i] = mu;
      }
      return res;
    }
    DriveOutArtificials();

    // Phase 2 on the true objective; artificials may not re-enter.
    std::vector<double> cost2(ncols_, 0.0);
    for (int j = 0; j < nstruct_; ++j) cost2[j] = cstd_[j];
    for (int j = art_begin_; j < ncols_; ++j) allowed[j] = 0;
    st = RunPhase(cost2, allowed, &unbounded_col);
    res.iterations = iterations_;
    if (st == SolveStatus::kIterationLimit) {
      res.status = st;
      return res;
    }
    std::vector<double> xs = StandardPrimal();
    res.values = MapBack(xs);
    if (st == SolveStatus::kUnbounded) {
      res.status = SolveStatus::kUnbounded;
      std::vector<double> d(ncols_, 0.0);
      d[unbounded_col] = 1.0;
      for (int i = 0; i < m_; ++i) d[basis_[i]] = -tab_->at(i, unbounded_col);
      res.ray.assign(p_.num_variables(), 0.0);
      for (int j = 0; j < p_.num_variables(); ++j) {
        const ColumnMap& cm = map_[j];
        double v = 0.0;
        if (cm.col >= 0) v += cm.sign * d[cm.col];
        if (cm.col2 >= 0) v -= d[cm.col2];
        res.ray[j] = v;
      }
      res.ray_origin = res.values;
      res.objective = p_.ObjectiveValue(res.values);
      return res;
    }
    res.status = SolveStatus::kOptimal;
    res.objective = p_.ObjectiveValue(res.values);
    std::vector<double> y = BasisDuals(cost2);
    const double osign = p_.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    res.row_duals.assign(p_.num_rows(), 0.0);
    for (int i = 0; i < p_.num_rows(); ++i) {
      double v = flipped_[i] ? -y[i] : y[i];
      res.row_duals[i] = osign * v;
    }
    res.reduced_costs = p_.objective;
    for (int i = 0; i < p_.num_rows(); ++i) {
      for (const auto& [var, coef] : p_.rows[i].terms) {
        res.reduced_costs[var] -= coef * res.row_duals[i];
      }
    }
    return res;
  }

 private:
  double FixedActivity(int i) const {
    double s = 0.0;
    for (const auto& [var, coef] : p_.rows[i].terms) s += coef * map_[var].offset;
    return s;
  }

  void BuildStandardForm() {
    const int n = p_.num_variables();
    map_.assign(n, ColumnMap());
    nstruct_ = 0;
    std::vector<std::pair<int, double>> ub_rows;  // (col, bound)
    for (int j = 0; j < n; ++j) {
      const MilpVariable& v = p_.variables[j];
      ColumnMap& cm = map_[j];
      const bool lo = std::isfinite(v.lower);
      const bool up = std::isfinite(v.upper);
      if (lo && up && v.lower == v.upper) {
        cm.offset = v.lower;
      } else if (lo) {
        cm.col = nstruct_++;
        cm.offset = v.lower;
        cm.sign = 1.0;
        if (up) ub_rows.push_back({cm.col, v.upper - v.lower});
      } else if (up) {
        cm.col = nstruct_++;
        cm.offset = v.upper;
        cm.sign = -1.0;
      } else {
        cm.col = nstruct_++;
        cm.col2 = nstruct_++;
      }
    }
    cstd_.assign(nstruct_, 0.0);
    const double osign = p_.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double c = osign * p_.objective[j];
      const ColumnMap& cm = map_[j];
      if (cm.col >= 0) cstd_[cm.col] += c * cm.sign;
      if (cm.col2 >= 0) cstd_[cm.col2] -= c;
    }
    // Rows over standard columns.
    srows_.clear();
    flipped_.clear();
    trivially_infeasible_row_ = -1;
    for (int i = 0; i < p_.num_rows(); ++i) {
      const MilpRow& r = p_.rows[i];
      StdRow sr;
      sr.coef.assign(nstruct_, 0.0);
      double rhs = r.rhs;
      for (const auto& [var, coef] : r.terms) {
        const ColumnMap& cm = map_[var];
        rhs -= coef * cm.offset;
        if (cm.col >= 0) sr.coef[cm.col] += coef * cm.sign;
        if (cm.col2 >= 0) sr.coef[cm.col2] -= coef;
      }
      bool nonzero = false;
      for (double c : sr.coef) nonzero |= (c != 0.0);
      sr.sense = r.sense;
      sr.rhs = rhs;
      if (!nonzero) {
        const double tol = opt_.feasibility_tolerance * std::max(1.0, std::fabs(r.rhs));
        bool ok = true;
        if (r.sense == RowSense::kLessEqual) ok = rhs >= -tol;
        if (r.sense == RowSense::kGreaterEqual) ok = rhs <= tol;
        if (r.sense == RowSense::kEqual) ok = std::fabs(rhs) <= tol;
        if (!ok && trivially_infeasible_row_ < 0) trivially_infeasible_row_ = i;
      }
      srows_.push_back(std::move(sr));
    }
    for (const auto& [col, bound] : ub_rows) {
      StdRow sr;
      sr.coef.assign(nstruct_, 0.0);
      sr.coef[col] = 1.0;
      sr.sense = RowSense::kLessEqual;
      sr.rhs = bound;
      srows_.push_back(std::move(sr));
    }
    flipped_.assign(srows_.size(), 0);
    rhs_scale_ = 0.0;
    for (std::size_t i = 0; i < srows_.size(); ++i) {
      StdRow& sr = srows_[i];
      if (sr.rhs < 0.0) {
        for (double& c : sr.coef) c = -c;
        sr.rhs = -sr.rhs;
        if (sr.sense == RowSense::kLessEqual) {
          sr.sense = RowSense::kGreaterEqual;
        } else if (sr.sense == RowSense::kGreaterEqual) {
          sr.sense = RowSense::kLessEqual;
        }
        flipped_[i] = 1;
      }
      // Bound rows are exact by construction and do not widen the tolerance.
      if (static_cast<int>(i) < p_.num_rows()) rhs_scale_ = std::max(rhs_scale_, sr.rhs);
    }
  }

  void BuildTableau() {
    m_ = static_cast<int>(srows_.size());
    int nslack = 0;
    int nsurplus = 0;
    int nart = 0;
    for (const StdRow& r : srows_) {
      if (r.sense == RowSense::kLessEqual) ++nslack;
      if (r.sense == RowSense::kGreaterEqual) {
        ++nsurplus;
        ++nart;
      }
      if (r.sense == RowSense::kEqual) ++nart;
    }
    slack_begin_ = nstruct_;
    surplus_begin_ = slack_begin_ + nslack;
    art_begin_ = surplus_begin_ + nsurplus;
    ncols_ = art_begin_ + nart;
    tab_ = std::make_unique<Tableau>(m_, ncols_);
    basis_.assign(m_, -1);
    identity_col_.assign(m_, -1);
    int s = slack_begin_;
    int u = surplus_begin_;
    int a = art_begin_;
    for (int i = 0; i < m_; ++i) {
      const StdRow& r = srows_[i];
      for (int j = 0; j < nstruct_; ++j) tab_->at(i, j) = r.coef[j];
      tab_->rhs(i) = r.rhs;
      if (r.sense == RowSense::kLessEqual) {
        tab_->at(i, s) = 1.0;
        identity_col_[i] = s++;
      } else {
        if (r.sense == RowSense::kGreaterEqual) tab_->at(i, u++) = -1.0;
        tab_->at(i, a) = 1.0;
        identity_col_[i] = a++;
      }
      basis_[i] = identity_col_[i];
    }
  }

  std::vector<double> ReducedCosts(const std::vector<double>& cost) const {
    std::vector<double> d(cost);
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < ncols_; ++j) d[j] -= cb * tab_->at(i, j);
    }
    return d;
  }

  SolveStatus RunPhase(const std::vector<double>& cost,
                       const std::vector<char>& allowed, int* unbounded_col) {
    std::vector<double> d = ReducedCosts(cost);
    std::vector<char> is_basic(ncols_, 0);
    for (int i = 0; i < m_; ++i) is_basic[basis_[i]] = 1;
    int degenerate_run = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= opt_.max_iterations) return SolveStatus::kIterationLimit;
      // Pricing.
      int enter = -1;
      double best = -opt_.optimality_tolerance;
      for (int j = 0; j < ncols_; ++j) {
        if (!allowed[j] || is_basic[j]) continue;
        if (d[j] < -opt_.optimality_tolerance) {
          if (bland) {
            enter = j;
            break;
          }
          if (d[j] < best) {
            best = d[j];
            enter = j;
          }
        }
      }
      if (enter < 0) return SolveStatus::kOptimal;
      // Ratio test.
      int leave = -1;
      double min_ratio = kInfinity;
      double leave_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = tab_->at(i, enter);
        if (a <= opt_.pivot_tolerance) continue;
        const double ratio = tab_->rhs(i) / a;
        if (leave < 0 || ratio < min_ratio - 1e-12) {
          leave = i;
          min_ratio = ratio;
          leave_pivot = a;
        } else if (ratio <= min_ratio + 1e-12) {
          const bool better = bland ? basis_[i] < basis_[leave] : a > leave_pivot;
          if (better) {
            leave = i;
            min_ratio = std::min(min_ratio, ratio);
            leave_pivot = a;
          }
        }
      }
      if (leave < 0) {
        *unbounded_col = enter;
        return SolveStatus::kUnbounded;
      }
      if (min_ratio <= 1e-12) {
        if (++degenerate_run >= opt_.degenerate_pivots_before_bland) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      tab_->Pivot(leave, enter);
      for (int i = 0; i < m_; ++i) {
        if (tab_->rhs(i) < 0.0 && tab_->rhs(i) > -1e-11) tab_->rhs(i) = 0.0;
      }
      is_basic[basis_[leave]] = 0;
      is_basic[enter] = 1;
      basis_[leave] = enter;
      const double f = d[enter];
      for (int j = 0; j < ncols_; ++j) d[j] -= f * tab_->at(leave, j);
      d[enter] = 0.0;
      ++iterations_;
    }
  }

  void DriveOutArtificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < art_begin_) continue;
      int best = -1;
      double best_abs = 1e-9;
      for (int j = 0; j < art_begin_; ++j) {
        const double a = std::fabs(tab_->at(i, j));
        if (a > best_abs) {
          bool basic = false;
          for (int k = 0; k < m_ && !basic; ++k) basic = basis_[k] == j;
          if (basic) continue;
          best_abs = a;
          best = j;
        }
      }
      if (best >= 0) {
        tab_->Pivot(i, best);
        basis_[i] = best;
        ++iterations_;
      }
    }
  }

  // y^T = c_B^T B^-1, where B^-1 sits in the identity columns.
  std::vector<double> BasisDuals(const std::vector<double>& cost) const {
    std::vector<double> y(m_, 0.0);
    for (int k = 0; k < m_; ++k) {
      const int col = identity_col_[k];
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += cost[basis_[i]] * tab_->at(i, col);
      y[k] = s;
    }
    return y;
  }

  std::vector<double> StandardPrimal() const {
    std::vector<double> xs(ncols_, 0.0);
    for (int i = 0; i < m_; ++i) xs[basis_[i]] = tab_->rhs(i);
    return xs;
  }

  std::vector<double> MapBack(const std::vector<double>& xs) const {
    std::vector<double> x(p_.num_variables(), 0.0);
    for (int j = 0; j < p_.num_variables(); ++j) {
      const ColumnMap& cm = map_[j];
      double v = cm.offset;
      if (cm.col >= 0) v += cm.sign * xs[cm.col];
      if (cm.col2 >= 0) v -= xs[cm.col2];
      const MilpVariable& var = p_.variables[j];
      x[j] = std::clamp(v, var.lower, var.upper);
    }
    return x;
  }

  struct StdRow {
    std::vector<double> coef;
    RowSense sense = RowSense::kLessEqual;
    double rhs = 0.0;
  };

  const DeterministicMILP& p_;
  const SolverOptions& opt_;
  std::vector<ColumnMap> map_;
  std::vector<StdRow> srows_;
  std::vector<char> flipped_;
  std::vector<double> cstd_;
  std::unique_ptr<Tableau> tab_;
  std::vector<int> basis_;
  std::vector<int> identity_col_;
  int trivially_infeasible_row_ = -1;
  int nstruct_ = 0;
  int m_ = 0;
  int ncols_ = 0;
  int slack_begin_ = 0;
  int surplus_begin_ = 0;
  int art_begin_ = 0;
  int iterations_ = 0;
  double rhs_scale_ = 0.0;
};

}  // namespace internal

// Solves the continuous relaxation of p (integrality flags are ignored).
inline SolveResult SolveLp(const DeterministicMILP& p,
                           const SolverOptions& options = SolverOptions()) {
  internal::SimplexSolver solver(p, options);
  return solver.Solve();
}

// Dual objective b^T y + sum_j min/max over [l_j, u_j] of r_j x_j. Returns NaN
// when a reduced cost points at an infinite bound.
inline double DualObjective(const DeterministicMILP& p,
                            const std::vector<double>& row_duals,
                            double tol = 1e-9) {
  std::vector<double> r = p.objective;
  double value = p.objective_constant;
  for (int i = 0; i < p.num_rows(); ++i) {
    value += p.rows[i].rhs * row_duals[i];
    for (const auto& [var, coef] : p.rows[i].terms) r[var] -= coef * row_duals[i];
  }
  const bool maximize = p.sense == ObjectiveSense::kMaximize;
  for (int j = 0; j < p.num_variables(); ++j) {
    if (std::fabs(r[j]) <= tol) continue;
    const bool want_lower = (r[j] > 0.0) != maximize;
    const double bound = want_lower ? p.variables[j].lower : p.variables[j].upper;
    if (!std::isfinite(bound)) return std::numeric_limits<double>::quiet_NaN();
    value += r[j] * bound;
  }
  return value;
}

// Checks dual sign feasibility and that the dual value equals the primal
// objective within tol.
inline bool VerifyDualCertificate(const DeterministicMILP& p,
                                  const SolveResult& res, double tol = 1e-7) {
  if (res.status != SolveStatus::kOptimal) return false;
  if (static_cast<int>(res.row_duals.size()) != p.num_rows()) return false;
  const double s = p.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  for (int i = 0; i < p.num_rows(); ++i) {
    const double y = s * res.row_duals[i];
    if (p.rows[i].sense == RowSense::kLessEqual && y > tol) return false;
    if (p.rows[i].sense == RowSense::kGreaterEqual && y < -tol) return false;
  }
  const double d = DualObjective(p, res.row_duals);
  if (std::isnan(d)) return false;
  return std::fabs(d - res.objective) <= tol * std::max(1.0, std::fabs(res.objective));
}

// Checks that the Farkas multipliers give a valid <= aggregate whose minimum
// over the bound box exceeds its right-hand side.
inline bool VerifyFarkas(const DeterministicMILP& p, const std::vector<double>& mu,
                         double tol = 1e-9) {
  if (static_cast<int>(mu.size()) != p.num_rows()) return false;
  std::vector<double> alpha(p.num_variables(), 0.0);
  double beta = 0.0;
  for (int i = 0; i < p.num_rows(); ++i) {
    const double m = mu[i];
    if (p.rows[i].sense == RowSense::kLessEqual && m < -tol) return false;
    if (p.rows[i].sense == RowSense::kGreaterEqual && m > tol) return false;
    beta += m * p.rows[i].rhs;
    for (const auto& [var, coef] : p.rows[i].terms) alpha[var] += m * coef;
  }
  double lhs_min = 0.0;
  for (int j = 0; j < p.num_variables(); ++j) {
    const double a = alpha[j];
    if (std::fabs(a) <= tol) continue;
    const double b = a > 0.0 ? p.variables[j].lower : p.variables[j].upper;
    if (!std::isfinite(b)) return false;
    lhs_min += a * b;
  }
  return lhs_min > beta + tol;
}

// Checks that ray is a recession direction of the feasible set that improves
// the objective.
inline bool VerifyRay(const DeterministicMILP& p, const std::vector<double>& ray,
                      double tol = 1e-7) {
  if (static_cast<int>(ray.size()) != p.num_variables()) return false;
  double norm = 0.0;
  for (double v : ray) norm = std::max(norm, std::fabs(v));
  if (norm == 0.0) return false;
  for (int i = 0; i < p.num_rows(); ++i) {
    const double act = p.RowActivity(i, ray) / norm;
    if (p.rows[i].sense == RowSense::kLessEqual && act > tol) return false;
    if (p.rows[i].sense == RowSense::kGreaterEqual && act < -tol) return false;
    if (p.rows[i].sense == RowSense::kEqual && std::fabs(act) > tol) return false;
  }
  for (int j = 0; j < p.num_variables(); ++j) {
    const double d = ray[j] / norm;
    if (std::isfinite(p.variables[j].lower) && d < -tol) return false;
    if (std::isfinite(p.variables[j].upper) && d > tol) return false;
  }
  double gain = 0.0;
  for (int j = 0; j < p.num_variables(); ++j) gain += p.objective[j] * ray[j] / norm;
  return p.sense == ObjectiveSense::kMaximize ? gain > tol : gain < -tol;
}

namespace internal {

inline bool Better(ObjectiveSense sense, double a, double b) {
  return sense == ObjectiveSense::kMaximize ? a > b : a < b;
}

}  // namespace internal

// Branch-and-bound over SolveLp: priority then most-fractional branching,
// depth-first node
// selection with best-bound tie-break.
inline SolveResult SolveMilp(const DeterministicMILP& p,
                             const SolverOptions& options = SolverOptions()) {
  if (!p.HasIntegers()) return SolveLp(p, options);
  struct Node {
    std::vector<double> lower;
    std::vector<double> upper;
    double bound;
    int depth;
    long seq;
  };
  const bool maximize = p.sense == ObjectiveSense::kMaximize;
  const int n = p.num_variables();
  DeterministicMILP work = p;
  for (MilpVariable& v : work.variables) {
    if (v.integer) {
      v.lower = std::ceil(v.lower - options.integrality_tolerance);
      v.upper = std::floor(v.upper + options.integrality_tolerance);
    }
  }
  SolveResult best;
  best.status = SolveStatus::kInfeasible;
  bool have_incumbent = false;
  std::vector<Node> open;
  long seq = 0;
  {
    Node root;
    root.lower.resize(n);
    root.upper.resize(n);
    for (int j = 0; j < n; ++j) {
      root.lower[j] = work.variables[j].lower;
      root.upper[j] = work.variables[j].upper;
    }
    root.bound = maximize ? kInfinity : -kInfinity;
    root.depth = 0;
    root.seq = seq++;
    open.push_back(std::move(root));
  }
  int nodes = 0;
  int iterations = 0;
  auto prune_tol = [](double v) { return 1e-9 * std::max(1.0, std::fabs(v)); };
  // With an integral objective over integer variables, bounds round inward.
  bool integral_objective = std::fabs(p.objective_constant - std::round(p.objective_constant)) < 1e-12;
  for (int j = 0; j < n && integral_objective; ++j) {
    const double c = p.objective[j];
    if (c != 0.0 && (!p.variables[j].integer || std::fabs(c - std::round(c)) > 1e-12)) {
      integral_objective = false;
    }
  }
  auto effective = [&](double b) {
    if (!integral_objective || !std::isfinite(b)) return b;
    return maximize ? std::floor(b + 1e-6) : std::ceil(b - 1e-6);
  };
  while (!open.empty()) {
    if (nodes >= options.max_nodes) {
      SolveResult out = best;
      out.status = SolveStatus::kIterationLimit;
      out.nodes = nodes;
      out.iterations = iterations;
      double bb = open.front().bound;
      for (const Node& nd : open) {
        bb = maximize ? std::max(bb, nd.bound) : std::min(bb, nd.bound);
      }
      out.best_bound = bb;
      return out;
    }
    // Deepest node first, best bound among equals, then insertion order.
    std::size_t pick = 0;
    for (std::size_t k = 1; k < open.size(); ++k) {
      const Node& a = open[k];
      const Node& b = open[pick];
      if (a.depth != b.depth) {
        if (a.depth > b.depth) pick = k;
      } else if (a.bound != b.bound) {
        if (internal::Better(p.sense, a.bound, b.bound)) pick = k;
      } else if (a.seq > b.seq) {
        pick = k;
      }
    }
    Node node = std::move(open[pick]);
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    if (have_incumbent &&
        !internal::Better(p.sense, effective(node.bound), best.objective + (maximize ? 1 : -1) * prune_tol(best.objective))) {
      continue;
    }
    ++nodes;
    for (int j = 0; j < n; ++j) {
      work.variables[j].lower = node.lower[j];
      work.variables[j].upper = node.upper[j];
    }
    SolveResult lp = SolveLp(work, options);
    iterations += lp.iterations;
    if (lp.status == SolveStatus::kInfeasible) continue;
    if (lp.status == SolveStatus::kIterationLimit) {
      SolveResult out = best;
      out.status = SolveStatus::kIterationLimit;
      out.nodes = nodes;
      out.iterations = iterations;
      return out;
    }
    if (lp.status == SolveStatus::kUnbounded) {
      lp.nodes = nodes;
      lp.iterations = iterations;
      return lp;
    }
    if (have_incumbent &&
        !internal::Better(p.sense, effective(lp.objective), best.objective + (maximize ? 1 : -1) * prune_tol(best.objective))) {
      continue;
    }
    int branch = -1;
    double best_frac = options.integrality_tolerance;
    for (int j = 0; j < n; ++j) {
      if (!p.variables[j].integer) continue;
      const double v = lp.values[j];
      const double frac = std::fabs(v - std::round(v));
      if (frac <= options.integrality_tolerance + 1e-12) continue;
      const int prio = p.variables[j].priority;
      if (branch < 0 || prio > p.variables[branch].priority ||
          (prio == p.variables[branch].priority && frac > best_frac + 1e-12)) {
        best_frac = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      std::vector<double> x = lp.values;
      for (int j = 0; j < n; ++j) {
        if (p.variables[j].integer) x[j] = std::round(x[j]);
      }
      if (p.MaxViolation(x) > options.feasibility_tolerance * 10) x = lp.values;
      best.status = SolveStatus::kOptimal;
      best.values = x;
      best.objective = p.ObjectiveValue(x);
      have_incumbent = true;
      continue;
    }
    const double v = lp.values[branch];
    Node down{node.lower, node.upper, lp.objective, node.depth + 1, 0};
    Node up{node.lower, node.upper, lp.objective, node.depth + 1, 0};
    down.upper[branch] = std::floor(v);
    up.lower[branch] = std::ceil(v);
    // The child on the rounding side is explored first.
    if (v - std::floor(v) >= 0.5) {
      down.seq = seq++;
      up.seq = seq++;
    } else {
      up.seq = seq++;
      down.seq = seq++;
    }
    open.push_back(std::move(down));
    open.push_back(std::move(up));
  }
  best.nodes = nodes;
  best.iterations = iterations;
  best.best_bound = best.objective;
  return best;
}

}  // namespace robopt

#endif  // ROBOPT_SOLVER_CORE_HPP_

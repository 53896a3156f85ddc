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

// Duality-based robust counterparts, affine decision rules, Pareto
// re-optimization and robust fractional programs.

#ifndef ROBOPT_REFORMULATE_HPP_
#define ROBOPT_REFORMULATE_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robopt/model.hpp"
#include "robopt/solver_core.hpp"
#include "robopt/uncertainty.hpp"

namespace robopt {

// Origin of a generated row or variable. source is the model constraint
// index, or -1 for the objective and original variables.
struct Provenance {
  int source = -1;
  std::string set_kind;
  std::string role;
};

struct ReformulationArtifact {
  DeterministicMILP milp;
  std::vector<Provenance> rows;
  std::vector<Provenance> vars;
  int num_original = 0;
};

struct RcOptions {
  // Accept uncertain equalities even without the per-constraint flag.
  bool allow_uncertain_equality = false;
};

// Solves with the MILP driver when integers are present.
inline SolveResult SolveDeterministic(const DeterministicMILP& p,
                                      const SolverOptions& opt = {}) {
  return p.HasIntegers() ? SolveMilp(p, opt) : SolveLp(p, opt);
}

namespace internal {

// An affine function of x: sum coefs_v x_v + constant.
struct XAffine {
  std::map<int, double> coefs;
  double constant = 0.0;

  bool IsConstant() const {
    for (const auto& [v, c] : coefs) {
      if (c != 0.0) return false;
    }
    return true;
  }
};

inline LinearExpr ToExpr(const std::map<int, double>& m) {
  LinearExpr e;
  for (const auto& [v, c] : m) {
    if (c != 0.0) e.push_back({v, c});
  }
  return e;
}

// Builds sign * [(a + P zeta)^T x - r^T zeta] split into the certain part and
// per-coordinate coefficient functions G_k(x).
inline void SplitConstraint(const UncertainConstraint& c, int dim, double sign,
                            std::map<int, double>* a, std::vector<XAffine>* g) {
  a->clear();
  for (const auto& [v, coef] : c.a) (*a)[v] += sign * coef;
  g->assign(dim, XAffine());
  for (const auto& [v, row] : c.p) {
    for (const auto& [k, coef] : row) (*g)[k].coefs[v] += sign * coef;
  }
  for (const auto& [k, coef] : c.rhs_factor) (*g)[k].constant -= sign * coef;
}

class RcBuilder {
 public:
  explicit RcBuilder(ReformulationArtifact* art) : art_(art) {}

  int NewVar(const std::string& name, double lo, double hi, int source,
             const std::string& kind, const std::string& role) {
    const int j = art_->milp.AddVariable(name, lo, hi);
    art_->vars.push_back({source, kind, role});
    return j;
  }

  void AddRow(LinearExpr e, RowSense s, double rhs, int source, const std::string& kind,
              const std::string& role, const std::string& name) {
    art_->milp.AddRow(std::move(e), s, rhs, name);
    art_->rows.push_back({source, kind, role});
  }

  // a^T x + max_{zeta in s} sum_k G_k(x) zeta_k <= rhs, exactly.
  void AddRobustLe(std::map<int, double> a, std::vector<XAffine> g, double rhs,
                   const UncertaintySet& set, int source, const std::string& name) {
    const std::string kind = ToString(set.kind);
    const UncertaintySet* s = &set;
    std::vector<int> free(set.dim);
    for (int k = 0; k < set.dim; ++k) free[k] = k;
    if (set.sliced()) {
      for (std::size_t t = 0; t < set.pinned.size(); ++t) {
        const XAffine& gk = g[set.pinned[t]];
        const double v = set.pinned_value[t];
        for (const auto& [x, coef] : gk.coefs) a[x] += coef * v;
        rhs -= gk.constant * v;
      }
      free = FreeIndices(set);
      s = set.free_set.get();
    }
    std::vector<XAffine> gf;
    for (int k : free) gf.push_back(g[k]);
    const int m = static_cast<int>(gf.size());
    auto row_with = [&](std::map<int, double> extra) {
      std::map<int, double> r = a;
      for (const auto& [v, c] : extra) r[v] += c;
      return ToExpr(r);
    };
    switch (s->kind) {
      case SetKind::kBox: {
        std::map<int, double> extra;
        for (int k = 0; k < m; ++k) {
          const double lo = s->lower[k], hi = s->upper[k];
          if (gf[k].IsConstant()) {
            rhs -= std::max(lo * gf[k].constant, hi * gf[k].constant);
            continue;
          }
          if (lo == hi) {
            for (const auto& [v, c] : gf[k].coefs) extra[v] += lo * c;
            rhs -= lo * gf[k].constant;
            continue;
          }
          const int u = NewVar(name + "#u" + std::to_string(free[k]), -kInfinity, kInfinity,
                               source, kind, "abs-epigraph");
          for (double bound : {lo, hi}) {
            // u >= bound * G_k(x).
            std::map<int, double> r;
            r[u] = 1.0;
            for (const auto& [v, c] : gf[k].coefs) r[v] -= bound * c;
            AddRow(ToExpr(r), RowSense::kGreaterEqual, bound * gf[k].constant, source, kind,
                   "abs-bound", name + "#ub" + std::to_string(free[k]));
          }
          extra[u] += 1.0;
        }
        AddRow(row_with(extra), RowSense::kLessEqual, rhs, source, kind, "robust-main", name);
        return;
      }
      case SetKind::kBudgeted: {
        std::map<int, double> extra;
        const int z = NewVar(name + "#z", 0.0, kInfinity, source, kind, "budget-dual");
        extra[z] = s->gamma;
        for (int k = 0; k < m; ++k) {
          const int p = NewVar(name + "#p" + std::to_string(free[k]), 0.0, kInfinity, source,
                               kind, "budget-dual");
          extra[p] = 1.0;
          for (double sg : {1.0, -1.0}) {
            // z + p_k >= sg * G_k(x).
            std::map<int, double> r;
            r[z] = 1.0;
            r[p] = 1.0;
            for (const auto& [v, c] : gf[k].coefs) r[v] -= sg * c;
            AddRow(ToExpr(r), RowSense::kGreaterEqual, sg * gf[k].constant, source, kind,
                   "budget-bound", name + "#b" + std::to_string(free[k]));
          }
        }
        AddRow(row_with(extra), RowSense::kLessEqual, rhs, source, kind, "robust-main", name);
        return;
      }
      case SetKind::kPolyhedral:
      case SetKind::kClt: {
        if (!IsBounded(*s)) {
          throw Error("constraint '" + name + "' is bound to an unbounded polyhedral set");
        }
        auto [d, q] = PolyhedralForm(*s);
        std::map<int, double> extra;
        std::vector<int> w(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
          w[i] = NewVar(name + "#w" + std::to_string(i), 0.0, kInfinity, source, kind,
                        "polyhedral-dual");
          extra[w[i]] += q[i];
        }
        for (int k = 0; k < m; ++k) {
          // sum_i D_ik w_i + G_k(x) = 0.
          std::map<int, double> r;
          for (std::size_t i = 0; i < d.size(); ++i) {
            if (d[i][k] != 0.0) r[w[i]] += d[i][k];
          }
          for (const auto& [v, c] : gf[k].coefs) r[v] += c;
          AddRow(ToExpr(r), RowSense::kEqual, -gf[k].constant, source, kind, "dual-equality",
                 name + "#dual" + std::to_string(free[k]));
        }
        AddRow(row_with(extra), RowSense::kLessEqual, rhs, source, kind, "robust-main", name);
        return;
      }
      case SetKind::kScenarioHull: {
        for (std::size_t p = 0; p < s->points.size(); ++p) {
          std::map<int, double> r = a;
          double rr = rhs;
          for (int k = 0; k < m; ++k) {
            const double z = s->points[p][k];
            for (const auto& [v, c] : gf[k].coefs) r[v] += z * c;
            rr -= z * gf[k].constant;
          }
          AddRow(ToExpr(r), RowSense::kLessEqual, rr, source, kind, "scenario",
                 name + "#s" + std::to_string(p));
        }
        return;
      }
      case SetKind::kBall:
      case SetKind::kBallBox:
        throw Error("constraint '" + name + "' uses a " + kind +
                    " set; solve it with the adversarial module");
    }
  }

 private:
  ReformulationArtifact* art_;
};

}  // namespace internal

// Tractable robust counterpart of an uncertain LP/MILP whose constraints use
// Box, Budgeted, Polyhedral, Clt or ScenarioHull sets.
inline ReformulationArtifact ReformulateRc(const UncertainLP& m, const RcOptions& opt = {}) {
  if (m.objective.IsUncertain()) {
    throw Error("objective is uncertain; apply EpigraphObjective first");
  }
  ReformulationArtifact art;
  internal::RcBuilder b(&art);
  for (const ModelVariable& v : m.variables) {
    if (v.adjustable) {
      throw Error("variable '" + v.name + "' is adjustable; expand decision rules first");
    }
    art.milp.AddVariable(v.name, v.lower, v.upper, v.integer);
    art.vars.push_back({-1, "", "original"});
  }
  art.num_original = m.num_variables();
  art.milp.sense = m.objective.sense;
  for (const auto& [v, c] : m.objective.c) art.milp.objective[v] += c;
  art.milp.objective_constant = m.objective.constant;
  for (int i = 0; i < static_cast<int>(m.constraints.size()); ++i) {
    const UncertainConstraint& c = m.constraints[i];
    const std::string name = c.name.empty() ? "c" + std::to_string(i) : c.name;
    if (!c.IsUncertain()) {
      b.AddRow(internal::ToExpr(c.a), c.sense, c.rhs, i, "", "certain", name);
      continue;
    }
    const UncertaintySet* s = m.SetOf(c);
    if (!s) throw Error("constraint '" + name + "' has no uncertainty set", internal::ConstraintPointer(i) + "/set");
    if (c.sense == RowSense::kEqual && !c.allow_uncertain_equality &&
        !opt.allow_uncertain_equality) {
      throw Error("constraint '" + name + "' is an uncertain equality; set the override flag or "
                  "eliminate a variable first", internal::ConstraintPointer(i) + "/sense");
    }
    std::map<int, double> a;
    std::vector<internal::XAffine> g;
    if (c.sense != RowSense::kGreaterEqual) {
      internal::SplitConstraint(c, s->dim, 1.0, &a, &g);
      b.AddRobustLe(a, g, c.rhs, *s, i, name);
    }
    if (c.sense != RowSense::kLessEqual) {
      internal::SplitConstraint(c, s->dim, -1.0, &a, &g);
      b.AddRobustLe(a, g, -c.rhs, *s, i, name + (c.sense == RowSense::kEqual ? "#ge" : ""));
    }
  }
  return art;
}

inline Vector OriginalValues(const ReformulationArtifact& art, const SolveResult& r) {
  if (r.values.empty()) return {};
  return Vector(r.values.begin(), r.values.begin() + art.num_original);
}

// The deterministic instance with each set's zeta fixed. Missing sets take
// their nominal point. Adjustable variables become ordinary variables.
inline DeterministicMILP Instantiate(const UncertainLP& m,
                                    const std::map<std::string, Vector>& zeta = {}) {
  std::map<std::string, Vector> z;
  for (const auto& [name, s] : m.sets) {
    auto it = zeta.find(name);
    z[name] = it != zeta.end() ? it->second : NominalPoint(s);
  }
  DeterministicMILP p;
  for (const ModelVariable& v : m.variables) p.AddVariable(v.name, v.lower, v.upper, v.integer);
  p.sense = m.objective.sense;
  for (const auto& [v, c] : m.objective.c) p.objective[v] += c;
  p.objective_constant = m.objective.constant;
  if (m.objective.IsUncertain()) {
    const Vector& oz = z.at(m.objective.set);
    for (const auto& [v, row] : m.objective.factor) {
      for (const auto& [k, c] : row) p.objective[v] += c * oz[k];
    }
  }
  for (const UncertainConstraint& c : m.constraints) {
    std::map<int, double> a = c.a;
    double rhs = c.rhs;
    if (c.IsUncertain()) {
      const Vector& cz = z.at(c.set);
      for (const auto& [v, row] : c.p) {
        for (const auto& [k, coef] : row) a[v] += coef * cz[k];
      }
      for (const auto& [k, coef] : c.rhs_factor) rhs += coef * cz[k];
    }
    p.AddRow(internal::ToExpr(a), c.sense, rhs, c.name);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Affine decision rules.

// y(zeta) = intercept + sum_r slopes[r] * (basis[r]^T zeta), with basis rows
// over the full zeta of `set`.
struct DecisionRule {
  int variable = -1;
  int intercept = -1;
  std::vector<int> slopes;
  Matrix basis;
  std::string set;

  double Evaluate(const Vector& x, const Vector& zeta) const {
    double y = x[intercept];
    for (std::size_t r = 0; r < slopes.size(); ++r) y += x[slopes[r]] * internal::Dot(basis[r], zeta);
    return y;
  }
};

struct AarcExpansion {
  UncertainLP model;
  std::vector<DecisionRule> rules;
  // Index of the epigraph variable when the objective had to move, else -1.
  int epigraph = -1;
};

namespace internal {

inline std::string RuleSet(const UncertainLP& m, int y) {
  const ModelVariable& v = m.variables[y];
  if (!v.adjustable->set.empty()) return v.adjustable->set;
  std::string found;
  for (const UncertainConstraint& c : m.constraints) {
    if (c.set.empty()) continue;
    if (!found.empty() && found != c.set) {
      throw Error("adjustable variable '" + v.name + "' needs an explicit set");
    }
    found = c.set;
  }
  if (found.empty() && m.sets.size() == 1) found = m.sets.begin()->first;
  if (found.empty()) throw Error("adjustable variable '" + v.name + "' has no uncertainty set");
  return found;
}

}  // namespace internal

// Substitutes every adjustable variable by its affine rule. The intercept
// keeps the variable's index; slope variables are appended.
inline AarcExpansion ExpandAarc(const UncertainLP& m) {
  AarcExpansion out;
  out.model = m;
  UncertainLP& r = out.model;
  std::vector<ModelVariable> bounds_of;
  for (int y = 0; y < m.num_variables(); ++y) {
    const ModelVariable& v = m.variables[y];
    if (!v.adjustable) continue;
    if (v.integer) throw Error("adjustable variable '" + v.name + "' is integer; use split recourse");
    DecisionRule rule;
    rule.variable = y;
    rule.intercept = y;
    rule.set = internal::RuleSet(m, y);
    auto sit = m.sets.find(rule.set);
    if (sit == m.sets.end()) throw Error("unknown set '" + rule.set + "'");
    const int dim = sit->second.dim;
    std::vector<int> idx = v.adjustable->set_indices;
    if (idx.empty()) {
      for (int k = 0; k < dim; ++k) idx.push_back(k);
    }
    Matrix base = v.adjustable->info_base;
    if (base.empty()) {
      for (std::size_t j = 0; j < idx.size(); ++j) {
        Vector row(idx.size(), 0.0);
        row[j] = 1.0;
        base.push_back(row);
      }
    }
    for (const Vector& b : base) {
      if (b.size() != idx.size()) throw Error("info_base width mismatch for '" + v.name + "'");
      Vector full(dim, 0.0);
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] < 0 || idx[j] >= dim) throw Error("set index out of range for '" + v.name + "'");
        full[idx[j]] += b[j];
      }
      rule.basis.push_back(full);
    }
    for (std::size_t q = 0; q < rule.basis.size(); ++q) {
      rule.slopes.push_back(
          r.AddVariable(v.name + "#slope" + std::to_string(q), -kInfinity, kInfinity));
    }
    // Substitute in constraints.
    for (UncertainConstraint& c : r.constraints) {
      auto pit = c.p.find(y);
      if (pit != c.p.end()) {
        for (const auto& [k, coef] : pit->second) {
          if (coef != 0.0) {
            throw Error("adjustable variable '" + v.name + "' has an uncertain coefficient in '" +
                        c.name + "' (fixed recourse violated)");
          }
        }
        c.p.erase(pit);
      }
      auto ait = c.a.find(y);
      if (ait == c.a.end() || ait->second == 0.0) continue;
      const double ay = ait->second;
      bool any = false;
      for (std::size_t q = 0; q < rule.basis.size(); ++q) {
        for (int k = 0; k < dim; ++k) {
          if (rule.basis[q][k] != 0.0) {
            c.p[rule.slopes[q]][k] += ay * rule.basis[q][k];
            any = true;
          }
        }
      }
      if (any) {
        if (!c.set.empty() && c.set != rule.set) {
          throw Error("constraint '" + c.name + "' mixes sets '" + c.set + "' and '" + rule.set + "'");
        }
        c.set = rule.set;
      }
    }
    // Bounds become robust constraints.
    for (int side = 0; side < 2; ++side) {
      const double bnd = side == 0 ? v.lower : v.upper;
      if (!std::isfinite(bnd)) continue;
      UncertainConstraint c;
      c.name = v.name + (side == 0 ? "#lb" : "#ub");
      c.a[y] = 1.0;
      for (std::size_t q = 0; q < rule.basis.size(); ++q) {
        for (int k = 0; k < dim; ++k) {
          if (rule.basis[q][k] != 0.0) c.p[rule.slopes[q]][k] = rule.basis[q][k];
        }
      }
      c.sense = side == 0 ? RowSense::kGreaterEqual : RowSense::kLessEqual;
      c.rhs = bnd;
      c.set = c.IsUncertain() ? rule.set : "";
      r.constraints.push_back(std::move(c));
    }
    r.variables[y].lower = -kInfinity;
    r.variables[y].upper = kInfinity;
    r.variables[y].adjustable.reset();
    // Objective.
    auto oit = r.objective.c.find(y);
    if (oit != r.objective.c.end() && oit->second != 0.0) {
      if (r.objective.IsUncertain() && r.objective.set != rule.set) {
        throw Error("objective mixes uncertainty sets");
      }
      for (std::size_t q = 0; q < rule.basis.size(); ++q) {
        for (int k = 0; k < dim; ++k) {
          if (rule.basis[q][k] != 0.0) {
            r.objective.factor[rule.slopes[q]][k] += oit->second * rule.basis[q][k];
          }
        }
      }
      r.objective.set = rule.set;
    }
    out.rules.push_back(std::move(rule));
  }
  if (r.objective.IsUncertain()) {
    r = EpigraphObjective(r, "aarc#objective");
    out.epigraph = r.num_variables() - 1;
  }
  return out;
}

// Info base made of selected rows of a factor matrix: a rule linear in the
// observed parameters a + P zeta rather than in zeta itself.
inline Matrix FactorInfoBase(const Matrix& p, const std::vector<int>& rows) {
  Matrix out;
  for (int r : rows) out.push_back(p.at(r));
  return out;
}

// Full decision vector of the original model at zeta.
inline Vector EvaluateRules(const AarcExpansion& e, int num_original, const Vector& x,
                            const Vector& zeta) {
  Vector out(x.begin(), x.begin() + num_original);
  for (const DecisionRule& r : e.rules) out[r.variable] = r.Evaluate(x, zeta);
  return out;
}

// ---------------------------------------------------------------------------
// Pareto re-optimization.

struct ParetoResult {
  SolveResult result;
  double worst_case = 0.0;
  double nominal_before = 0.0;
  double nominal_after = 0.0;
};

// Worst-case value of an (optionally uncertain) objective at x.
inline double WorstCaseObjective(const UncertainLP& m, const Vector& x) {
  double v = m.ObjectiveValue(x);
  if (!m.objective.IsUncertain()) return v;
  const UncertaintySet& s = m.sets.at(m.objective.set);
  Vector g(s.dim, 0.0);
  for (const auto& [j, row] : m.objective.factor) {
    for (const auto& [k, c] : row) g[k] += c * x[j];
  }
  if (m.objective.sense == ObjectiveSense::kMinimize) return v + Support(s, g).value;
  for (double& t : g) t = -t;
  return v - Support(s, g).value;
}

inline double NominalObjective(const UncertainLP& m, const Vector& x, const Vector& zbar) {
  double v = m.ObjectiveValue(x);
  for (const auto& [j, row] : m.objective.factor) {
    for (const auto& [k, c] : row) v += c * x[j] * zbar[k];
  }
  return v;
}

// Among solutions whose worst-case objective attains t_star, optimizes the
// objective at the nominal scenario zbar (the set's nominal point if empty).
inline ParetoResult ParetoReoptimize(const UncertainLP& m, double t_star, const Vector& x_before,
                                     Vector zbar = {}, const SolverOptions& sopt = {}) {
  if (m.objective.IsUncertain() && zbar.empty()) zbar = NominalPoint(m.sets.at(m.objective.set));
  UncertainLP w = m;
  UncertainConstraint c;
  c.name = "pareto#worst";
  c.a = m.objective.c;
  c.p = m.objective.factor;
  const double slack = 1e-9 * std::max(1.0, std::fabs(t_star));
  if (m.objective.sense == ObjectiveSense::kMinimize) {
    c.sense = RowSense::kLessEqual;
    c.rhs = t_star - m.objective.constant + slack;
  } else {
    c.sense = RowSense::kGreaterEqual;
    c.rhs = t_star - m.objective.constant - slack;
  }
  c.set = m.objective.IsUncertain() ? m.objective.set : "";
  w.constraints.push_back(c);
  // Nominal objective.
  for (const auto& [j, row] : m.objective.factor) {
    for (const auto& [k, coef] : row) w.objective.c[j] += coef * zbar[k];
  }
  w.objective.factor.clear();
  w.objective.set.clear();
  const ReformulationArtifact art = ReformulateRc(w);
  ParetoResult out;
  out.result = SolveDeterministic(art.milp, sopt);
  if (!x_before.empty()) out.nominal_before = NominalObjective(m, x_before, zbar);
  if (out.result.status == SolveStatus::kOptimal) {
    const Vector x = OriginalValues(art, out.result);
    out.result.values = x;
    out.worst_case = WorstCaseObjective(m, x);
    out.nominal_after = NominalObjective(m, x, zbar);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Robust fractional programs: min_x max_zeta num(x, zeta) / den(x, zeta).

struct FractionalResult {
  SolveStatus status = SolveStatus::kOptimal;
  double lambda = 0.0;
  Vector x;
  int iterations = 0;
};

namespace internal {

inline UncertainLP ParametricModel(const UncertainLP& base, const AffineForm& num,
                                   const AffineForm& den, const std::string& set, double lambda,
                                   int t) {
  UncertainLP m = base;
  UncertainConstraint c;
  c.name = "fractional#epigraph";
  AffineForm f = num;
  AffineForm neg = den;
  for (auto& [v, coef] : neg.a) coef *= -lambda;
  for (auto& [v, row] : neg.p) {
    for (auto& [k, coef] : row) coef *= -lambda;
  }
  neg.constant *= -lambda;
  for (auto& [k, coef] : neg.zeta) coef *= -lambda;
  f += neg;
  c.a = f.a;
  c.a[t] -= 1.0;
  c.p = f.p;
  for (const auto& [k, coef] : f.zeta) c.rhs_factor[k] = -coef;
  c.rhs = -f.constant;
  c.set = c.IsUncertain() ? set : "";
  m.constraints.push_back(std::move(c));
  m.objective = Objective();
  m.objective.c[t] = 1.0;
  return m;
}

}  // namespace internal

// Optimal value of min_x max_zeta [num - lambda den]; -inf when unbounded.
inline double ParametricValue(const UncertainLP& base, const AffineForm& num,
                              const AffineForm& den, const std::string& set, double lambda,
                              Vector* x = nullptr) {
  UncertainLP b = base;
  const int t = b.AddVariable("fractional#t", -kInfinity, kInfinity);
  const UncertainLP m = internal::ParametricModel(b, num, den, set, lambda, t);
  const ReformulationArtifact art = ReformulateRc(m);
  const SolveResult r = SolveDeterministic(art.milp);
  if (r.status == SolveStatus::kUnbounded) return -kInfinity;
  if (r.status != SolveStatus::kOptimal) throw Error("parametric problem is infeasible");
  if (x) *x = Vector(r.values.begin(), r.values.begin() + base.num_variables());
  return r.objective;
}

// Minimum of den over feasible x and zeta; exact when den has no x-zeta
// products, otherwise by enumerating candidate zeta (box corners, hull points).
inline double MinDenominator(const UncertainLP& base, const AffineForm& den,
                             const UncertaintySet& s) {
  bool bilinear = false;
  for (const auto& [v, row] : den.p) {
    for (const auto& [k, c] : row) bilinear |= c != 0.0;
  }
  auto lp_at = [&](const Vector& z) {
    UncertainLP m = base;
    m.objective = Objective();
    m.objective.sense = ObjectiveSense::kMinimize;
    for (const auto& [v, c] : den.a) m.objective.c[v] += c;
    for (const auto& [v, row] : den.p) {
      for (const auto& [k, c] : row) m.objective.c[v] += c * z[k];
    }
    double zc = den.constant;
    for (const auto& [k, c] : den.zeta) zc += c * z[k];
    m.objective.constant = zc;
    const ReformulationArtifact art = ReformulateRc(m);
    const SolveResult r = SolveDeterministic(art.milp);
    if (r.status == SolveStatus::kUnbounded) return -kInfinity;
    if (r.status != SolveStatus::kOptimal) throw Error("fractional feasible set is empty");
    return r.objective;
  };
  if (!bilinear) {
    Vector g(s.dim, 0.0);
    for (const auto& [k, c] : den.zeta) g[k] -= c;
    const double worst = -Support(s, g).value;
    return lp_at(Vector(s.dim, 0.0)) + worst;
  }
  std::vector<Vector> cand;
  if (s.kind == SetKind::kScenarioHull) {
    cand = s.points;
  } else if (s.kind == SetKind::kBox && s.dim <= 16) {
    for (int mask = 0; mask < (1 << s.dim); ++mask) {
      Vector z(s.dim);
      for (int k = 0; k < s.dim; ++k) z[k] = (mask >> k) & 1 ? s.upper[k] : s.lower[k];
      cand.push_back(z);
    }
  } else {
    throw Error("denominator positivity check needs a Box or ScenarioHull set when the "
                "denominator multiplies x by zeta");
  }
  double best = kInfinity;
  for (const Vector& z : cand) best = std::min(best, lp_at(z));
  return best;
}

// Bisection on lambda: the smallest lambda with ParametricValue <= 0.
inline FractionalResult SolveRobustFractional(const UncertainLP& base, const AffineForm& num,
                                              const AffineForm& den, const std::string& set,
                                              double tol = 1e-7) {
  const UncertaintySet& s = base.sets.at(set);
  if (!(MinDenominator(base, den, s) > 0.0)) {
    throw Error("denominator is not positive over the feasible set and all scenarios");
  }
  FractionalResult out;
  // Start from the nominal ratio at a feasible point.
  DeterministicMILP feas = Instantiate(base);
  feas.objective.assign(feas.num_variables(), 0.0);
  const SolveResult f = SolveDeterministic(feas);
  if (f.status != SolveStatus::kOptimal) throw Error("fractional feasible set is empty");
  const Vector z0 = NominalPoint(s);
  auto eval = [&](const AffineForm& a, const Vector& x) {
    double v = a.constant;
    for (const auto& [j, c] : a.a) v += c * x[j];
    for (const auto& [j, row] : a.p) {
      for (const auto& [k, c] : row) v += c * x[j] * z0[k];
    }
    for (const auto& [k, c] : a.zeta) v += c * z0[k];
    return v;
  };
  const double center = eval(num, f.values) / eval(den, f.values);
  double width = std::max(1.0, std::fabs(center));
  double lo = center - width, hi = center;
  Vector x;
  while (ParametricValue(base, num, den, set, hi, &x) > 0.0) {
    lo = hi;
    hi += width;
    width *= 2.0;
    if (++out.iterations > 200) throw Error("fractional bracket search failed");
  }
  width = std::max(1.0, std::fabs(center));
  while (ParametricValue(base, num, den, set, lo) <= 0.0) {
    hi = lo;
    lo -= width;
    width *= 2.0;
    if (++out.iterations > 200) {
      out.status = SolveStatus::kUnbounded;
      out.lambda = -kInfinity;
      return out;
    }
  }
  ParametricValue(base, num, den, set, hi, &x);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    Vector xm;
    if (ParametricValue(base, num, den, set, mid, &xm) <= 0.0) {
      hi = mid;
      x = xm;
    } else {
      lo = mid;
    }
    ++out.iterations;
  }
  out.lambda = hi;
  out.x = x;
  return out;
}

}  // namespace robopt

#endif  // ROBOPT_REFORMULATE_HPP_

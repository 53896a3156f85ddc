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

// Split-based adjustable recourse: the uncertainty set is partitioned into
// axis-aligned cells and every adjustable variable gets one copy per cell.

#ifndef ROBOPT_ADJUSTABLE_INTEGER_HPP_
#define ROBOPT_ADJUSTABLE_INTEGER_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robopt/adversarial.hpp"
#include "robopt/model.hpp"
#include "robopt/reformulate.hpp"
#include "robopt/solver_core.hpp"
#include "robopt/uncertainty.hpp"

namespace robopt {

using Interval = std::pair<double, double>;

// Cells over the coordinates `indices` of set `set`; cells[i][k] is the
// interval of coordinate indices[k] in cell i.
struct SplitScheme {
  std::string set;
  std::vector<int> indices;
  std::vector<std::vector<Interval>> cells;

  int size() const { return static_cast<int>(cells.size()); }

  // Lowest-index cell containing zeta, or -1.
  int Locate(const Vector& zeta, double tol = 1e-9) const {
    for (int i = 0; i < size(); ++i) {
      bool in = true;
      for (std::size_t k = 0; k < indices.size() && in; ++k) {
        const double z = zeta[indices[k]];
        in = z >= cells[i][k].first - tol && z <= cells[i][k].second + tol;
      }
      if (in) return i;
    }
    return -1;
  }
};

inline SplitScheme BreakpointSplit(const std::string& set, int index, const Vector& edges) {
  if (edges.size() < 2) throw Error("a split needs at least two breakpoints");
  SplitScheme s;
  s.set = set;
  s.indices = {index};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) throw Error("breakpoints must increase");
    s.cells.push_back({{edges[i], edges[i + 1]}});
  }
  return s;
}

// m equal-width intervals of coordinate `index` over the set's range.
inline SplitScheme EqualSplit(const std::string& set_name, const UncertaintySet& set, int index,
                              int m) {
  if (m < 1) throw Error("number of subsets must be positive");
  if (index < 0 || index >= set.dim) throw Error("split index out of range");
  const auto [lo, hi] = BoundingBox(set);
  Vector edges(m + 1);
  for (int i = 0; i <= m; ++i) edges[i] = lo[index] + (hi[index] - lo[index]) * i / m;
  edges[m] = hi[index];
  return BreakpointSplit(set_name, index, edges);
}

// Product grid of equal splits.
inline SplitScheme GridSplit(const std::string& set_name, const UncertaintySet& set,
                             const std::vector<int>& indices, const std::vector<int>& counts) {
  if (indices.size() != counts.size() || indices.empty()) throw Error("grid shape mismatch");
  SplitScheme s;
  s.set = set_name;
  s.indices = indices;
  s.cells.push_back({});
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const SplitScheme one = EqualSplit(set_name, set, indices[k], counts[k]);
    std::vector<std::vector<Interval>> next;
    for (const auto& cell : s.cells) {
      for (const auto& piece : one.cells) {
        auto c = cell;
        c.push_back(piece[0]);
        next.push_back(c);
      }
    }
    s.cells = std::move(next);
  }
  return s;
}

// Throws unless the cells cover the set's range on the split coordinates
// with pairwise disjoint interiors.
inline void CheckPartition(const SplitScheme& s, const UncertaintySet& set) {
  if (s.cells.empty()) throw Error("split scheme has no subsets");
  const auto [lo, hi] = BoundingBox(set);
  const double tol = 1e-9;
  double full = 1.0;
  for (int k : s.indices) {
    if (k < 0 || k >= set.dim) throw Error("split index out of range");
    full *= hi[k] - lo[k];
  }
  double total = 0.0;
  for (const auto& c : s.cells) {
    if (c.size() != s.indices.size()) throw Error("split cell has the wrong number of intervals");
    double vol = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const int j = s.indices[k];
      if (c[k].first < lo[j] - tol || c[k].second > hi[j] + tol || c[k].first > c[k].second) {
        throw Error("split interval leaves the set's range");
      }
      vol *= c[k].second - c[k].first;
    }
    total += vol;
  }
  for (std::size_t a = 0; a < s.cells.size(); ++a) {
    for (std::size_t b = a + 1; b < s.cells.size(); ++b) {
      double overlap = 1.0;
      for (std::size_t k = 0; k < s.indices.size(); ++k) {
        overlap *= std::max(0.0, std::min(s.cells[a][k].second, s.cells[b][k].second) -
                                     std::max(s.cells[a][k].first, s.cells[b][k].first));
      }
      if (overlap > tol * std::max(1.0, full)) throw Error("split subsets overlap");
    }
  }
  if (std::fabs(total - full) > 1e-7 * std::max(1.0, full)) {
    throw Error("split subsets do not cover the uncertainty set");
  }
}

// The set intersected with one cell.
inline UncertaintySet CellSet(const UncertaintySet& set, const SplitScheme& s, int cell) {
  const auto& c = s.cells.at(cell);
  if (set.kind == SetKind::kBox) {
    UncertaintySet out = set;
    for (std::size_t k = 0; k < s.indices.size(); ++k) {
      const int j = s.indices[k];
      out.lower[j] = std::max(out.lower[j], c[k].first);
      out.upper[j] = std::min(out.upper[j], c[k].second);
      if (out.lower[j] > out.upper[j]) throw Error("empty split subset");
    }
    return out;
  }
  if (set.kind == SetKind::kPolyhedral || set.kind == SetKind::kClt ||
      set.kind == SetKind::kBudgeted) {
    auto [d, q] = PolyhedralForm(set);
    for (std::size_t k = 0; k < s.indices.size(); ++k) {
      Vector row(set.dim, 0.0);
      row[s.indices[k]] = 1.0;
      d.push_back(row);
      q.push_back(-c[k].first);
      row[s.indices[k]] = -1.0;
      d.push_back(row);
      q.push_back(c[k].second);
    }
    return MakePolyhedral(set.dim, d, q);
  }
  throw Error(std::string("split recourse does not support ") + ToString(set.kind) + " sets");
}

struct ArcOptions {
  // Bound applied to recourse copies whose bounds are infinite.
  double recourse_bound = 1e6;
  int max_replicated_integers = 10000;
  SolverOptions solver;
};

struct ArcModel {
  UncertainLP model;
  int t = -1;
  // Original indices of the adjustable variables.
  std::vector<int> recourse;
  // copies[i][r] is the model index of recourse[r] in cell i.
  std::vector<std::vector<int>> copies;
  std::vector<std::string> cell_sets;
};

namespace internal {

inline bool Touches(const UncertainConstraint& c, const std::vector<char>& is_rec) {
  for (const auto& [v, coef] : c.a) {
    if (coef != 0.0 && is_rec[v]) return true;
  }
  for (const auto& [v, row] : c.p) {
    if (!is_rec[v]) continue;
    for (const auto& [k, coef] : row) {
      if (coef != 0.0) return true;
    }
  }
  return false;
}

template <typename Map>
Map Rename(const Map& m, const std::map<int, int>& to) {
  Map out;
  for (const auto& [v, x] : m) {
    auto it = to.find(v);
    out[it == to.end() ? v : it->second] = x;
  }
  return out;
}

}  // namespace internal

// Replicates the constraints that involve adjustable variables, and the
// objective, once per cell; the worst cell objective is the epigraph t.
inline ArcModel BuildArc1(const UncertainLP& m, const SplitScheme& scheme,
                          const ArcOptions& opt = {}) {
  if (m.objective.IsUncertain()) throw Error("split recourse needs a certain objective");
  auto sit = m.sets.find(scheme.set);
  if (sit == m.sets.end()) throw Error("split scheme names unknown set '" + scheme.set + "'");
  CheckPartition(scheme, sit->second);
  ArcModel out;
  std::vector<char> is_rec(m.num_variables(), 0);
  int integer_count = 0;
  for (int j = 0; j < m.num_variables(); ++j) {
    if (m.variables[j].adjustable) {
      is_rec[j] = 1;
      out.recourse.push_back(j);
      integer_count += m.variables[j].integer;
    }
  }
  if (static_cast<long long>(integer_count) * scheme.size() > opt.max_replicated_integers) {
    throw Error("split recourse would replicate " +
                std::to_string(static_cast<long long>(integer_count) * scheme.size()) +
                " integer variables (limit " + std::to_string(opt.max_replicated_integers) + ")");
  }
  UncertainLP& r = out.model;
  r.variables = m.variables;
  r.stages = m.stages;
  r.sets = m.sets;
  for (int j : out.recourse) {
    // Originals stay as unused placeholders so indices remain stable.
    r.variables[j].adjustable.reset();
    r.variables[j].integer = false;
    r.variables[j].lower = 0.0;
    r.variables[j].upper = 0.0;
  }
  for (int i = 0; i < scheme.size(); ++i) {
    const std::string name = scheme.set + "#cell" + std::to_string(i);
    r.sets[name] = CellSet(sit->second, scheme, i);
    out.cell_sets.push_back(name);
    std::vector<int> copy;
    for (int j : out.recourse) {
      const ModelVariable& v = m.variables[j];
      const double lo = std::isfinite(v.lower) ? v.lower : -opt.recourse_bound;
      const double hi = std::isfinite(v.upper) ? v.upper : opt.recourse_bound;
      copy.push_back(r.AddVariable(v.name + "#" + std::to_string(i), lo, hi, v.integer));
    }
    out.copies.push_back(copy);
  }
  bool integral = std::fabs(m.objective.constant - std::round(m.objective.constant)) < 1e-12;
  for (const auto& [v, c] : m.objective.c) {
    if (c != 0.0 && (!m.variables[v].integer || std::fabs(c - std::round(c)) > 1e-12)) {
      integral = false;
    }
  }
  out.t = r.AddVariable("arc#t", -kInfinity, kInfinity, integral);
  for (const UncertainConstraint& c : m.constraints) {
    if (!internal::Touches(c, is_rec)) {
      r.constraints.push_back(c);
      continue;
    }
    if (c.IsUncertain() && c.set != scheme.set) {
      throw Error("constraint '" + c.name + "' uses set '" + c.set +
                  "' but the split is defined on '" + scheme.set + "'");
    }
    for (int i = 0; i < scheme.size(); ++i) {
      std::map<int, int> to;
      for (std::size_t q = 0; q < out.recourse.size(); ++q) to[out.recourse[q]] = out.copies[i][q];
      UncertainConstraint k = c;
      k.name = c.name + "#" + std::to_string(i);
      k.a = internal::Rename(c.a, to);
      k.p = internal::Rename(c.p, to);
      if (c.IsUncertain()) k.set = out.cell_sets[i];
      r.constraints.push_back(std::move(k));
    }
  }
  const bool maximize = m.objective.sense == ObjectiveSense::kMaximize;
  for (int i = 0; i < scheme.size(); ++i) {
    std::map<int, int> to;
    for (std::size_t q = 0; q < out.recourse.size(); ++q) to[out.recourse[q]] = out.copies[i][q];
    UncertainConstraint k;
    k.name = "objective#" + std::to_string(i);
    k.a = internal::Rename(m.objective.c, to);
    k.a[out.t] -= 1.0;
    k.rhs = -m.objective.constant;
    k.sense = maximize ? RowSense::kGreaterEqual : RowSense::kLessEqual;
    r.constraints.push_back(std::move(k));
  }
  r.objective = Objective();
  r.objective.sense = m.objective.sense;
  r.objective.c[out.t] = 1.0;
  return out;
}

struct ArcSolution {
  SolveStatus status = SolveStatus::kOptimal;
  // Worst cell objective.
  double t_star = 0.0;
  // Here-and-now values (original indexing; recourse entries are zero).
  Vector x;
  // recourse[i] is the full original-indexed decision vector in cell i.
  std::vector<Vector> recourse;
  std::vector<double> cell_objective;
  double average = 0.0;
};

namespace internal {

inline bool RcCapable(const UncertainLP& m) {
  for (const UncertainConstraint& c : m.constraints) {
    if (!c.IsUncertain()) continue;
    const UncertaintySet* s = m.SetOf(c);
    if (!s) return false;
    const SetKind k = s->sliced() ? s->free_set->kind : s->kind;
    if (k == SetKind::kBall || k == SetKind::kBallBox) return false;
  }
  return true;
}

// Solves a robust model through the reformulation when possible, otherwise
// by scenario generation. Returns values of the model's own variables.
// Variables listed in `first` are branched on before all others.
inline SolveResult SolveRobust(const UncertainLP& m, const SolverOptions& sopt,
                               const std::vector<int>& first = {}) {
  if (RcCapable(m)) {
    ReformulationArtifact art = ReformulateRc(m);
    for (int j : first) art.milp.variables[j].priority = 1;
    SolveResult r = SolveDeterministic(art.milp, sopt);
    if (r.status == SolveStatus::kOptimal) r.values = OriginalValues(art, r);
    return r;
  }
  AdversarialOptions aopt;
  aopt.solver = sopt;
  AdversarialResult a = SolveAdversarial(m, aopt);
  return a.result;
}

inline std::vector<int> HereAndNow(const UncertainLP& m) {
  std::vector<int> out;
  for (int j = 0; j < m.num_variables(); ++j) {
    if (!m.variables[j].adjustable && m.variables[j].integer) out.push_back(j);
  }
  return out;
}

inline ArcSolution Extract(const UncertainLP& m, const ArcModel& am, const SolveResult& r) {
  ArcSolution out;
  out.status = r.status;
  if (r.status != SolveStatus::kOptimal) return out;
  out.x.assign(r.values.begin(), r.values.begin() + m.num_variables());
  for (int j : am.recourse) out.x[j] = 0.0;
  double sum = 0.0;
  double worst = m.objective.sense == ObjectiveSense::kMaximize ? kInfinity : -kInfinity;
  for (std::size_t i = 0; i < am.copies.size(); ++i) {
    Vector full = out.x;
    for (std::size_t q = 0; q < am.recourse.size(); ++q) {
      full[am.recourse[q]] = r.values[am.copies[i][q]];
    }
    const double obj = m.ObjectiveValue(full);
    out.cell_objective.push_back(obj);
    out.recourse.push_back(std::move(full));
    sum += obj;
    worst = m.objective.sense == ObjectiveSense::kMaximize ? std::min(worst, obj)
                                                          : std::max(worst, obj);
  }
  out.t_star = worst;
  out.average = sum / static_cast<double>(am.copies.size());
  return out;
}

// Best recourse in every cell for fixed here-and-now values x. Cells are
// independent once x is fixed, so each is a small robust program.
inline ArcSolution SolveCells(const UncertainLP& m, const ArcModel& am, const Vector& x,
                              const SolverOptions& sopt) {
  ArcSolution out;
  out.x = x;
  for (int j : am.recourse) out.x[j] = 0.0;
  const bool maximize = m.objective.sense == ObjectiveSense::kMaximize;
  double sum = 0.0;
  double worst = maximize ? kInfinity : -kInfinity;
  for (std::size_t i = 0; i < am.cell_sets.size(); ++i) {
    UncertainLP cell = m;
    cell.sets[am.cell_sets[i]] = am.model.sets.at(am.cell_sets[i]);
    for (int j = 0; j < cell.num_variables(); ++j) {
      ModelVariable& v = cell.variables[j];
      if (v.adjustable) {
        v.adjustable.reset();
        for (std::size_t q = 0; q < am.recourse.size(); ++q) {
          if (am.recourse[q] == j) {
            v.lower = am.model.variables[am.copies[i][q]].lower;
            v.upper = am.model.variables[am.copies[i][q]].upper;
          }
        }
      } else {
        v.lower = v.upper = x[j];
      }
    }
    for (UncertainConstraint& c : cell.constraints) {
      if (c.IsUncertain()) c.set = am.cell_sets[i];
    }
    const SolveResult r = SolveRobust(cell, sopt);
    if (r.status != SolveStatus::kOptimal) {
      out.status = r.status;
      return out;
    }
    Vector full = out.x;
    for (int j : am.recourse) full[j] = r.values[j];
    const double obj = m.ObjectiveValue(full);
    out.cell_objective.push_back(obj);
    out.recourse.push_back(std::move(full));
    sum += obj;
    worst = maximize ? std::min(worst, obj) : std::max(worst, obj);
  }
  out.status = SolveStatus::kOptimal;
  out.t_star = worst;
  out.average = sum / static_cast<double>(am.cell_sets.size());
  return out;
}

// Branch-and-bound over the here-and-now integers only, bounded by the LP
// relaxation of the split model `relaxed`; leaves are solved cell by cell.
// With `floor` set, leaves whose worst cell falls short of it are rejected
// and the cell sum is optimized instead of the worst cell.
inline ArcSolution DecomposedSolve(const UncertainLP& m, const ArcModel& am,
                                   const UncertainLP& relaxed, std::optional<double> floor,
                                   const SolverOptions& sopt) {
  const bool maximize = m.objective.sense == ObjectiveSense::kMaximize;
  ReformulationArtifact art = ReformulateRc(relaxed);
  DeterministicMILP lp = art.milp;
  for (MilpVariable& v : lp.variables) v.integer = false;
  const std::vector<int> here = HereAndNow(m);
  for (int j : here) {
    lp.variables[j].lower = std::ceil(lp.variables[j].lower - sopt.integrality_tolerance);
    lp.variables[j].upper = std::floor(lp.variables[j].upper + sopt.integrality_tolerance);
  }
  ArcSolution best;
  best.status = SolveStatus::kInfeasible;
  double incumbent = maximize ? -kInfinity : kInfinity;
  auto score = [&](const ArcSolution& a) { return floor ? a.average : a.t_star; };
  std::vector<std::pair<Vector, Vector>> open{{Vector(), Vector()}};
  for (int j : here) {
    open[0].first.push_back(lp.variables[j].lower);
    open[0].second.push_back(lp.variables[j].upper);
  }
  int nodes = 0;
  while (!open.empty()) {
    if (++nodes > sopt.max_nodes) {
      best.status = SolveStatus::kIterationLimit;
      return best;
    }
    auto [lo, hi] = std::move(open.back());
    open.pop_back();
    for (std::size_t q = 0; q < here.size(); ++q) {
      lp.variables[here[q]].lower = lo[q];
      lp.variables[here[q]].upper = hi[q];
    }
    const SolveResult r = SolveLp(lp, sopt);
    if (r.status == SolveStatus::kInfeasible) continue;
    if (r.status != SolveStatus::kOptimal) {
      best.status = r.status;
      return best;
    }
    double bound = r.objective;
    if (floor) bound /= static_cast<double>(am.cell_sets.size());
    const double tol = 1e-9 * std::max(1.0, std::fabs(incumbent));
    if (best.status == SolveStatus::kOptimal &&
        (maximize ? bound <= incumbent + tol : bound >= incumbent - tol)) {
      continue;
    }
    int branch = -1;
    double frac_best = sopt.integrality_tolerance;
    for (std::size_t q = 0; q < here.size(); ++q) {
      const double v = r.values[here[q]];
      const double frac = std::fabs(v - std::round(v));
      if (frac > frac_best) {
        frac_best = frac;
        branch = static_cast<int>(q);
      }
    }
    if (branch < 0) {
      Vector x(r.values.begin(), r.values.begin() + m.num_variables());
      for (int j : here) x[j] = std::round(x[j]);
      ArcSolution leaf = SolveCells(m, am, x, sopt);
      bool accept = leaf.status == SolveStatus::kOptimal;
      if (accept && floor) {
        const double slack = 1e-7 * std::max(1.0, std::fabs(*floor));
        accept = maximize ? leaf.t_star >= *floor - slack : leaf.t_star <= *floor + slack;
      }
      if (accept && (best.status != SolveStatus::kOptimal ||
                     (maximize ? score(leaf) > incumbent : score(leaf) < incumbent))) {
        incumbent = score(leaf);
        best = std::move(leaf);
      }
      // Other integer points may share this relaxation; split around x.
      for (std::size_t q = 0; q < here.size(); ++q) {
        const double v = std::round(r.values[here[q]]);
        if (lo[q] < v) {
          Vector h = hi;
          h[q] = v - 1.0;
          Vector l = lo;
          open.push_back({l, h});
        }
        if (hi[q] > v) {
          Vector l = lo;
          l[q] = v + 1.0;
          open.push_back({l, hi});
        }
        lo[q] = hi[q] = v;
      }
      continue;
    }
    const double v = r.values[here[branch]];
    Vector dh = hi;
    dh[branch] = std::floor(v);
    Vector ul = lo;
    ul[branch] = std::ceil(v);
    if (v - std::floor(v) >= 0.5) {
      open.push_back({lo, dh});
      open.push_back({ul, hi});
    } else {
      open.push_back({ul, hi});
      open.push_back({lo, dh});
    }
  }
  return best;
}

// Decomposition applies when every here-and-now variable is integer and all
// sets admit the reformulation.
inline bool Decomposable(const UncertainLP& m, const ArcModel& am) {
  for (const ModelVariable& v : m.variables) {
    if (!v.adjustable && !v.integer) return false;
  }
  return RcCapable(am.model);
}

}  // namespace internal

inline ArcSolution SolveArc(const UncertainLP& m, const SplitScheme& scheme,
                            const ArcOptions& opt = {}) {
  const ArcModel am = BuildArc1(m, scheme, opt);
  if (internal::Decomposable(m, am)) {
    return internal::DecomposedSolve(m, am, am.model, std::nullopt, opt.solver);
  }
  return internal::Extract(m, am,
                           internal::SolveRobust(am.model, opt.solver, internal::HereAndNow(m)));
}

// Keeps every cell objective at least as good as t_star and optimizes their
// sum.
inline ArcSolution ReoptimizeAverage(const UncertainLP& m, const SplitScheme& scheme,
                                     double t_star, const ArcOptions& opt = {}) {
  ArcModel am = BuildArc1(m, scheme, opt);
  UncertainLP r = am.model;
  const double slack = 1e-7 * std::max(1.0, std::fabs(t_star));
  if (m.objective.sense == ObjectiveSense::kMaximize) {
    r.variables[am.t].lower = t_star - slack;
  } else {
    r.variables[am.t].upper = t_star + slack;
  }
  r.objective.c.clear();
  for (std::size_t i = 0; i < am.copies.size(); ++i) {
    std::map<int, int> to;
    for (std::size_t q = 0; q < am.recourse.size(); ++q) to[am.recourse[q]] = am.copies[i][q];
    for (const auto& [v, c] : internal::Rename(m.objective.c, to)) r.objective.c[v] += c;
  }
  if (internal::Decomposable(m, am)) {
    return internal::DecomposedSolve(m, am, r, t_star, opt.solver);
  }
  return internal::Extract(m, am, internal::SolveRobust(r, opt.solver, internal::HereAndNow(m)));
}

// Optimistic bound from a finite scenario list with one recourse copy per
// scenario: an upper bound for maximization, a lower bound for minimization.
inline SolveResult BoundViaScenarios(const UncertainLP& m, const std::string& set,
                                     const std::vector<Vector>& scenarios,
                                     const ArcOptions& opt = {}) {
  if (scenarios.empty()) throw Error("scenario list is empty");
  const UncertaintySet& s = m.sets.at(set);
  for (const Vector& z : scenarios) {
    if (!Contains(s, z, 1e-9)) throw Error("scenario lies outside the uncertainty set");
  }
  SplitScheme degenerate;
  degenerate.set = set;
  std::vector<char> is_rec(m.num_variables(), 0);
  std::vector<int> rec;
  for (int j = 0; j < m.num_variables(); ++j) {
    if (m.variables[j].adjustable) {
      is_rec[j] = 1;
      rec.push_back(j);
    }
  }
  DeterministicMILP p;
  for (int j = 0; j < m.num_variables(); ++j) {
    const ModelVariable& v = m.variables[j];
    if (is_rec[j]) {
      p.AddVariable(v.name, 0.0, 0.0);
    } else {
      p.AddVariable(v.name, v.lower, v.upper, v.integer);
    }
  }
  std::vector<std::vector<int>> copies;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    std::vector<int> c;
    for (int j : rec) {
      const ModelVariable& v = m.variables[j];
      c.push_back(p.AddVariable(v.name + "#s" + std::to_string(i),
                                std::isfinite(v.lower) ? v.lower : -opt.recourse_bound,
                                std::isfinite(v.upper) ? v.upper : opt.recourse_bound,
                                v.integer));
    }
    copies.push_back(c);
  }
  const int t = p.AddVariable("brc#t", -kInfinity, kInfinity);
  const bool maximize = m.objective.sense == ObjectiveSense::kMaximize;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    std::map<int, int> to;
    for (std::size_t q = 0; q < rec.size(); ++q) to[rec[q]] = copies[i][q];
    for (const UncertainConstraint& c : m.constraints) {
      if (i > 0 && !internal::Touches(c, is_rec) && !c.IsUncertain()) continue;
      std::map<int, double> a = internal::Rename(c.a, to);
      double rhs = c.rhs;
      if (c.IsUncertain()) {
        if (c.set != set) throw Error("constraint '" + c.name + "' uses another set");
        for (const auto& [v, row] : internal::Rename(c.p, to)) {
          for (const auto& [k, coef] : row) a[v] += coef * scenarios[i][k];
        }
        for (const auto& [k, coef] : c.rhs_factor) rhs += coef * scenarios[i][k];
      }
      p.AddRow(internal::ToExpr(a), c.sense, rhs, c.name + "#s" + std::to_string(i));
    }
    std::map<int, double> a = internal::Rename(m.objective.c, to);
    a[t] -= 1.0;
    p.AddRow(internal::ToExpr(a), maximize ? RowSense::kGreaterEqual : RowSense::kLessEqual,
             -m.objective.constant, "objective#s" + std::to_string(i));
  }
  p.sense = m.objective.sense;
  p.objective[t] = 1.0;
  SolveResult r = SolveDeterministic(p, opt.solver);
  if (r.status != SolveStatus::kOptimal) return r;
  for (const auto& c : copies) {
    for (int j : c) {
      if (std::fabs(r.values[j]) >= opt.recourse_bound * (1.0 - 1e-9)) {
        r.status = SolveStatus::kUnbounded;
      }
    }
  }
  r.values.resize(m.num_variables());
  return r;
}

// Per cell and replicated constraint, the scenario that maximizes the
// left-hand side at the ARC solution; duplicates removed.
inline std::vector<Vector> PessimizingScenarios(const UncertainLP& m, const SplitScheme& scheme,
                                                const ArcSolution& sol) {
  std::vector<Vector> out;
  const UncertaintySet& full = m.sets.at(scheme.set);
  for (int i = 0; i < scheme.size(); ++i) {
    const UncertaintySet cell = CellSet(full, scheme, i);
    for (const UncertainConstraint& c : m.constraints) {
      if (!c.IsUncertain() || c.set != scheme.set) continue;
      const PessimizationResult p = Pessimize(c, &cell, sol.recourse[i]);
      bool dup = false;
      for (const Vector& z : out) {
        double d = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) d = std::max(d, std::fabs(z[k] - p.zeta[k]));
        dup |= d < 1e-9;
      }
      if (!dup) out.push_back(p.zeta);
    }
  }
  return out;
}

}  // namespace robopt

#endif  // ROBOPT_ADJUSTABLE_INTEGER_HPP_

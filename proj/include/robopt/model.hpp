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

// Uncertain linear programs in factor form
//
//   (a + P zeta)^T x  {<=, =, >=}  d + r^T zeta   for all zeta in Z,
//
// together with validation, pitfall lints and the structural transforms that
// keep robust counterparts exact: max/abs expansion, product linearization,
// uncertain-equality elimination and the objective epigraph.

#ifndef ROBOPT_MODEL_HPP_
#define ROBOPT_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "robopt/solver_core.hpp"
#include "robopt/uncertainty.hpp"

namespace robopt {

// var -> (zeta index -> coefficient).
using FactorMap = std::map<int, std::map<int, double>>;

// Declares y = y0 + sum_r q_r (B zeta_S)_r, where S are set_indices (all
// coordinates when empty) and B is info_base (identity when empty).
struct AdjustableRule {
  std::vector<int> set_indices;
  Matrix info_base;
  std::string set;
};

struct ModelVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integer = false;
  std::optional<AdjustableRule> adjustable;
};

struct UncertainConstraint {
  std::string name;
  std::map<int, double> a;
  FactorMap p;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::map<int, double> rhs_factor;
  // Empty for certain constraints.
  std::string set;
  // Accept an uncertain equality in reformulation and adversarial modes.
  bool allow_uncertain_equality = false;

  bool IsUncertain() const {
    for (const auto& [v, row] : p) {
      for (const auto& [k, c] : row) {
        if (c != 0.0) return true;
      }
    }
    for (const auto& [k, c] : rhs_factor) {
      if (c != 0.0) return true;
    }
    return false;
  }

  // Coefficient vector g(x) = P^T x - r over zeta, evaluated at x.
  Vector UncertainCoefficients(const Vector& x, int dim) const {
    Vector g(dim, 0.0);
    for (const auto& [v, row] : p) {
      for (const auto& [k, c] : row) g[k] += c * x[v];
    }
    for (const auto& [k, c] : rhs_factor) g[k] -= c;
    return g;
  }

  double NominalActivity(const Vector& x) const {
    double s = 0.0;
    for (const auto& [v, c] : a) s += c * x[v];
    return s;
  }

  // lhs - rhs at (x, zeta).
  double Residual(const Vector& x, const Vector& zeta) const {
    double s = NominalActivity(x) - rhs;
    for (const auto& [v, row] : p) {
      for (const auto& [k, c] : row) s += c * zeta[k] * x[v];
    }
    for (const auto& [k, c] : rhs_factor) s -= c * zeta[k];
    return s;
  }
};

struct Objective {
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::map<int, double> c;
  double constant = 0.0;
  // Optional uncertain part x^T C zeta; only epigraph_objective accepts it.
  FactorMap factor;
  std::string set;

  bool IsUncertain() const {
    for (const auto& [v, row] : factor) {
      for (const auto& [k, c] : row) {
        if (c != 0.0) return true;
      }
    }
    return false;
  }
};

// Decisions taken at one stage and the zeta coordinates revealed before them.
struct Stage {
  std::vector<int> decisions;
  std::vector<int> observed;
};

struct UncertainLP {
  std::vector<ModelVariable> variables;
  Objective objective;
  std::vector<UncertainConstraint> constraints;
  std::map<std::string, UncertaintySet> sets;
  std::vector<Stage> stages;

  int num_variables() const { return static_cast<int>(variables.size()); }

  int AddVariable(std::string name, double lower = 0.0, double upper = kInfinity,
                  bool integer = false) {
    ModelVariable v;
    v.name = std::move(name);
    v.lower = lower;
    v.upper = upper;
    v.integer = integer;
    variables.push_back(std::move(v));
    return num_variables() - 1;
  }

  int FindVariable(const std::string& name) const {
    for (int j = 0; j < num_variables(); ++j) {
      if (variables[j].name == name) return j;
    }
    return -1;
  }

  int Var(const std::string& name) const {
    const int j = FindVariable(name);
    if (j < 0) throw Error("unknown variable '" + name + "'");
    return j;
  }

  const UncertaintySet* SetOf(const UncertainConstraint& c) const {
    if (c.set.empty()) return nullptr;
    auto it = sets.find(c.set);
    return it == sets.end() ? nullptr : &it->second;
  }

  double ObjectiveValue(const Vector& x) const {
    double s = objective.constant;
    for (const auto& [v, c] : objective.c) s += c * x[v];
    return s;
  }
};

// ---------------------------------------------------------------------------
// Diagnostics.

enum class Severity { kError, kWarning, kInfo };

inline const char* ToString(Severity s) {
  switch (s) {
    case Severity::kError:
      return "error";
    case Severity::kWarning:
      return "warning";
    case Severity::kInfo:
      return "info";
  }
  return "?";
}

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string code;
  std::string message;
  // JSON pointer into the model document.
  std::string pointer;
  std::vector<int> constraints;
};

namespace internal {

inline std::string EscapePointer(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '~') {
      out += "~0";
    } else if (ch == '/') {
      out += "~1";
    } else {
      out += ch;
    }
  }
  return out;
}

inline std::string ConstraintPointer(int i) { return "/constraints/" + std::to_string(i); }

inline std::set<int> ZetaIndices(const UncertainConstraint& c) {
  std::set<int> out;
  for (const auto& [v, row] : c.p) {
    for (const auto& [k, coef] : row) {
      if (coef != 0.0) out.insert(k);
    }
  }
  for (const auto& [k, coef] : c.rhs_factor) {
    if (coef != 0.0) out.insert(k);
  }
  return out;
}

}  // namespace internal

// Lints that flag the modeling pitfalls: uncertain equalities, constraints
// that share zeta coordinates, and non-adjustable slack variables.
inline std::vector<Diagnostic> Lint(const UncertainLP& m) {
  std::vector<Diagnostic> out;
  const int nc = static_cast<int>(m.constraints.size());
  for (int i = 0; i < nc; ++i) {
    const UncertainConstraint& c = m.constraints[i];
    if (c.sense == RowSense::kEqual && c.IsUncertain()) {
      out.push_back({Severity::kWarning, "uncertain-equality",
                     "constraint '" + c.name +
                         "' is an equality with uncertain coefficients; its robust "
                         "counterpart pins the coefficients of every uncertain term",
                     internal::ConstraintPointer(i) + "/sense", {i}});
    }
  }
  // Shared zeta coordinates within a set.
  std::map<std::string, std::map<int, std::vector<int>>> users;
  for (int i = 0; i < nc; ++i) {
    const UncertainConstraint& c = m.constraints[i];
    if (c.set.empty()) continue;
    for (int k : internal::ZetaIndices(c)) users[c.set][k].push_back(i);
  }
  for (const auto& [set, by_index] : users) {
    std::set<int> shared;
    for (const auto& [k, list] : by_index) {
      if (list.size() >= 2) shared.insert(list.begin(), list.end());
    }
    if (shared.empty()) continue;
    std::string names;
    for (int i : shared) names += (names.empty() ? "" : ", ") + m.constraints[i].name;
    out.push_back({Severity::kInfo, "shared-uncertainty",
                   "constraints " + names + " share coordinates of set '" + set +
                       "'; the robust counterpart treats each constraint separately, "
                       "so a relation split over them is not enforced jointly",
                   "/sets/" + internal::EscapePointer(set),
                   std::vector<int>(shared.begin(), shared.end())});
  }
  // Non-adjustable slack: appears in exactly one constraint, an uncertain
  // equality, with a certain +-1 coefficient and a one-sided sign bound.
  for (int j = 0; j < m.num_variables(); ++j) {
    const ModelVariable& v = m.variables[j];
    if (v.adjustable) continue;
    int count = 0;
    int where = -1;
    for (int i = 0; i < nc; ++i) {
      const UncertainConstraint& c = m.constraints[i];
      auto it = c.a.find(j);
      const bool in_a = it != c.a.end() && it->second != 0.0;
      bool in_p = false;
      auto pit = c.p.find(j);
      if (pit != c.p.end()) {
        for (const auto& [k, coef] : pit->second) in_p |= coef != 0.0;
      }
      if (in_a || in_p) {
        ++count;
        where = i;
      }
    }
    if (count != 1) continue;
    const UncertainConstraint& c = m.constraints[where];
    if (c.sense != RowSense::kEqual || !c.IsUncertain()) continue;
    auto it = c.a.find(j);
    if (it == c.a.end() || std::fabs(std::fabs(it->second) - 1.0) > 1e-12) continue;
    if (c.p.count(j)) continue;
    const bool sign_bound = (v.lower == 0.0 && v.upper == kInfinity) ||
                            (v.upper == 0.0 && v.lower == -kInfinity);
    if (!sign_bound) continue;
    auto oit = m.objective.c.find(j);
    if (oit != m.objective.c.end() && oit->second != 0.0) continue;
    out.push_back({Severity::kWarning, "non-adjustable-slack",
                   "variable '" + v.name + "' acts as a slack of uncertain equality '" +
                       c.name + "' but is not adjustable",
                   "/variables/" + std::to_string(j), {where}});
  }
  return out;
}

// Structural errors plus the pitfall findings of Lint.
inline std::vector<Diagnostic> Validate(const UncertainLP& m) {
  std::vector<Diagnostic> out;
  auto err = [&](std::string code, std::string msg, std::string ptr) {
    out.push_back({Severity::kError, std::move(code), std::move(msg), std::move(ptr), {}});
  };
  const int n = m.num_variables();
  std::set<std::string> names;
  for (int j = 0; j < n; ++j) {
    const ModelVariable& v = m.variables[j];
    const std::string ptr = "/variables/" + std::to_string(j);
    if (!names.insert(v.name).second) err("duplicate-name", "variable name '" + v.name + "' repeats", ptr + "/name");
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInfinity || v.upper == -kInfinity) {
      err("bounds", "variable '" + v.name + "' has lb > ub or invalid bounds", ptr + "/lb");
    }
    if (v.adjustable) {
      const AdjustableRule& r = *v.adjustable;
      const UncertaintySet* s = nullptr;
      if (!r.set.empty()) {
        auto it = m.sets.find(r.set);
        if (it == m.sets.end()) {
          err("unknown-set", "adjustable rule of '" + v.name + "' names unknown set '" + r.set + "'",
              ptr + "/adjustable/set");
        } else {
          s = &it->second;
        }
      }
      for (std::size_t k = 0; k < r.set_indices.size(); ++k) {
        const int idx = r.set_indices[k];
        if (idx < 0 || (s && idx >= s->dim)) {
          err("dimension", "adjustable rule of '" + v.name + "' references zeta index " +
                               std::to_string(idx) + " outside its set",
              ptr + "/adjustable/set_indices/" + std::to_string(k));
        }
      }
      for (std::size_t row = 0; row < r.info_base.size(); ++row) {
        const std::size_t want = r.set_indices.empty() && s ? s->dim : r.set_indices.size();
        if (!r.set_indices.empty() || s) {
          if (r.info_base[row].size() != want) {
            err("dimension", "info_base row " + std::to_string(row) + " of '" + v.name +
                                 "' has " + std::to_string(r.info_base[row].size()) +
                                 " columns, expected " + std::to_string(want),
                ptr + "/adjustable/info_base/" + std::to_string(row));
          }
        }
      }
    }
  }
  auto check_var = [&](int var, const std::string& ptr) {
    if (var < 0 || var >= n) {
      err("dangling-variable", "reference to undeclared variable " + std::to_string(var), ptr);
      return false;
    }
    return true;
  };
  for (const auto& [name, s] : m.sets) {
    const std::string ptr = "/sets/" + internal::EscapePointer(name);
    if (s.kind == SetKind::kPolyhedral && !s.sliced() && !IsBounded(s)) {
      out.push_back({Severity::kWarning, "unbounded-set",
                     "polyhedral set '" + name + "' is unbounded", ptr, {}});
    }
  }
  for (int i = 0; i < static_cast<int>(m.constraints.size()); ++i) {
    const UncertainConstraint& c = m.constraints[i];
    const std::string ptr = internal::ConstraintPointer(i);
    if (!std::isfinite(c.rhs)) err("non-finite", "constraint rhs is not finite", ptr + "/rhs");
    for (const auto& [v, coef] : c.a) {
      if (!check_var(v, ptr + "/a")) continue;
      if (!std::isfinite(coef)) err("non-finite", "coefficient is not finite", ptr + "/a/" + internal::EscapePointer(m.variables[v].name));
    }
    const UncertaintySet* s = m.SetOf(c);
    if (!c.set.empty() && !s) {
      err("unknown-set", "constraint '" + c.name + "' names unknown set '" + c.set + "'", ptr + "/set");
    }
    const bool uncertain = c.IsUncertain();
    if (uncertain && c.set.empty()) {
      err("missing-set", "constraint '" + c.name + "' has uncertain terms but no set", ptr + "/set");
    }
    for (const auto& [v, row] : c.p) {
      if (!check_var(v, ptr + "/P")) continue;
      for (const auto& [k, coef] : row) {
        const std::string zptr = ptr + "/P/" + internal::EscapePointer(m.variables[v].name) + "/" + std::to_string(k);
        if (!std::isfinite(coef)) err("non-finite", "factor coefficient is not finite", zptr);
        if (s && (k < 0 || k >= s->dim)) {
          err("dimension", "constraint '" + c.name + "' references zeta_" + std::to_string(k) +
                               " but set '" + c.set + "' has dimension " + std::to_string(s->dim),
              zptr);
        }
      }
    }
    for (const auto& [k, coef] : c.rhs_factor) {
      if (s && (k < 0 || k >= s->dim)) {
        err("dimension", "rhs factor references zeta_" + std::to_string(k) + " outside set '" + c.set + "'",
            ptr + "/rhs_P/" + std::to_string(k));
      }
    }
  }
  for (const auto& [v, coef] : m.objective.c) check_var(v, "/objective/c");
  if (m.objective.IsUncertain()) {
    out.push_back({Severity::kWarning, "uncertain-objective",
                   "objective has uncertain coefficients; apply the epigraph transform",
                   "/objective/C", {}});
  }
  for (std::size_t s = 0; s < m.stages.size(); ++s) {
    for (int v : m.stages[s].decisions) check_var(v, "/stages/" + std::to_string(s) + "/decisions");
  }
  std::vector<Diagnostic> lint = Lint(m);
  out.insert(out.end(), lint.begin(), lint.end());
  return out;
}

inline bool HasErrors(const std::vector<Diagnostic>& d) {
  for (const Diagnostic& x : d) {
    if (x.severity == Severity::kError) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Max / absolute-value expansion.

// a^T x + x^T P zeta + constant + zeta_coef^T zeta.
struct AffineForm {
  std::map<int, double> a;
  FactorMap p;
  double constant = 0.0;
  std::map<int, double> zeta;

  AffineForm& operator+=(const AffineForm& o) {
    for (const auto& [v, c] : o.a) a[v] += c;
    for (const auto& [v, row] : o.p) {
      for (const auto& [k, c] : row) p[v][k] += c;
    }
    constant += o.constant;
    for (const auto& [k, c] : o.zeta) zeta[k] += c;
    return *this;
  }
};

// base + sum_i max_k branches[i][k] <= rhs for all zeta in set.
struct MaxConstraint {
  std::string name;
  AffineForm base;
  std::vector<std::vector<AffineForm>> max_terms;
  double rhs = 0.0;
  std::string set;
};

inline constexpr int kMaxExpansionCap = 4096;

// Appends the exact expansion: one constraint per combination of branches.
inline UncertainLP ExpandMax(const UncertainLP& m, const MaxConstraint& mc,
                             int cap = kMaxExpansionCap) {
  double count = 1.0;
  for (const auto& term : mc.max_terms) {
    if (term.empty()) throw Error("max term without branches");
    count *= static_cast<double>(term.size());
  }
  if (count > cap) {
    throw Error("max expansion would create " + std::to_string(static_cast<long long>(count)) +
                " constraints (cap " + std::to_string(cap) +
                "); use the conservative epigraph split instead");
  }
  UncertainLP out = m;
  std::vector<std::size_t> pick(mc.max_terms.size(), 0);
  int serial = 0;
  while (true) {
    AffineForm f = mc.base;
    for (std::size_t i = 0; i < pick.size(); ++i) f += mc.max_terms[i][pick[i]];
    UncertainConstraint c;
    c.name = mc.name + "#" + std::to_string(serial++);
    for (const auto& [v, coef] : f.a) {
      if (coef != 0.0) c.a[v] = coef;
    }
    for (const auto& [v, row] : f.p) {
      for (const auto& [k, coef] : row) {
        if (coef != 0.0) c.p[v][k] = coef;
      }
    }
    for (const auto& [k, coef] : f.zeta) {
      if (coef != 0.0) c.rhs_factor[k] = -coef;
    }
    c.sense = RowSense::kLessEqual;
    c.rhs = mc.rhs - f.constant;
    c.set = c.IsUncertain() ? mc.set : "";
    out.constraints.push_back(std::move(c));
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < mc.max_terms[i].size()) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Product linearization.

// x*y for binaries x, y; y < 0 denotes the constant 1.
struct BinaryProduct {
  int x = -1;
  int y = -1;
  std::string name;
};

// Adds z with the rows z <= x, z <= y, z >= x + y - 1, z >= 0 and returns its index
// through *z. A product with the constant 1 returns x itself.
inline UncertainLP LinearizeBinaryProduct(const UncertainLP& m, const BinaryProduct& bp,
                                          int* z) {
  if (bp.y < 0) {
    *z = bp.x;
    return m;
  }
  for (int v : {bp.x, bp.y}) {
    const ModelVariable& var = m.variables.at(v);
    if (!var.integer || var.lower < 0.0 || var.upper > 1.0) {
      throw Error("variable '" + var.name + "' is not binary");
    }
  }
  UncertainLP out = m;
  const std::string name = bp.name.empty()
                               ? m.variables[bp.x].name + "*" + m.variables[bp.y].name
                               : bp.name;
  *z = out.AddVariable(name, -kInfinity, kInfinity, false);
  auto row = [&](std::map<int, double> a, RowSense s, double rhs, const char* tag) {
    UncertainConstraint c;
    c.name = name + tag;
    c.a = std::move(a);
    c.sense = s;
    c.rhs = rhs;
    out.constraints.push_back(std::move(c));
  };
  row({{*z, 1.0}, {bp.x, -1.0}}, RowSense::kLessEqual, 0.0, "#le_x");
  row({{*z, 1.0}, {bp.y, -1.0}}, RowSense::kLessEqual, 0.0, "#le_y");
  row({{*z, 1.0}, {bp.x, -1.0}, {bp.y, -1.0}}, RowSense::kGreaterEqual, -1.0, "#ge_sum");
  row({{*z, 1.0}}, RowSense::kGreaterEqual, 0.0, "#ge_zero");
  return out;
}

// a(zeta)^T x + z b(zeta)^T x <= d(zeta) with binary z: emits the two big-M
// constraints that keep the uncertainty together.
struct BinaryTimesForm {
  std::string name;
  AffineForm a;  // includes -d via constant/zeta terms moved to the left
  AffineForm b;
  int z = -1;
  double rhs = 0.0;
  std::string set;
};

inline UncertainLP LinearizeBinaryTimesForm(const UncertainLP& m, const BinaryTimesForm& f,
                                            std::optional<double> big_m) {
  if (!big_m) throw Error("big-M constant required for a binary-times-continuous product");
  const ModelVariable& zv = m.variables.at(f.z);
  if (!zv.integer || zv.lower < 0.0 || zv.upper > 1.0) throw Error("z must be binary");
  UncertainLP out = m;
  auto emit = [&](AffineForm g, double rhs, const std::string& tag) {
    UncertainConstraint c;
    c.name = f.name + tag;
    for (const auto& [v, coef] : g.a) {
      if (coef != 0.0) c.a[v] = coef;
    }
    for (const auto& [v, row] : g.p) {
      for (const auto& [k, coef] : row) {
        if (coef != 0.0) c.p[v][k] = coef;
      }
    }
    for (const auto& [k, coef] : g.zeta) {
      if (coef != 0.0) c.rhs_factor[k] = -coef;
    }
    c.rhs = rhs - g.constant;
    c.set = c.IsUncertain() ? f.set : "";
    out.constraints.push_back(std::move(c));
  };
  // a + b <= d + M (1 - z)  <=>  a + b + M z <= d + M.
  AffineForm on = f.a;
  on += f.b;
  on.a[f.z] += *big_m;
  emit(on, f.rhs + *big_m, "#on");
  // a <= d + M z.
  AffineForm off = f.a;
  off.a[f.z] -= *big_m;
  emit(off, f.rhs, "#off");
  return out;
}

// At least k of the listed <= constraints must hold (each for all zeta):
// a_i(zeta)^T x <= d_i(zeta) + M (1 - z_i), sum z_i >= k.
inline UncertainLP LinearizeKOutOfN(const UncertainLP& m, const std::vector<int>& rows, int k,
                                    std::optional<double> big_m, const std::string& prefix) {
  if (!big_m) throw Error("big-M constant required for a K-out-of-N restriction");
  if (k < 0 || k > static_cast<int>(rows.size())) throw Error("K must lie in [0, N]");
  UncertainLP out = m;
  UncertainConstraint sum;
  sum.name = prefix + "#count";
  sum.sense = RowSense::kGreaterEqual;
  sum.rhs = k;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    UncertainConstraint& c = out.constraints.at(rows[t]);
    if (c.sense != RowSense::kLessEqual) throw Error("K-out-of-N rows must be <= constraints");
    const int z = out.AddVariable(prefix + "#z" + std::to_string(t), 0.0, 1.0, true);
    UncertainConstraint& cc = out.constraints.at(rows[t]);
    cc.a[z] += *big_m;
    cc.rhs += *big_m;
    sum.a[z] = 1.0;
  }
  out.constraints.push_back(std::move(sum));
  return out;
}

// ---------------------------------------------------------------------------
// Uncertain-equality elimination.

// Substitutes `var` from equality `eq` into every other constraint and the
// objective. Fails when the result would not be affine in zeta.
inline UncertainLP EliminateEquality(const UncertainLP& m, int eq, int var) {
  const UncertainConstraint& e = m.constraints.at(eq);
  if (e.sense != RowSense::kEqual) throw Error("constraint '" + e.name + "' is not an equality");
  auto pit = e.p.find(var);
  if (pit != e.p.end()) {
    for (const auto& [k, c] : pit->second) {
      if (c != 0.0) {
        throw Error("eliminating '" + m.variables[var].name +
                    "' divides by an uncertain coefficient (rational dependence on zeta_" +
                    std::to_string(k) + ")");
      }
    }
  }
  auto ait = e.a.find(var);
  if (ait == e.a.end() || ait->second == 0.0) {
    throw Error("variable '" + m.variables[var].name + "' does not appear in '" + e.name + "'");
  }
  const double piv = ait->second;
  // var = (rhs + r^T zeta - sum_{i != var} (a_i + P_i zeta) x_i) / piv.
  AffineForm sub;
  sub.constant = e.rhs / piv;
  for (const auto& [k, c] : e.rhs_factor) sub.zeta[k] = c / piv;
  for (const auto& [v, c] : e.a) {
    if (v != var) sub.a[v] = -c / piv;
  }
  for (const auto& [v, row] : e.p) {
    if (v == var) continue;
    for (const auto& [k, c] : row) sub.p[v][k] = -c / piv;
  }
  const bool sub_uncertain = !sub.p.empty() || !sub.zeta.empty();
  UncertainLP out;
  out.variables = m.variables;
  out.sets = m.sets;
  out.stages = m.stages;
  out.objective = m.objective;
  for (int i = 0; i < static_cast<int>(m.constraints.size()); ++i) {
    if (i == eq) continue;
    UncertainConstraint c = m.constraints[i];
    double coef = 0.0;
    auto it = c.a.find(var);
    if (it != c.a.end()) {
      coef = it->second;
      c.a.erase(it);
    }
    auto cp = c.p.find(var);
    if (cp != c.p.end()) {
      bool nz = false;
      for (const auto& [k, v] : cp->second) nz |= v != 0.0;
      if (nz && sub_uncertain) {
        throw Error("eliminating '" + m.variables[var].name + "' makes constraint '" + c.name +
                    "' bilinear in zeta");
      }
      if (nz) {
        // Uncertain coefficient times a certain substitution stays affine.
        for (const auto& [k, v] : cp->second) {
          for (const auto& [w, sc] : sub.a) c.p[w][k] += v * sc;
          c.rhs_factor[k] -= v * sub.constant;
        }
      }
      c.p.erase(var);
    }
    if (coef != 0.0) {
      for (const auto& [w, sc] : sub.a) c.a[w] += coef * sc;
      for (const auto& [w, row] : sub.p) {
        for (const auto& [k, sc] : row) c.p[w][k] += coef * sc;
      }
      c.rhs -= coef * sub.constant;
      for (const auto& [k, sc] : sub.zeta) c.rhs_factor[k] -= coef * sc;
      if (sub_uncertain) {
        if (!c.set.empty() && c.set != e.set) {
          throw Error("constraint '" + c.name + "' uses a different uncertainty set than '" + e.name + "'");
        }
        c.set = e.set;
      }
    }
    for (auto a_it = c.a.begin(); a_it != c.a.end();) {
      a_it = a_it->second == 0.0 ? c.a.erase(a_it) : std::next(a_it);
    }
    out.constraints.push_back(std::move(c));
  }
  auto oc = out.objective.c.find(var);
  if (oc != out.objective.c.end()) {
    const double coef = oc->second;
    out.objective.c.erase(oc);
    if (sub_uncertain) {
      throw Error("eliminating '" + m.variables[var].name + "' makes the objective uncertain");
    }
    for (const auto& [w, sc] : sub.a) out.objective.c[w] += coef * sc;
    out.objective.constant += coef * sub.constant;
  }
  // Finite bounds of the eliminated variable become constraints.
  const ModelVariable& v = m.variables[var];
  for (int side = 0; side < 2; ++side) {
    const double b = side == 0 ? v.lower : v.upper;
    if (!std::isfinite(b)) continue;
    UncertainConstraint c;
    c.name = v.name + (side == 0 ? "#lb" : "#ub");
    for (const auto& [w, sc] : sub.a) c.a[w] = sc;
    for (const auto& [w, row] : sub.p) {
      for (const auto& [k, sc] : row) c.p[w][k] = sc;
    }
    for (const auto& [k, sc] : sub.zeta) c.rhs_factor[k] = -sc;
    c.rhs = b - sub.constant;
    c.sense = side == 0 ? RowSense::kGreaterEqual : RowSense::kLessEqual;
    c.set = c.IsUncertain() ? e.set : "";
    out.constraints.push_back(std::move(c));
  }
  // The variable stays declared (free, unused) so indices remain stable.
  out.variables[var].lower = -kInfinity;
  out.variables[var].upper = kInfinity;
  out.variables[var].adjustable.reset();
  return out;
}

// ---------------------------------------------------------------------------
// Objective epigraph.

// Moves an uncertain objective into a constraint c(zeta)^T x - t <= 0 (>= for
// maximization) and optimizes t.
inline UncertainLP EpigraphObjective(const UncertainLP& m, const std::string& t_name = "t") {
  UncertainLP out = m;
  const int t = out.AddVariable(t_name, -kInfinity, kInfinity);
  UncertainConstraint c;
  c.name = "objective#epigraph";
  c.a = m.objective.c;
  c.a[t] -= 1.0;
  c.p = m.objective.factor;
  c.rhs = -m.objective.constant;
  c.sense = m.objective.sense == ObjectiveSense::kMinimize ? RowSense::kLessEqual
                                                           : RowSense::kGreaterEqual;
  c.set = m.objective.IsUncertain() ? m.objective.set : "";
  out.constraints.push_back(std::move(c));
  out.objective.c.clear();
  out.objective.c[t] = 1.0;
  out.objective.constant = 0.0;
  out.objective.factor.clear();
  out.objective.set.clear();
  return out;
}

}  // namespace robopt

#endif  // ROBOPT_MODEL_HPP_

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

// Scenario generation: solve a master problem over finite scenario pools,
// add the worst scenario of every violated constraint, repeat.

#ifndef ROBOPT_ADVERSARIAL_HPP_
#define ROBOPT_ADVERSARIAL_HPP_

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "robopt/model.hpp"
#include "robopt/reformulate.hpp"
#include "robopt/solver_core.hpp"
#include "robopt/uncertainty.hpp"

namespace robopt {

struct PessimizationResult {
  Vector zeta;
  // Worst (lhs - rhs) for <=, (rhs - lhs) for >=, |lhs - rhs| for =.
  double violation = 0.0;
};

// Worst-case scenario of one constraint at x.
inline PessimizationResult Pessimize(const UncertainConstraint& c, const UncertaintySet* s,
                                     const Vector& x) {
  PessimizationResult out;
  const double base = c.NominalActivity(x) - c.rhs;
  if (!c.IsUncertain() || !s) {
    if (s) out.zeta = NominalPoint(*s);
    switch (c.sense) {
      case RowSense::kLessEqual:
        out.violation = base;
        break;
      case RowSense::kGreaterEqual:
        out.violation = -base;
        break;
      case RowSense::kEqual:
        out.violation = std::fabs(base);
        break;
    }
    return out;
  }
  const Vector g = c.UncertainCoefficients(x, s->dim);
  double best = -kInfinity;
  if (c.sense != RowSense::kGreaterEqual) {
    const SupportResult r = Support(*s, g);
    if (!std::isfinite(r.value)) throw Error("unbounded inner problem for '" + c.name + "'");
    best = base + r.value;
    out.zeta = r.argmax;
  }
  if (c.sense != RowSense::kLessEqual) {
    Vector ng(g);
    for (double& v : ng) v = -v;
    const SupportResult r = Support(*s, ng);
    if (!std::isfinite(r.value)) throw Error("unbounded inner problem for '" + c.name + "'");
    if (-base + r.value > best) {
      best = -base + r.value;
      out.zeta = r.argmax;
    }
  }
  out.violation = best;
  return out;
}

struct AdversarialLogEntry {
  int round = 0;
  int constraint = -1;
  double violation = 0.0;
  double objective = 0.0;
};

struct ScenarioPool {
  // Per uncertain constraint index.
  std::map<int, std::vector<Vector>> scenarios;
  std::vector<AdversarialLogEntry> log;
};

struct AdversarialOptions {
  double tol = 1e-6;
  int max_rounds = 200;
  // Temporary bound on variables without finite bounds while the master is
  // unbounded.
  double artificial_bound = 1e6;
  SolverOptions solver;
  // Optional JSON-lines iteration log.
  std::ostream* log = nullptr;
};

struct AdversarialResult {
  SolveResult result;
  ScenarioPool pool;
  int rounds = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

namespace internal {

inline void AddScenarioRow(DeterministicMILP* p, const UncertainConstraint& c, const Vector& z) {
  std::map<int, double> a = c.a;
  double rhs = c.rhs;
  for (const auto& [v, row] : c.p) {
    for (const auto& [k, coef] : row) a[v] += coef * z[k];
  }
  for (const auto& [k, coef] : c.rhs_factor) rhs += coef * z[k];
  p->AddRow(ToExpr(a), c.sense, rhs, c.name);
}

inline void WriteLogLine(std::ostream& os, const AdversarialLogEntry& e,
                         const std::string& name) {
  std::ostringstream s;
  s.precision(17);
  s << "{\"round\":" << e.round << ",\"constraint\":\"" << name
    << "\",\"violation\":" << e.violation << ",\"objective\":" << e.objective << "}\n";
  os << s.str();
}

}  // namespace internal

// Cutting-plane solution of the robust counterpart for any supported set.
inline AdversarialResult SolveAdversarial(const UncertainLP& m,
                                          const AdversarialOptions& opt = {}) {
  if (m.objective.IsUncertain()) throw Error("objective is uncertain; apply EpigraphObjective first");
  for (const ModelVariable& v : m.variables) {
    if (v.adjustable) throw Error("variable '" + v.name + "' is adjustable; expand decision rules first");
  }
  AdversarialResult out;
  const int nc = static_cast<int>(m.constraints.size());
  for (int i = 0; i < nc; ++i) {
    const UncertainConstraint& c = m.constraints[i];
    if (!c.IsUncertain()) continue;
    const UncertaintySet* s = m.SetOf(c);
    if (!s) throw Error("constraint '" + c.name + "' has no uncertainty set");
    if (c.sense == RowSense::kEqual && !c.allow_uncertain_equality) {
      throw Error("constraint '" + c.name + "' is an uncertain equality; set the override flag");
    }
    out.pool.scenarios[i].push_back(NominalPoint(*s));
  }
  bool artificial = false;
  double last_objective = 0.0;
  for (int round = 1; round <= opt.max_rounds; ++round) {
    DeterministicMILP p;
    for (const ModelVariable& v : m.variables) {
      double lo = v.lower, hi = v.upper;
      if (artificial) {
        lo = std::max(lo, -opt.artificial_bound);
        hi = std::min(hi, opt.artificial_bound);
      }
      p.AddVariable(v.name, lo, hi, v.integer);
    }
    p.sense = m.objective.sense;
    for (const auto& [v, c] : m.objective.c) p.objective[v] += c;
    p.objective_constant = m.objective.constant;
    for (int i = 0; i < nc; ++i) {
      const UncertainConstraint& c = m.constraints[i];
      if (!c.IsUncertain()) {
        p.AddRow(internal::ToExpr(c.a), c.sense, c.rhs, c.name);
        continue;
      }
      for (const Vector& z : out.pool.scenarios[i]) internal::AddScenarioRow(&p, c, z);
    }
    SolveResult r = SolveDeterministic(p, opt.solver);
    out.rounds = round;
    if (r.status == SolveStatus::kUnbounded && !artificial) {
      artificial = true;
      --round;
      continue;
    }
    if (r.status != SolveStatus::kOptimal) {
      out.result = r;
      return out;
    }
    last_objective = r.objective;
    out.objective_trace.push_back(r.objective);
    int added = 0;
    for (int i = 0; i < nc; ++i) {
      const UncertainConstraint& c = m.constraints[i];
      if (!c.IsUncertain()) continue;
      const PessimizationResult pr = Pessimize(c, m.SetOf(c), r.values);
      AdversarialLogEntry e{round, i, pr.violation, r.objective};
      out.pool.log.push_back(e);
      if (opt.log) internal::WriteLogLine(*opt.log, e, c.name);
      if (pr.violation > opt.tol) {
        out.pool.scenarios[i].push_back(pr.zeta);
        ++added;
      }
    }
    out.result = r;
    if (added == 0) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) {
    out.result.status = SolveStatus::kIterationLimit;
    out.result.objective = last_objective;
    return out;
  }
  if (artificial) {
    for (int j = 0; j < m.num_variables(); ++j) {
      const double v = out.result.values[j];
      const bool hit = (!std::isfinite(m.variables[j].upper) &&
                        v >= opt.artificial_bound - 1e-6) ||
                       (!std::isfinite(m.variables[j].lower) &&
                        v <= -opt.artificial_bound + 1e-6);
      if (hit) {
        out.result.status = SolveStatus::kUnbounded;
        break;
      }
    }
  }
  return out;
}

// Largest pessimized violation over all constraints at x.
inline double MaxRobustViolation(const UncertainLP& m, const Vector& x) {
  double worst = -kInfinity;
  for (const UncertainConstraint& c : m.constraints) {
    worst = std::max(worst, Pessimize(c, m.SetOf(c), x).violation);
  }
  return worst;
}

}  // namespace robopt

#endif  // ROBOPT_ADVERSARIAL_HPP_

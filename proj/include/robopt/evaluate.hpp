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

// Monte-Carlo assessment of solutions: samplers, per-draw evaluation on the
// original model, perfect hindsight, folding horizon, price metrics and
// paired statistical tests.

#ifndef ROBOPT_EVALUATE_HPP_
#define ROBOPT_EVALUATE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "robopt/adjustable_integer.hpp"
#include "robopt/model.hpp"
#include "robopt/reformulate.hpp"
#include "robopt/solver_core.hpp"
#include "robopt/uncertainty.hpp"

namespace robopt {

// ---------------------------------------------------------------------------
// Sampling.

enum class SampleMode { kInterior, kBoundary };

inline const char* ToString(SampleMode m) {
  return m == SampleMode::kInterior ? "interior" : "boundary";
}

struct SamplerOptions {
  int burn_in = 1000;
  int thinning = 10;
};

struct SampleBatch {
  std::uint64_t seed = 0;
  SampleMode mode = SampleMode::kInterior;
  // Generating method: uniform-box, uniform-ball, ball-surface, box-surface,
  // hit-and-run or dirichlet-hull.
  std::string sampler;
  std::vector<Vector> draws;
};

namespace internal {

// Independent stream for draw `index` of a run seeded with `seed`.
inline std::mt19937_64 DrawRng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline Vector GaussianDirection(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Vector u(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : u) {
      v = nd(rng);
      norm += v * v;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& v : u) v /= norm;
  return u;
}

// Feasible step interval [lo, hi] from z along u.
struct Chord {
  double lo = -kInfinity;
  double hi = kInfinity;
};

inline void ClipPolyhedral(const Matrix& d, const Vector& q, const Vector& z, const Vector& u,
                           Chord* c) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double s = Dot(d[i], z) + q[i];
    const double a = Dot(d[i], u);
    if (a > 1e-14) {
      c->lo = std::max(c->lo, -s / a);
    } else if (a < -1e-14) {
      c->hi = std::min(c->hi, -s / a);
    }
  }
}

inline void ClipBall(const Vector& center, double omega, const Vector& z, const Vector& u,
                     Chord* c) {
  double b = 0.0;
  double cc = -omega * omega;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double w = z[k] - center[k];
    b += u[k] * w;
    cc += w * w;
  }
  const double disc = std::max(0.0, b * b - cc);
  c->lo = std::max(c->lo, -b - std::sqrt(disc));
  c->hi = std::min(c->hi, -b + std::sqrt(disc));
}

// Hit-and-run chain over a set given by polyhedral rows and an optional ball.
inline std::vector<Vector> HitAndRun(const Matrix& d, const Vector& q, const Vector* center,
                                     double omega, Vector start, int n, std::uint64_t seed,
                                     const SamplerOptions& opt) {
  std::mt19937_64 rng = DrawRng(seed, ~std::uint64_t{0});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int dim = static_cast<int>(start.size());
  std::vector<Vector> out;
  Vector z = std::move(start);
  const long total = static_cast<long>(opt.burn_in) + static_cast<long>(n) * opt.thinning;
  for (long step = 1; step <= total; ++step) {
    const Vector u = GaussianDirection(rng, dim);
    Chord c;
    ClipPolyhedral(d, q, z, u, &c);
    if (center) ClipBall(*center, omega, z, u, &c);
    if (!std::isfinite(c.lo) || !std::isfinite(c.hi)) {
      throw Error("hit-and-run needs a bounded set");
    }
    if (c.hi > c.lo) {
      const double t = c.lo + (c.hi - c.lo) * unit(rng);
      for (int k = 0; k < dim; ++k) z[k] += t * u[k];
    }
    if (step > opt.burn_in && (step - opt.burn_in) % opt.thinning == 0) out.push_back(z);
  }
  return out;
}

inline std::vector<Vector> SampleUnsliced(const UncertaintySet& s, int n, std::uint64_t seed,
                                          SampleMode mode, const SamplerOptions& opt,
                                          std::string* sampler) {
  const int dim = s.dim;
  std::vector<Vector> out;
  if (mode == SampleMode::kBoundary && s.kind != SetKind::kBox && s.kind != SetKind::kBall) {
    throw Error(std::string("boundary sampling is not available for ") + ToString(s.kind) +
                " sets");
  }
  switch (s.kind) {
    case SetKind::kBox: {
      *sampler = mode == SampleMode::kInterior ? "uniform-box" : "box-surface";
      std::vector<int> wide;
      for (int k = 0; k < dim; ++k) {
        if (s.upper[k] > s.lower[k]) wide.push_back(k);
      }
      for (int i = 0; i < n; ++i) {
        std::mt19937_64 rng = DrawRng(seed, static_cast<std::uint64_t>(i));
        Vector z(dim);
        for (int k = 0; k < dim; ++k) {
          z[k] = std::uniform_real_distribution<double>(s.lower[k], s.upper[k])(rng);
        }
        if (mode == SampleMode::kBoundary && !wide.empty()) {
          const int k = wide[std::uniform_int_distribution<std::size_t>(0, wide.size() - 1)(rng)];
          z[k] = std::bernoulli_distribution(0.5)(rng) ? s.upper[k] : s.lower[k];
        }
        out.push_back(std::move(z));
      }
      return out;
    }
    case SetKind::kBall: {
      *sampler = mode == SampleMode::kInterior ? "uniform-ball" : "ball-surface";
      for (int i = 0; i < n; ++i) {
        std::mt19937_64 rng = DrawRng(seed, static_cast<std::uint64_t>(i));
        const Vector u = GaussianDirection(rng, dim);
        double radius = s.omega;
        if (mode == SampleMode::kInterior) {
          radius *= std::pow(std::uniform_real_distribution<double>(0.0, 1.0)(rng), 1.0 / dim);
        }
        Vector z(dim);
        for (int k = 0; k < dim; ++k) z[k] = s.center[k] + radius * u[k];
        out.push_back(std::move(z));
      }
      return out;
    }
    case SetKind::kScenarioHull: {
      *sampler = "dirichlet-hull";
      for (int i = 0; i < n; ++i) {
        std::mt19937_64 rng = DrawRng(seed, static_cast<std::uint64_t>(i));
        std::exponential_distribution<double> ex(1.0);
        Vector w(s.points.size());
        double total = 0.0;
        for (double& v : w) {
          v = ex(rng);
          total += v;
        }
        Vector z(dim, 0.0);
        for (std::size_t p = 0; p < s.points.size(); ++p) {
          for (int k = 0; k < dim; ++k) z[k] += w[p] / total * s.points[p][k];
        }
        out.push_back(std::move(z));
      }
      return out;
    }
    case SetKind::kBallBox: {
      *sampler = "hit-and-run";
      Matrix d;
      Vector q;
      for (int k = 0; k < dim; ++k) {
        Vector e(dim, 0.0);
        e[k] = -1.0;
        d.push_back(e);
        q.push_back(1.0);
        e[k] = 1.0;
        d.push_back(e);
        q.push_back(1.0);
      }
      const Vector origin(dim, 0.0);
      return HitAndRun(d, q, &origin, s.omega, origin, n, seed, opt);
    }
    case SetKind::kPolyhedral:
    case SetKind::kBudgeted:
    case SetKind::kClt: {
      *sampler = "hit-and-run";
      const auto [d, q] = PolyhedralForm(s);
      Vector start;
      if (!ChebyshevCenter(d, q, dim, &start)) throw Error("cannot sample an empty set");
      return HitAndRun(d, q, nullptr, 0.0, start, n, seed, opt);
    }
  }
  throw Error("unsupported set kind for sampling");
}

}  // namespace internal

inline SampleBatch Sample(const UncertaintySet& s, int n, std::uint64_t seed,
                          SampleMode mode = SampleMode::kInterior,
                          const SamplerOptions& opt = {}) {
  if (n < 1) throw Error("sample count must be positive");
  if (opt.burn_in < 0 || opt.thinning < 1) throw Error("invalid hit-and-run options");
  SampleBatch b;
  b.seed = seed;
  b.mode = mode;
  if (s.sliced()) {
    const std::vector<Vector> free =
        internal::SampleUnsliced(*s.free_set, n, seed, mode, opt, &b.sampler);
    const std::vector<int> idx = internal::FreeIndices(s);
    for (const Vector& f : free) {
      Vector z(s.dim, 0.0);
      for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = f[k];
      for (std::size_t k = 0; k < s.pinned.size(); ++k) z[s.pinned[k]] = s.pinned_value[k];
      b.draws.push_back(std::move(z));
    }
  } else {
    b.draws = internal::SampleUnsliced(s, n, seed, mode, opt, &b.sampler);
  }
  for (const Vector& z : b.draws) {
    if (!Contains(s, z, 1e-9)) throw Error("sampler produced a point outside the set");
  }
  return b;
}

// ---------------------------------------------------------------------------
// Policies.

// Full decision vector of the original model for a realized zeta.
using DecisionFn = std::function<Vector(const Vector& zeta)>;

enum class PolicyKind { kNominal, kRc, kAarc, kArcSplit };

inline const char* ToString(PolicyKind k) {
  switch (k) {
    case PolicyKind::kNominal:
      return "nominal";
    case PolicyKind::kRc:
      return "rc";
    case PolicyKind::kAarc:
      return "aarc";
    case PolicyKind::kArcSplit:
      return "arc-split";
  }
  return "?";
}

struct PolicyOptions {
  PolicyKind kind = PolicyKind::kRc;
  std::optional<SplitScheme> split;
  SolverOptions solver;
};

struct PolicySolution {
  SolveStatus status = SolveStatus::kOptimal;
  // Optimal value of the solved model: nominal for the nominal policy,
  // worst case otherwise.
  double objective = 0.0;
  // Static part of the decision (rules evaluated at the nominal point).
  Vector x;
  DecisionFn decide;
};

namespace internal {

inline UncertainLP Static(const UncertainLP& m) {
  UncertainLP out = m;
  for (ModelVariable& v : out.variables) v.adjustable.reset();
  return out;
}

inline Vector ZetaOf(const UncertainLP& m, const std::string& set) {
  return NominalPoint(m.sets.at(set));
}

}  // namespace internal

// Solves m under a policy. `set` names the set whose zeta drives the
// decisions.
inline PolicySolution SolvePolicy(const UncertainLP& m, const std::string& set,
                                  const PolicyOptions& opt) {
  PolicySolution out;
  const int n = m.num_variables();
  switch (opt.kind) {
    case PolicyKind::kNominal: {
      const SolveResult r = SolveDeterministic(Instantiate(internal::Static(m)), opt.solver);
      out.status = r.status;
      if (r.status != SolveStatus::kOptimal) return out;
      out.objective = r.objective;
      out.x = r.values;
      const Vector x = r.values;
      out.decide = [x](const Vector&) { return x; };
      return out;
    }
    case PolicyKind::kRc: {
      UncertainLP s = internal::Static(m);
      if (s.objective.IsUncertain()) s = EpigraphObjective(s, "policy#t");
      const SolveResult r = internal::SolveRobust(s, opt.solver);
      out.status = r.status;
      if (r.status != SolveStatus::kOptimal) return out;
      out.objective = r.objective;
      const Vector x(r.values.begin(), r.values.begin() + n);
      out.x = x;
      out.decide = [x](const Vector&) { return x; };
      return out;
    }
    case PolicyKind::kAarc: {
      UncertainLP base = m;
      if (base.objective.IsUncertain()) base = EpigraphObjective(base, "policy#t");
      auto e = std::make_shared<AarcExpansion>(ExpandAarc(base));
      const SolveResult r = internal::SolveRobust(e->model, opt.solver);
      out.status = r.status;
      if (r.status != SolveStatus::kOptimal) return out;
      out.objective = r.objective;
      const Vector values = r.values;
      out.decide = [e, values, n](const Vector& zeta) {
        return EvaluateRules(*e, n, values, zeta);
      };
      out.x = out.decide(internal::ZetaOf(m, set));
      return out;
    }
    case PolicyKind::kArcSplit: {
      if (!opt.split) throw Error("split policy needs a split scheme");
      ArcOptions aopt;
      aopt.solver = opt.solver;
      const ArcSolution a = SolveArc(m, *opt.split, aopt);
      out.status = a.status;
      if (a.status != SolveStatus::kOptimal) return out;
      out.objective = a.t_star;
      const SplitScheme scheme = *opt.split;
      const std::vector<Vector> cells = a.recourse;
      out.decide = [scheme, cells](const Vector& zeta) {
        const int i = scheme.Locate(zeta);
        return cells[i < 0 ? 0 : i];
      };
      out.x = out.decide(internal::ZetaOf(m, set));
      return out;
    }
  }
  throw Error("unknown policy");
}

// ---------------------------------------------------------------------------
// Evaluation on the original model.

struct ConstraintStats {
  std::string name;
  // Residuals of equality rows are reported as |lhs - rhs|.
  bool equality = false;
  double violation_probability = 0.0;
  // Statistics of the positive violations only.
  double mean_violation = 0.0;
  double worst_violation = 0.0;
  double std_violation = 0.0;
};

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;
  double worst = 0.0;
  double best = 0.0;
};

struct SimulationReport {
  int draws = 0;
  std::vector<ConstraintStats> constraints;
  double mean_violated_constraints = 0.0;
  SummaryStats objective;
  std::vector<double> objectives;
  std::vector<int> violated;
};

struct EvaluationOptions {
  // Positive residuals up to this size do not count as violations.
  double tolerance = 1e-7;
  // Variables re-optimized per draw at the realized zeta with every other
  // variable fixed, such as cost-accounting variables.
  std::vector<int> reoptimize;
  SolverOptions solver;
};

namespace internal {

// Sample mean and standard deviation (n - 1 denominator).
inline std::pair<double, double> MeanStd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return {mean, sd};
}

inline std::map<std::string, Vector> ZetaMap(const UncertainLP& m, const std::string& set,
                                             const Vector& zeta) {
  std::map<std::string, Vector> z;
  for (const auto& [name, s] : m.sets) z[name] = name == set ? zeta : NominalPoint(s);
  return z;
}

inline double RealizedObjective(const UncertainLP& m, const std::map<std::string, Vector>& z,
                                const Vector& x) {
  double v = m.ObjectiveValue(x);
  if (m.objective.IsUncertain()) {
    const Vector& oz = z.at(m.objective.set);
    for (const auto& [j, row] : m.objective.factor) {
      for (const auto& [k, c] : row) v += c * x[j] * oz[k];
    }
  }
  return v;
}

// Optimizes `free_vars` at the realized zeta with all other variables fixed
// to x. Returns false when that problem has no optimum.
inline bool Reoptimize(const UncertainLP& m, const std::map<std::string, Vector>& z,
                       const std::vector<int>& free_vars, const SolverOptions& sopt, Vector* x) {
  if (free_vars.empty()) return true;
  DeterministicMILP p = Instantiate(m, z);
  std::vector<char> is_free(m.num_variables(), 0);
  for (int j : free_vars) is_free[j] = 1;
  for (int j = 0; j < m.num_variables(); ++j) {
    if (!is_free[j]) p.variables[j].lower = p.variables[j].upper = (*x)[j];
  }
  const SolveResult r = SolveDeterministic(p, sopt);
  if (r.status != SolveStatus::kOptimal) return false;
  for (int j : free_vars) (*x)[j] = r.values[j];
  return true;
}

inline double Violation(const UncertainConstraint& c, double residual) {
  switch (c.sense) {
    case RowSense::kLessEqual:
      return std::max(0.0, residual);
    case RowSense::kGreaterEqual:
      return std::max(0.0, -residual);
    case RowSense::kEqual:
      return std::fabs(residual);
  }
  return 0.0;
}

}  // namespace internal

// Variables outside every declared stage: accounting variables whose value
// follows from the decisions and the realized zeta.
inline std::vector<int> AnalysisVariables(const UncertainLP& m) {
  if (m.stages.empty()) return {};
  std::vector<char> staged(m.num_variables(), 0);
  for (const Stage& s : m.stages) {
    for (int j : s.decisions) staged[j] = 1;
  }
  std::vector<int> out;
  for (int j = 0; j < m.num_variables(); ++j) {
    if (!staged[j]) out.push_back(j);
  }
  return out;
}

inline SimulationReport EvaluateSolution(const UncertainLP& m, const DecisionFn& decide,
                                         const SampleBatch& batch, const std::string& set,
                                         const EvaluationOptions& opt = {}) {
  SimulationReport rep;
  rep.draws = static_cast<int>(batch.draws.size());
  const int nc = static_cast<int>(m.constraints.size());
  std::vector<std::vector<double>> positive(nc);
  for (const Vector& zeta : batch.draws) {
    const auto z = internal::ZetaMap(m, set, zeta);
    Vector x = decide(zeta);
    internal::Reoptimize(m, z, opt.reoptimize, opt.solver, &x);
    int count = 0;
    for (int i = 0; i < nc; ++i) {
      const UncertainConstraint& c = m.constraints[i];
      const Vector cz = c.set.empty() ? Vector() : z.at(c.set);
      const double res = c.set.empty() ? c.NominalActivity(x) - c.rhs : c.Residual(x, cz);
      const double v = internal::Violation(c, res);
      if (v > opt.tolerance) {
        positive[i].push_back(v);
        ++count;
      }
    }
    rep.violated.push_back(count);
    rep.objectives.push_back(internal::RealizedObjective(m, z, x));
  }
  double total = 0.0;
  for (int c : rep.violated) total += c;
  rep.mean_violated_constraints = rep.draws > 0 ? total / rep.draws : 0.0;
  for (int i = 0; i < nc; ++i) {
    ConstraintStats s;
    s.name = m.constraints[i].name;
    s.equality = m.constraints[i].sense == RowSense::kEqual;
    s.violation_probability =
        rep.draws > 0 ? static_cast<double>(positive[i].size()) / rep.draws : 0.0;
    const auto [mean, sd] = internal::MeanStd(positive[i]);
    s.mean_violation = mean;
    s.std_violation = sd;
    for (double v : positive[i]) s.worst_violation = std::max(s.worst_violation, v);
    rep.constraints.push_back(std::move(s));
  }
  const auto [mean, sd] = internal::MeanStd(rep.objectives);
  rep.objective.mean = mean;
  rep.objective.std = sd;
  const bool maximize = m.objective.sense == ObjectiveSense::kMaximize;
  if (!rep.objectives.empty()) {
    const auto [lo, hi] = std::minmax_element(rep.objectives.begin(), rep.objectives.end());
    rep.objective.worst = maximize ? *lo : *hi;
    rep.objective.best = maximize ? *hi : *lo;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Perfect hindsight and folding horizon.

// Per-draw values; NaN marks an excluded draw.
struct DrawValues {
  std::vector<double> values;
  int excluded = 0;
  // Per-draw decision vectors (empty for excluded draws).
  std::vector<Vector> decisions;
};

inline DrawValues PerfectHindsight(const UncertainLP& m, const SampleBatch& batch,
                                   const std::string& set, const SolverOptions& sopt = {}) {
  DrawValues out;
  for (const Vector& zeta : batch.draws) {
    const SolveResult r = SolveDeterministic(Instantiate(m, internal::ZetaMap(m, set, zeta)), sopt);
    if (r.status == SolveStatus::kOptimal) {
      out.values.push_back(r.objective);
      out.decisions.push_back(r.values);
    } else {
      out.values.push_back(std::numeric_limits<double>::quiet_NaN());
      out.decisions.push_back({});
      ++out.excluded;
    }
  }
  return out;
}

struct FoldingOptions {
  PolicyOptions policy;
  // Variables held at given values instead of the policy's choice.
  std::map<int, double> fixed;
  SolverOptions solver;
};

namespace internal {

inline UncertainLP Conditional(const UncertainLP& m, const std::string& set,
                               const std::vector<int>& pins, const Vector& zeta,
                               const std::map<int, double>& decided) {
  UncertainLP sub = m;
  if (!pins.empty()) {
    Vector vals;
    for (int k : pins) vals.push_back(zeta[k]);
    sub.sets[set] = Slice(m.sets.at(set), pins, vals);
  }
  for (const auto& [j, v] : decided) {
    sub.variables[j].lower = sub.variables[j].upper = v;
    sub.variables[j].adjustable.reset();
  }
  return sub;
}

}  // namespace internal

// Per draw: at each stage pin the observed coordinates, fix earlier
// decisions, re-solve under the policy and keep this stage's decisions;
// accounting variables are then optimized at the realized zeta.
inline DrawValues FoldingHorizon(const UncertainLP& m, const SampleBatch& batch,
                                 const std::string& set, const FoldingOptions& opt) {
  if (m.stages.empty()) throw Error("folding horizon needs declared stages");
  PolicyOptions popt = opt.policy;
  popt.solver = opt.solver;
  const std::vector<int> analysis = AnalysisVariables(m);
  std::optional<PolicySolution> first;
  if (m.stages[0].observed.empty()) {
    first = SolvePolicy(internal::Conditional(m, set, {}, {}, opt.fixed), set, popt);
  }
  DrawValues out;
  for (const Vector& zeta : batch.draws) {
    std::map<int, double> decided = opt.fixed;
    std::vector<int> pins;
    bool ok = true;
    for (std::size_t k = 0; k < m.stages.size() && ok; ++k) {
      for (int o : m.stages[k].observed) {
        if (std::find(pins.begin(), pins.end(), o) == pins.end()) pins.push_back(o);
      }
      std::sort(pins.begin(), pins.end());
      PolicySolution sol;
      try {
        if (k == 0 && first) {
          sol = *first;
        } else {
          PolicyOptions stage_opt = popt;
          if (stage_opt.kind == PolicyKind::kArcSplit && !pins.empty()) {
            stage_opt.kind = PolicyKind::kRc;
          }
          sol = SolvePolicy(internal::Conditional(m, set, pins, zeta, decided), set, stage_opt);
        }
      } catch (const Error&) {
        ok = false;
        break;
      }
      if (sol.status != SolveStatus::kOptimal) {
        ok = false;
        break;
      }
      const Vector x = sol.decide(zeta);
      for (int j : m.stages[k].decisions) {
        if (!decided.count(j)) decided[j] = x[j];
      }
    }
    Vector x(m.num_variables(), 0.0);
    for (const auto& [j, v] : decided) x[j] = v;
    const auto z = internal::ZetaMap(m, set, zeta);
    if (ok) ok = internal::Reoptimize(m, z, analysis, opt.solver, &x);
    if (ok) {
      out.values.push_back(internal::RealizedObjective(m, z, x));
      out.decisions.push_back(std::move(x));
    } else {
      out.values.push_back(std::numeric_limits<double>::quiet_NaN());
      out.decisions.push_back({});
      ++out.excluded;
    }
  }
  return out;
}

// Static evaluation of a policy's objective with accounting variables
// re-optimized per draw.
inline DrawValues StaticObjectives(const UncertainLP& m, const PolicySolution& sol,
                                   const SampleBatch& batch, const std::string& set,
                                   const SolverOptions& sopt = {}) {
  EvaluationOptions eopt;
  eopt.reoptimize = AnalysisVariables(m);
  eopt.solver = sopt;
  const SimulationReport rep = EvaluateSolution(m, sol.decide, batch, set, eopt);
  DrawValues out;
  out.values = rep.objectives;
  return out;
}

// Worst folding-horizon objective for each value of a here-and-now variable.
inline std::vector<std::pair<double, double>> Sweep(const UncertainLP& m, int variable,
                                                    const Vector& grid, const SampleBatch& batch,
                                                    const std::string& set,
                                                    const FoldingOptions& opt) {
  const bool maximize = m.objective.sense == ObjectiveSense::kMaximize;
  std::vector<std::pair<double, double>> out;
  for (double v : grid) {
    FoldingOptions o = opt;
    o.fixed[variable] = v;
    const DrawValues d = FoldingHorizon(m, batch, set, o);
    double worst = maximize ? kInfinity : -kInfinity;
    for (double x : d.values) {
      if (std::isnan(x)) continue;
      worst = maximize ? std::min(worst, x) : std::max(worst, x);
    }
    out.push_back({v, worst});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prices.

struct PriceReport {
  // Worst-case robust objective minus the nominal objective of the nominal
  // solution; withheld when the objective is uncertain.
  std::optional<double> por;
  // Mean robust objective minus mean nominal objective.
  double apor = 0.0;
  // Regret against perfect hindsight, oriented so that it is nonnegative.
  double pou_mean = 0.0;
  double pou_std = 0.0;
};

// Per-draw regret of `values` against perfect hindsight; draws excluded on
// either side are skipped.
inline std::vector<double> Regret(const std::vector<double>& values,
                                  const std::vector<double>& hindsight, ObjectiveSense sense) {
  if (values.size() != hindsight.size()) throw Error("regret needs paired draws");
  std::vector<double> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i]) || std::isnan(hindsight[i])) continue;
    out.push_back(sense == ObjectiveSense::kMinimize ? values[i] - hindsight[i]
                                                     : hindsight[i] - values[i]);
  }
  return out;
}

inline PriceReport Prices(const UncertainLP& m, double robust_worst_case, double nominal_value,
                          const std::vector<double>& robust_draws,
                          const std::vector<double>& nominal_draws,
                          const std::vector<double>& hindsight) {
  PriceReport p;
  if (!m.objective.IsUncertain()) p.por = robust_worst_case - nominal_value;
  std::vector<double> r, n;
  for (double v : robust_draws) {
    if (!std::isnan(v)) r.push_back(v);
  }
  for (double v : nominal_draws) {
    if (!std::isnan(v)) n.push_back(v);
  }
  p.apor = internal::MeanStd(r).first - internal::MeanStd(n).first;
  const auto [mean, sd] = internal::MeanStd(Regret(robust_draws, hindsight, m.objective.sense));
  p.pou_mean = mean;
  p.pou_std = sd;
  return p;
}

// ---------------------------------------------------------------------------
// Paired tests (smaller values are better).

namespace internal {

// Regularized incomplete beta I_x(a, b) by continued fraction.
inline double IncompleteBeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                       b * std::log1p(-x);
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - IncompleteBeta(b, a, 1.0 - x);
  const double tiny = 1e-300;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double f = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    f *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(lbeta) * f / a;
}

}  // namespace internal

// P(T > t) for Student's t with df degrees of freedom.
inline double StudentUpperTail(double t, double df) {
  const double tail = 0.5 * internal::IncompleteBeta(df / 2.0, 0.5, df / (df + t * t));
  return t >= 0.0 ? tail : 1.0 - tail;
}

// P(X <= k) for X ~ Binomial(n, 1/2).
inline double BinomialHalfCdf(int k, int n) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  double total = 0.0;
  for (int i = 0; i <= k; ++i) {
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) -
                      n * std::log(2.0));
  }
  return std::min(1.0, total);
}

struct SignTestResult {
  bool defined = false;
  int pairs = 0;
  int zeros = 0;
  // Pairs with x < y.
  int x_better = 0;
  int y_better = 0;
  double p_value = 1.0;
};

inline SignTestResult SignTest(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("sign test needs paired samples");
  SignTestResult r;
  r.pairs = static_cast<int>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < y[i]) {
      ++r.x_better;
    } else if (x[i] > y[i]) {
      ++r.y_better;
    } else {
      ++r.zeros;
    }
  }
  const int n = r.x_better + r.y_better;
  if (n == 0) return r;
  r.defined = true;
  r.p_value = std::min(1.0, 2.0 * BinomialHalfCdf(std::min(r.x_better, r.y_better), n));
  return r;
}

struct TTestResult {
  // False when every difference is identical, leaving no variance.
  bool defined = false;
  int n = 0;
  double mean_difference = 0.0;
  double std_difference = 0.0;
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

inline TTestResult PairedTTest(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("t-test needs paired samples");
  TTestResult r;
  r.n = static_cast<int>(x.size());
  if (r.n < 2) return r;
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  const auto [mean, sd] = internal::MeanStd(d);
  r.mean_difference = mean;
  r.std_difference = sd;
  r.df = r.n - 1;
  if (sd == 0.0) {
    // A constant nonzero shift is certain; a zero shift carries no evidence.
    if (mean != 0.0) {
      r.defined = true;
      r.t = mean > 0.0 ? kInfinity : -kInfinity;
      r.p_value = 0.0;
    }
    return r;
  }
  r.defined = true;
  r.t = mean / (sd / std::sqrt(static_cast<double>(r.n)));
  r.p_value = std::min(1.0, 2.0 * StudentUpperTail(std::fabs(r.t), r.df));
  return r;
}

// ---------------------------------------------------------------------------
// Policy comparison: nominal, RC and AARC, each static and folding-horizon,
// against perfect hindsight on a common batch.

struct PolicyRow {
  PolicyKind kind = PolicyKind::kNominal;
  bool folding = false;
  SolveStatus status = SolveStatus::kOptimal;
  // Optimal value of the policy's own model.
  double planned = 0.0;
  std::vector<double> values;
  SummaryStats stats;
  double pou_mean = 0.0;
  double pou_std = 0.0;
  int excluded = 0;
};

struct Comparison {
  std::vector<PolicyRow> rows;
  DrawValues hindsight;
  SummaryStats hindsight_stats;
  // RC versus AARC per-draw costs (folding horizon when stages exist).
  SignTestResult sign;
  TTestResult ttest;
  // Hindsight is at least as good as every policy on every draw.
  bool hindsight_dominates = true;
};

namespace internal {

inline SummaryStats Summarize(const std::vector<double>& values, ObjectiveSense sense) {
  std::vector<double> v;
  for (double x : values) {
    if (!std::isnan(x)) v.push_back(x);
  }
  SummaryStats s;
  const auto [mean, sd] = MeanStd(v);
  s.mean = mean;
  s.std = sd;
  if (!v.empty()) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    s.worst = sense == ObjectiveSense::kMaximize ? *lo : *hi;
    s.best = sense == ObjectiveSense::kMaximize ? *hi : *lo;
  }
  return s;
}

}  // namespace internal

inline Comparison ComparePolicies(const UncertainLP& m, const SampleBatch& batch,
                                  const std::string& set, const SolverOptions& sopt = {},
                                  double tolerance = 1e-7) {
  Comparison out;
  const ObjectiveSense sense = m.objective.sense;
  out.hindsight = PerfectHindsight(m, batch, set, sopt);
  out.hindsight_stats = internal::Summarize(out.hindsight.values, sense);
  std::vector<double> rc_costs, aarc_costs;
  for (PolicyKind kind : {PolicyKind::kNominal, PolicyKind::kRc, PolicyKind::kAarc}) {
    PolicyOptions popt;
    popt.kind = kind;
    popt.solver = sopt;
    const PolicySolution sol = SolvePolicy(m, set, popt);
    for (bool folding : {false, true}) {
      if (folding && m.stages.empty()) continue;
      PolicyRow row;
      row.kind = kind;
      row.folding = folding;
      row.status = sol.status;
      row.planned = sol.objective;
      if (sol.status != SolveStatus::kOptimal) {
        out.rows.push_back(std::move(row));
        continue;
      }
      if (folding) {
        FoldingOptions fopt;
        fopt.policy = popt;
        fopt.solver = sopt;
        const DrawValues d = FoldingHorizon(m, batch, set, fopt);
        row.values = d.values;
        row.excluded = d.excluded;
      } else {
        row.values = StaticObjectives(m, sol, batch, set, sopt).values;
      }
      row.stats = internal::Summarize(row.values, sense);
      const std::vector<double> regret = Regret(row.values, out.hindsight.values, sense);
      const auto [mean, sd] = internal::MeanStd(regret);
      row.pou_mean = mean;
      row.pou_std = sd;
      for (double r : regret) {
        if (r < -tolerance * std::max(1.0, std::fabs(mean))) out.hindsight_dominates = false;
      }
      const bool last = folding || m.stages.empty();
      if (last && kind == PolicyKind::kRc) rc_costs = row.values;
      if (last && kind == PolicyKind::kAarc) aarc_costs = row.values;
      out.rows.push_back(std::move(row));
    }
  }
  if (!rc_costs.empty() && rc_costs.size() == aarc_costs.size()) {
    std::vector<double> a, b;
    for (std::size_t i = 0; i < rc_costs.size(); ++i) {
      if (std::isnan(rc_costs[i]) || std::isnan(aarc_costs[i])) continue;
      // Costs on the minimization scale.
      const double flip = sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
      a.push_back(flip * rc_costs[i]);
      b.push_back(flip * aarc_costs[i]);
    }
    out.sign = SignTest(a, b);
    out.ttest = PairedTTest(a, b);
  }
  return out;
}

}  // namespace robopt

#endif  // ROBOPT_EVALUATE_HPP_

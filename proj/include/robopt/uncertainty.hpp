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

// Uncertainty sets over the primitive parameter zeta, with membership,
// support functions (the worst case of a linear form), projection onto a
// subset of coordinates, conditional slices that pin observed coordinates,
// and the probability-guarantee calculators.

#ifndef ROBOPT_UNCERTAINTY_HPP_
#define ROBOPT_UNCERTAINTY_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "robopt/solver_core.hpp"

namespace robopt {

using Vector = std::vector<double>;
using Matrix = std::vector<std::vector<double>>;

// Raised for malformed models and unsupported requests.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string pointer = "")
      : std::runtime_error(what), pointer_(std::move(pointer)) {}
  // JSON pointer to the offending field when the error stems from input.
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

enum class SetKind {
  kBox,
  kBall,
  kBallBox,
  kBudgeted,
  kPolyhedral,
  kClt,
  kScenarioHull,
};

inline const char* ToString(SetKind k) {
  switch (k) {
    case SetKind::kBox:
      return "box";
    case SetKind::kBall:
      return "ball";
    case SetKind::kBallBox:
      return "ball_box";
    case SetKind::kBudgeted:
      return "budgeted";
    case SetKind::kPolyhedral:
      return "polyhedral";
    case SetKind::kClt:
      return "clt";
    case SetKind::kScenarioHull:
      return "scenario_hull";
  }
  return "unknown";
}

// Tagged union of the supported sets. Only the fields of the active kind are
// meaningful. A conditional slice keeps the full dimension; its pinned
// coordinates are fixed and the remaining ones live in `free_set`.
struct UncertaintySet {
  SetKind kind = SetKind::kBox;
  int dim = 0;
  // Box: per-coordinate interval. Clt: the mandatory intersecting box.
  Vector lower;
  Vector upper;
  // Ball: center and radius. BallBox: radius of the ball part.
  Vector center;
  double omega = 0.0;
  // Budgeted: the budget.
  double gamma = 0.0;
  // Polyhedral: D zeta + q >= 0.
  Matrix d;
  Vector q;
  // Clt parameters.
  double mu = 0.0;
  double sigma = 1.0;
  double rho = 0.0;
  // ScenarioHull points.
  std::vector<Vector> points;
  // Set by Project when an outer bounding box replaced the exact projection.
  bool relaxation = false;
  // Conditional slice data.
  std::vector<int> pinned;
  Vector pinned_value;
  std::shared_ptr<const UncertaintySet> free_set;

  bool sliced() const { return !pinned.empty(); }
};

struct SupportResult {
  double value = 0.0;
  Vector argmax;
};

namespace internal {

inline double Dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double Norm2(const Vector& a) { return std::sqrt(Dot(a, a)); }

inline double Norm1(const Vector& a) {
  double s = 0.0;
  for (double v : a) s += std::fabs(v);
  return s;
}

inline std::vector<int> FreeIndices(const UncertaintySet& s) {
  std::vector<char> is_pinned(s.dim, 0);
  for (int i : s.pinned) is_pinned[i] = 1;
  std::vector<int> out;
  for (int i = 0; i < s.dim; ++i) {
    if (!is_pinned[i]) out.push_back(i);
  }
  return out;
}

// Solves max g^T zeta s.t. D zeta + q >= 0 over free zeta.
inline SolveResult PolyhedralLp(const Matrix& d, const Vector& q, const Vector& g,
                                int dim) {
  DeterministicMILP p;
  p.sense = ObjectiveSense::kMaximize;
  for (int j = 0; j < dim; ++j) {
    p.AddVariable("zeta" + std::to_string(j), -kInfinity, kInfinity);
    p.objective[j] = g[j];
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    LinearExpr row;
    for (int j = 0; j < dim; ++j) {
      if (d[i][j] != 0.0) row.push_back({j, d[i][j]});
    }
    p.AddRow(row, RowSense::kGreaterEqual, -q[i]);
  }
  return SolveLp(p);
}

// Chebyshev center of D zeta + q >= 0 with the radius capped at 1. Returns
// false when the set is empty.
inline bool ChebyshevCenter(const Matrix& d, const Vector& q, int dim, Vector* c,
                            double* radius = nullptr) {
  DeterministicMILP p;
  p.sense = ObjectiveSense::kMaximize;
  for (int j = 0; j < dim; ++j) {
    p.AddVariable("zeta" + std::to_string(j), -kInfinity, kInfinity);
  }
  const int r = p.AddVariable("r", 0.0, 1.0);
  p.objective[r] = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    LinearExpr row;
    double nrm = 0.0;
    for (int j = 0; j < dim; ++j) {
      if (d[i][j] != 0.0) row.push_back({j, d[i][j]});
      nrm += d[i][j] * d[i][j];
    }
    row.push_back({r, -std::sqrt(nrm)});
    p.AddRow(row, RowSense::kGreaterEqual, -q[i]);
  }
  const SolveResult res = SolveLp(p);
  if (res.status != SolveStatus::kOptimal) return false;
  c->assign(res.values.begin(), res.values.begin() + dim);
  if (radius) *radius = res.values[r];
  return true;
}

}  // namespace internal

// Polyhedral description D zeta + q >= 0 of Box, Polyhedral, Clt and (for
// dim <= 12, via sign patterns) Budgeted sets.
inline std::pair<Matrix, Vector> PolyhedralForm(const UncertaintySet& s) {
  if (s.sliced()) throw Error("polyhedral form of a conditional slice is not supported");
  Matrix d;
  Vector q;
  const int n = s.dim;
  auto add_box = [&](const Vector& lo, const Vector& hi) {
    for (int j = 0; j < n; ++j) {
      Vector row(n, 0.0);
      row[j] = 1.0;
      d.push_back(row);
      q.push_back(-lo[j]);
      row[j] = -1.0;
      d.push_back(row);
      q.push_back(hi[j]);
    }
  };
  switch (s.kind) {
    case SetKind::kBox:
      add_box(s.lower, s.upper);
      break;
    case SetKind::kPolyhedral:
      d = s.d;
      q = s.q;
      break;
    case SetKind::kClt: {
      add_box(s.lower, s.upper);
      const double half = s.rho * std::sqrt(static_cast<double>(n)) * s.sigma;
      d.push_back(Vector(n, -1.0));
      q.push_back(n * s.mu + half);
      d.push_back(Vector(n, 1.0));
      q.push_back(-n * s.mu + half);
      break;
    }
    case SetKind::kBudgeted: {
      if (n > 12) throw Error("budgeted set too large for an explicit polyhedral form");
      add_box(Vector(n, -1.0), Vector(n, 1.0));
      for (int mask = 0; mask < (1 << n); ++mask) {
        Vector row(n);
        for (int j = 0; j < n; ++j) row[j] = (mask >> j & 1) ? 1.0 : -1.0;
        d.push_back(row);
        q.push_back(s.gamma);
      }
      break;
    }
    default:
      throw Error(std::string("set kind '") + ToString(s.kind) + "' is not polyhedral");
  }
  return {d, q};
}

// A point that every set contains: box midpoint, ball center, the origin for
// the normalized sets, mu*1 for Clt, the origin or Chebyshev center for
// polyhedral sets, the point mean for hulls.
inline Vector NominalPoint(const UncertaintySet& s) {
  if (s.sliced()) {
    Vector z(s.dim, 0.0);
    const Vector f = NominalPoint(*s.free_set);
    const std::vector<int> free = internal::FreeIndices(s);
    for (std::size_t k = 0; k < free.size(); ++k) z[free[k]] = f[k];
    for (std::size_t k = 0; k < s.pinned.size(); ++k) z[s.pinned[k]] = s.pinned_value[k];
    return z;
  }
  const int n = s.dim;
  switch (s.kind) {
    case SetKind::kBox: {
      Vector z(n);
      for (int j = 0; j < n; ++j) z[j] = 0.5 * (s.lower[j] + s.upper[j]);
      return z;
    }
    case SetKind::kBall:
      return s.center;
    case SetKind::kBallBox:
    case SetKind::kBudgeted:
      return Vector(n, 0.0);
    case SetKind::kClt:
      return Vector(n, s.mu);
    case SetKind::kPolyhedral: {
      bool zero_in = true;
      for (std::size_t i = 0; i < s.q.size(); ++i) zero_in &= s.q[i] >= 0.0;
      if (zero_in) return Vector(n, 0.0);
      Vector c;
      if (!internal::ChebyshevCenter(s.d, s.q, n, &c)) {
        throw Error("polyhedral uncertainty set is empty");
      }
      return c;
    }
    case SetKind::kScenarioHull: {
      Vector z(n, 0.0);
      for (const Vector& p : s.points) {
        for (int j = 0; j < n; ++j) z[j] += p[j] / s.points.size();
      }
      return z;
    }
  }
  return Vector(n, 0.0);
}

namespace internal {

inline void CheckDim(const UncertaintySet& s, std::size_t n) {
  if (static_cast<int>(n) != s.dim) {
    throw Error("dimension mismatch: set has " + std::to_string(s.dim) +
                " coordinates, vector has " + std::to_string(n));
  }
}

// Convex-hull membership by LP over the convex weights.
inline bool HullContains(const std::vector<Vector>& pts, const Vector& z, double tol) {
  if (pts.empty()) return false;
  const int k = static_cast<int>(pts.size());
  const int n = static_cast<int>(z.size());
  DeterministicMILP p;
  for (int i = 0; i < k; ++i) p.AddVariable("l" + std::to_string(i), 0.0, kInfinity);
  // Elastic slacks measure the distance in the l1 sense.
  std::vector<int> sp(n), sn(n);
  for (int j = 0; j < n; ++j) {
    sp[j] = p.AddVariable("sp", 0.0, kInfinity);
    sn[j] = p.AddVariable("sn", 0.0, kInfinity);
    p.objective[sp[j]] = 1.0;
    p.objective[sn[j]] = 1.0;
  }
  LinearExpr sum;
  for (int i = 0; i < k; ++i) sum.push_back({i, 1.0});
  p.AddRow(sum, RowSense::kEqual, 1.0);
  for (int j = 0; j < n; ++j) {
    LinearExpr row;
    for (int i = 0; i < k; ++i) row.push_back({i, pts[i][j]});
    row.push_back({sp[j], 1.0});
    row.push_back({sn[j], -1.0});
    p.AddRow(row, RowSense::kEqual, z[j]);
  }
  const SolveResult r = SolveLp(p);
  return r.status == SolveStatus::kOptimal && r.objective <= tol;
}

}  // namespace internal

// Exact membership within tol.
inline bool Contains(const UncertaintySet& s, const Vector& z, double tol = 1e-9) {
  internal::CheckDim(s, z.size());
  for (double v : z) {
    if (!std::isfinite(v)) return false;
  }
  if (s.sliced()) {
    for (std::size_t k = 0; k < s.pinned.size(); ++k) {
      if (std::fabs(z[s.pinned[k]] - s.pinned_value[k]) > tol) return false;
    }
    const std::vector<int> free = internal::FreeIndices(s);
    Vector f(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) f[k] = z[free[k]];
    return Contains(*s.free_set, f, tol);
  }
  const int n = s.dim;
  switch (s.kind) {
    case SetKind::kBox:
      for (int j = 0; j < n; ++j) {
        if (z[j] < s.lower[j] - tol || z[j] > s.upper[j] + tol) return false;
      }
      return true;
    case SetKind::kBall: {
      Vector r(n);
      for (int j = 0; j < n; ++j) r[j] = z[j] - s.center[j];
      return internal::Norm2(r) <= s.omega + tol;
    }
    case SetKind::kBallBox:
      for (double v : z) {
        if (std::fabs(v) > 1.0 + tol) return false;
      }
      return internal::Norm2(z) <= s.omega + tol;
    case SetKind::kBudgeted:
      for (double v : z) {
        if (std::fabs(v) > 1.0 + tol) return false;
      }
      return internal::Norm1(z) <= s.gamma + tol;
    case SetKind::kPolyhedral:
    case SetKind::kClt: {
      if (s.kind == SetKind::kPolyhedral) {
        for (std::size_t i = 0; i < s.d.size(); ++i) {
          if (internal::Dot(s.d[i], z) + s.q[i] < -tol) return false;
        }
        return true;
      }
      const auto [d, q] = PolyhedralForm(s);
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (internal::Dot(d[i], z) + q[i] < -tol) return false;
      }
      return true;
    }
    case SetKind::kScenarioHull:
      return internal::HullContains(s.points, z, tol);
  }
  return false;
}

// max over zeta in s of g^T zeta, with a maximizer.
inline SupportResult Support(const UncertaintySet& s, const Vector& g) {
  internal::CheckDim(s, g.size());
  SupportResult out;
  const int n = s.dim;
  if (s.sliced()) {
    const std::vector<int> free = internal::FreeIndices(s);
    Vector gf(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) gf[k] = g[free[k]];
    const SupportResult f = Support(*s.free_set, gf);
    out.argmax.assign(n, 0.0);
    out.value = f.value;
    for (std::size_t k = 0; k < free.size(); ++k) out.argmax[free[k]] = f.argmax[k];
    for (std::size_t k = 0; k < s.pinned.size(); ++k) {
      out.argmax[s.pinned[k]] = s.pinned_value[k];
      out.value += g[s.pinned[k]] * s.pinned_value[k];
    }
    return out;
  }
  out.argmax.assign(n, 0.0);
  switch (s.kind) {
    case SetKind::kBox:
      for (int j = 0; j < n; ++j) {
        if (g[j] > 0.0) {
          out.argmax[j] = s.upper[j];
        } else if (g[j] < 0.0) {
          out.argmax[j] = s.lower[j];
        } else {
          out.argmax[j] = 0.5 * (s.lower[j] + s.upper[j]);
        }
      }
      out.value = internal::Dot(g, out.argmax);
      return out;
    case SetKind::kBall: {
      const double nrm = internal::Norm2(g);
      for (int j = 0; j < n; ++j) {
        out.argmax[j] = s.center[j] + (nrm > 0.0 ? s.omega * g[j] / nrm : 0.0);
      }
      out.value = internal::Dot(g, s.center) + s.omega * nrm;
      return out;
    }
    case SetKind::kBallBox: {
      // KKT: zeta_j = sign(g_j) min(1, lambda |g_j|) with ||zeta||_2 = omega
      // unless the box corner already fits in the ball.
      double nnz = 0.0;
      for (double v : g) nnz += v != 0.0 ? 1.0 : 0.0;
      auto build = [&](double lambda) {
        double sq = 0.0;
        for (int j = 0; j < n; ++j) {
          const double a = std::min(1.0, lambda * std::fabs(g[j]));
          out.argmax[j] = g[j] > 0.0 ? a : (g[j] < 0.0 ? -a : 0.0);
          sq += a * a;
        }
        return std::sqrt(sq);
      };
      if (nnz == 0.0) {
        out.value = 0.0;
        return out;
      }
      if (std::sqrt(nnz) <= s.omega) {
        build(kInfinity);
      } else {
        double lo = 0.0;
        double hi = 1.0;
        while (build(hi) < s.omega) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          (build(mid) < s.omega ? lo : hi) = mid;
        }
        build(lo);
      }
      out.value = internal::Dot(g, out.argmax);
      return out;
    }
    case SetKind::kBudgeted: {
      // max g^T zeta s.t. -1 <= zeta <= 1, sum v_j <= gamma, v_j >= |zeta_j|.
      DeterministicMILP p;
      p.sense = ObjectiveSense::kMaximize;
      for (int j = 0; j < n; ++j) {
        p.AddVariable("zeta" + std::to_string(j), -1.0, 1.0);
        p.objective[j] = g[j];
      }
      LinearExpr budget;
      for (int j = 0; j < n; ++j) {
        const int v = p.AddVariable("v" + std::to_string(j), 0.0, 1.0);
        p.AddRow({{v, 1.0}, {j, -1.0}}, RowSense::kGreaterEqual, 0.0);
        p.AddRow({{v, 1.0}, {j, 1.0}}, RowSense::kGreaterEqual, 0.0);
        budget.push_back({v, 1.0});
      }
      p.AddRow(budget, RowSense::kLessEqual, s.gamma);
      const SolveResult r = SolveLp(p);
      if (r.status != SolveStatus::kOptimal) throw Error("budgeted support LP failed");
      out.argmax.assign(r.values.begin(), r.values.begin() + n);
      out.value = internal::Dot(g, out.argmax);
      return out;
    }
    case SetKind::kPolyhedral:
    case SetKind::kClt: {
      const auto [d, q] = s.kind == SetKind::kPolyhedral
                              ? std::make_pair(s.d, s.q)
                              : PolyhedralForm(s);
      const SolveResult r = internal::PolyhedralLp(d, q, g, n);
      if (r.status == SolveStatus::kUnbounded) {
        throw Error("worst case over an unbounded uncertainty set is unbounded");
      }
      if (r.status != SolveStatus::kOptimal) throw Error("support LP failed");
      out.argmax = r.values;
      out.value = internal::Dot(g, out.argmax);
      return out;
    }
    case SetKind::kScenarioHull: {
      double best = -kInfinity;
      for (const Vector& p : s.points) {
        const double v = internal::Dot(g, p);
        if (v > best) {
          best = v;
          out.argmax = p;
        }
      }
      out.value = best;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Construction.

inline UncertaintySet MakeBox(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) throw Error("box bounds differ in length");
  UncertaintySet s;
  s.kind = SetKind::kBox;
  s.dim = static_cast<int>(lower.size());
  for (int j = 0; j < s.dim; ++j) {
    if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || lower[j] > upper[j]) {
      throw Error("box interval " + std::to_string(j) + " is empty or infinite");
    }
  }
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  return s;
}

inline UncertaintySet MakeBoxRadius(const Vector& radius) {
  Vector lo(radius.size());
  for (std::size_t j = 0; j < radius.size(); ++j) lo[j] = -radius[j];
  return MakeBox(lo, radius);
}

inline UncertaintySet MakeBall(Vector center, double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw Error("ball radius must be >= 0");
  UncertaintySet s;
  s.kind = SetKind::kBall;
  s.dim = static_cast<int>(center.size());
  s.center = std::move(center);
  s.omega = omega;
  return s;
}

inline UncertaintySet MakeBallBox(int dim, double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw Error("ball radius must be >= 0");
  UncertaintySet s;
  s.kind = SetKind::kBallBox;
  s.dim = dim;
  s.omega = omega;
  return s;
}

inline UncertaintySet MakeBudgeted(int dim, double gamma) {
  if (!(gamma >= 0.0) || gamma > dim) throw Error("budget must satisfy 0 <= gamma <= L");
  UncertaintySet s;
  s.kind = SetKind::kBudgeted;
  s.dim = dim;
  s.gamma = gamma;
  return s;
}

inline UncertaintySet MakePolyhedral(Matrix d, Vector q) {
  if (d.size() != q.size()) throw Error("polyhedral D and q differ in length");
  UncertaintySet s;
  s.kind = SetKind::kPolyhedral;
  s.dim = d.empty() ? 0 : static_cast<int>(d[0].size());
  for (const Vector& row : d) {
    if (static_cast<int>(row.size()) != s.dim) throw Error("ragged polyhedral D");
  }
  s.d = std::move(d);
  s.q = std::move(q);
  Vector c;
  if (!internal::ChebyshevCenter(s.d, s.q, s.dim, &c)) {
    throw Error("polyhedral uncertainty set is empty");
  }
  return s;
}

inline UncertaintySet MakePolyhedral(int dim, Matrix d, Vector q) {
  if (d.empty()) {
    UncertaintySet s;
    s.kind = SetKind::kPolyhedral;
    s.dim = dim;
    return s;
  }
  UncertaintySet s = MakePolyhedral(std::move(d), std::move(q));
  if (s.dim != dim) throw Error("polyhedral D has the wrong number of columns");
  return s;
}

// {zeta : |sum zeta - L mu| <= rho sqrt(L) sigma} intersected with a box.
inline UncertaintySet MakeClt(int dim, double mu, double sigma, double rho, Vector lower,
                              Vector upper) {
  if (!(sigma > 0.0)) throw Error("clt sigma must be positive");
  if (!(rho >= 0.0)) throw Error("clt rho must be nonnegative");
  UncertaintySet box = MakeBox(std::move(lower), std::move(upper));
  if (box.dim != dim) throw Error("clt box has the wrong dimension");
  UncertaintySet s;
  s.kind = SetKind::kClt;
  s.dim = dim;
  s.mu = mu;
  s.sigma = sigma;
  s.rho = rho;
  s.lower = box.lower;
  s.upper = box.upper;
  if (!Contains(s, Vector(dim, mu), 1e-12)) {
    throw Error("clt box does not contain the mean point");
  }
  return s;
}

inline UncertaintySet MakeScenarioHull(std::vector<Vector> points) {
  if (points.empty()) throw Error("scenario hull needs at least one point");
  UncertaintySet s;
  s.kind = SetKind::kScenarioHull;
  s.dim = static_cast<int>(points[0].size());
  for (const Vector& p : points) {
    if (static_cast<int>(p.size()) != s.dim) throw Error("scenario points differ in length");
  }
  s.points = std::move(points);
  return s;
}

// Solves the 2L support LPs max/min zeta_j.
inline bool IsBounded(const UncertaintySet& s) {
  for (int j = 0; j < s.dim; ++j) {
    for (double sign : {1.0, -1.0}) {
      Vector g(s.dim, 0.0);
      g[j] = sign;
      try {
        Support(s, g);
      } catch (const Error&) {
        return false;
      }
    }
  }
  return true;
}

// Per-coordinate bounding box via support functions.
inline std::pair<Vector, Vector> BoundingBox(const UncertaintySet& s) {
  Vector lo(s.dim), hi(s.dim);
  for (int j = 0; j < s.dim; ++j) {
    Vector g(s.dim, 0.0);
    g[j] = 1.0;
    hi[j] = Support(s, g).value;
    g[j] = -1.0;
    lo[j] = -Support(s, g).value;
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Projection.

namespace internal {

// Scales rows to unit max-norm, removes duplicates and trivially satisfied
// rows, and drops rows implied by the others.
inline void CleanRows(Matrix* d, Vector* q, int dim) {
  Matrix nd;
  Vector nq;
  bool empty = false;
  for (std::size_t i = 0; i < d->size(); ++i) {
    double mx = 0.0;
    for (double v : (*d)[i]) mx = std::max(mx, std::fabs(v));
    if (mx < 1e-12) {
      if ((*q)[i] < -1e-9) empty = true;
      continue;
    }
    Vector row = (*d)[i];
    for (double& v : row) v /= mx;
    const double qi = (*q)[i] / mx;
    bool dup = false;
    for (std::size_t k = 0; k < nd.size() && !dup; ++k) {
      bool same = true;
      for (int j = 0; j < dim && same; ++j) same = std::fabs(nd[k][j] - row[j]) < 1e-10;
      if (same) {
        nq[k] = std::min(nq[k], qi);
        dup = true;
      }
    }
    if (!dup) {
      nd.push_back(row);
      nq.push_back(qi);
    }
  }
  if (empty) {
    nd.assign(1, Vector(dim, 0.0));
    nq.assign(1, -1.0);
    *d = nd;
    *q = nq;
    return;
  }
  if (static_cast<int>(nd.size()) > 2 * dim + 2) {
    for (std::size_t i = 0; i < nd.size();) {
      Matrix od;
      Vector oq;
      for (std::size_t k = 0; k < nd.size(); ++k) {
        if (k == i) continue;
        od.push_back(nd[k]);
        oq.push_back(nq[k]);
      }
      Vector neg(dim);
      for (int j = 0; j < dim; ++j) neg[j] = -nd[i][j];
      const SolveResult r = PolyhedralLp(od, oq, neg, dim);
      if (r.status == SolveStatus::kOptimal && -r.objective + nq[i] >= -1e-9) {
        nd.erase(nd.begin() + static_cast<std::ptrdiff_t>(i));
        nq.erase(nq.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
  }
  *d = nd;
  *q = nq;
}

// Eliminates coordinate k of D zeta + q >= 0 by Fourier-Motzkin.
inline void EliminateCoordinate(Matrix* d, Vector* q, int k) {
  const int dim = static_cast<int>((*d).empty() ? 0 : (*d)[0].size());
  Matrix nd;
  Vector nq;
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < d->size(); ++i) {
    const double c = (*d)[i][k];
    if (c > 1e-12) {
      pos.push_back(i);
    } else if (c < -1e-12) {
      neg.push_back(i);
    } else {
      Vector row = (*d)[i];
      row.erase(row.begin() + k);
      nd.push_back(row);
      nq.push_back((*q)[i]);
    }
  }
  for (std::size_t p : pos) {
    for (std::size_t n : neg) {
      const double a = (*d)[p][k];
      const double b = -(*d)[n][k];
      Vector row(dim - 1);
      int t = 0;
      for (int j = 0; j < dim; ++j) {
        if (j == k) continue;
        row[t++] = b * (*d)[p][j] + a * (*d)[n][j];
      }
      nd.push_back(row);
      nq.push_back(b * (*q)[p] + a * (*q)[n]);
    }
  }
  *d = nd;
  *q = nq;
  CleanRows(d, q, dim - 1);
}

}  // namespace internal

inline constexpr int kFourierMotzkinMaxDim = 8;

// Projection onto the listed coordinates (in the given order).
inline UncertaintySet Project(const UncertaintySet& s, const std::vector<int>& indices) {
  if (indices.empty()) throw Error("projection needs at least one index");
  for (int i : indices) {
    if (i < 0 || i >= s.dim) throw Error("projection index out of range");
  }
  if (s.sliced()) throw Error("projection of a conditional slice is not supported");
  const int m = static_cast<int>(indices.size());
  switch (s.kind) {
    case SetKind::kBox: {
      Vector lo(m), hi(m);
      for (int k = 0; k < m; ++k) {
        lo[k] = s.lower[indices[k]];
        hi[k] = s.upper[indices[k]];
      }
      return MakeBox(lo, hi);
    }
    case SetKind::kBall: {
      Vector c(m);
      for (int k = 0; k < m; ++k) c[k] = s.center[indices[k]];
      return MakeBall(c, s.omega);
    }
    case SetKind::kBallBox:
      return MakeBallBox(m, s.omega);
    case SetKind::kBudgeted:
      return MakeBudgeted(m, std::min(s.gamma, static_cast<double>(m)));
    case SetKind::kScenarioHull: {
      std::vector<Vector> pts;
      for (const Vector& p : s.points) {
        Vector r(m);
        for (int k = 0; k < m; ++k) r[k] = p[indices[k]];
        pts.push_back(r);
      }
      return MakeScenarioHull(pts);
    }
    case SetKind::kPolyhedral:
    case SetKind::kClt: {
      if (s.dim > kFourierMotzkinMaxDim) {
        Vector lo(m), hi(m);
        for (int k = 0; k < m; ++k) {
          Vector g(s.dim, 0.0);
          g[indices[k]] = 1.0;
          hi[k] = Support(s, g).value;
          g[indices[k]] = -1.0;
          lo[k] = -Support(s, g).value;
        }
        UncertaintySet b = MakeBox(lo, hi);
        b.relaxation = true;
        return b;
      }
      auto [d, q] = PolyhedralForm(s);
      // Reorder columns so that kept coordinates come first, in order.
      std::vector<int> order(indices);
      for (int j = 0; j < s.dim; ++j) {
        if (std::find(indices.begin(), indices.end(), j) == indices.end()) order.push_back(j);
      }
      for (Vector& row : d) {
        Vector r(s.dim);
        for (int j = 0; j < s.dim; ++j) r[j] = row[order[j]];
        row = r;
      }
      for (int j = s.dim - 1; j >= m; --j) internal::EliminateCoordinate(&d, &q, j);
      return MakePolyhedral(m, d, q);
    }
  }
  throw Error("unsupported projection");
}

// ---------------------------------------------------------------------------
// Conditional slices.

namespace internal {

// Intersects the hull of pts with {zeta_k = v}; returns the vertices of the
// slice (still full-dimensional points).
inline std::vector<Vector> HullSlice(const std::vector<Vector>& pts, int k, double v,
                                     double tol) {
  std::vector<Vector> out;
  auto push = [&](const Vector& p) {
    for (const Vector& o : out) {
      bool same = true;
      for (std::size_t j = 0; j < p.size() && same; ++j) same = std::fabs(o[j] - p[j]) < 1e-12;
      if (same) return;
    }
    out.push_back(p);
  };
  for (std::size_t a = 0; a < pts.size(); ++a) {
    if (std::fabs(pts[a][k] - v) <= tol) {
      Vector p = pts[a];
      p[k] = v;
      push(p);
    }
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const double da = pts[a][k] - v;
      const double db = pts[b][k] - v;
      if ((da < -tol && db > tol) || (da > tol && db < -tol)) {
        const double t = da / (da - db);
        Vector p(pts[a].size());
        for (std::size_t j = 0; j < p.size(); ++j) p[j] = pts[a][j] + t * (pts[b][j] - pts[a][j]);
        p[k] = v;
        push(p);
      }
    }
  }
  return out;
}

// Reduced set over the free coordinates of an unsliced set. Returns nullptr
// when the slice is empty.
inline std::shared_ptr<UncertaintySet> ReducedSet(const UncertaintySet& s,
                                                  const std::vector<int>& obs,
                                                  const Vector& val,
                                                  const std::vector<int>& free,
                                                  double tol) {
  const int m = static_cast<int>(free.size());
  auto out = std::make_shared<UncertaintySet>();
  switch (s.kind) {
    case SetKind::kBox: {
      for (std::size_t k = 0; k < obs.size(); ++k) {
        if (val[k] < s.lower[obs[k]] - tol || val[k] > s.upper[obs[k]] + tol) return nullptr;
      }
      Vector lo(m), hi(m);
      for (int k = 0; k < m; ++k) {
        lo[k] = s.lower[free[k]];
        hi[k] = s.upper[free[k]];
      }
      *out = MakeBox(lo, hi);
      return out;
    }
    case SetKind::kBall: {
      double r2 = s.omega * s.omega;
      for (std::size_t k = 0; k < obs.size(); ++k) {
        const double dlt = val[k] - s.center[obs[k]];
        r2 -= dlt * dlt;
      }
      if (r2 < -2.0 * tol * std::max(1.0, s.omega)) return nullptr;
      Vector c(m);
      for (int k = 0; k < m; ++k) c[k] = s.center[free[k]];
      *out = MakeBall(c, std::sqrt(std::max(0.0, r2)));
      return out;
    }
    case SetKind::kBallBox: {
      double r2 = s.omega * s.omega;
      for (std::size_t k = 0; k < obs.size(); ++k) {
        if (std::fabs(val[k]) > 1.0 + tol) return nullptr;
        r2 -= val[k] * val[k];
      }
      if (r2 < -2.0 * tol * std::max(1.0, s.omega)) return nullptr;
      *out = MakeBallBox(m, std::sqrt(std::max(0.0, r2)));
      return out;
    }
    case SetKind::kBudgeted: {
      double g = s.gamma;
      for (std::size_t k = 0; k < obs.size(); ++k) {
        if (std::fabs(val[k]) > 1.0 + tol) return nullptr;
        g -= std::fabs(val[k]);
      }
      if (g < -tol) return nullptr;
      *out = MakeBudgeted(m, std::clamp(g, 0.0, static_cast<double>(m)));
      return out;
    }
    case SetKind::kPolyhedral:
    case SetKind::kClt: {
      auto [d, q] = PolyhedralForm(s);
      Matrix nd(d.size(), Vector(m));
      Vector nq(q);
      for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t k = 0; k < obs.size(); ++k) nq[i] += d[i][obs[k]] * val[k];
        for (int k = 0; k < m; ++k) nd[i][k] = d[i][free[k]];
      }
      if (m == 0) {
        for (double v : nq) {
          if (v < -tol) return nullptr;
        }
        out->kind = SetKind::kPolyhedral;
        out->dim = 0;
        return out;
      }
      // Relax by tol so that boundary observations are kept.
      for (double& v : nq) v += tol;
      Vector c;
      if (!ChebyshevCenter(nd, nq, m, &c)) return nullptr;
      *out = MakePolyhedral(m, nd, nq);
      return out;
    }
    case SetKind::kScenarioHull: {
      std::vector<Vector> pts = s.points;
      for (std::size_t k = 0; k < obs.size(); ++k) {
        pts = HullSlice(pts, obs[k], val[k], tol);
        if (pts.empty()) return nullptr;
      }
      std::vector<Vector> red;
      for (const Vector& p : pts) {
        Vector r(m);
        for (int k = 0; k < m; ++k) r[k] = p[free[k]];
        red.push_back(r);
      }
      if (m == 0) red.assign(1, Vector());
      *out = MakeScenarioHull(red);
      out->dim = m;
      return out;
    }
  }
  return nullptr;
}

}  // namespace internal

// Conditional slice of s with zeta[indices[k]] = values[k]. Throws when the
// observation lies outside the set.
inline UncertaintySet Slice(const UncertaintySet& s, const std::vector<int>& indices,
                            const Vector& values, double tol = 1e-9) {
  if (indices.size() != values.size()) throw Error("slice indices and values differ");
  if (indices.empty()) return s;
  std::vector<int> obs;
  Vector val;
  const UncertaintySet* base = &s;
  if (s.sliced()) {
    obs = s.pinned;
    val = s.pinned_value;
    // Rebuild from the original set is not possible here, so slice the free
    // part and merge the pins.
    const std::vector<int> free = internal::FreeIndices(s);
    std::vector<int> sub_idx;
    Vector sub_val;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      auto it = std::find(free.begin(), free.end(), indices[k]);
      if (it == free.end()) {
        const auto pit = std::find(s.pinned.begin(), s.pinned.end(), indices[k]);
        const double pv = s.pinned_value[pit - s.pinned.begin()];
        if (std::fabs(pv - values[k]) > tol) throw Error("observation outside the set");
        continue;
      }
      sub_idx.push_back(static_cast<int>(it - free.begin()));
      sub_val.push_back(values[k]);
    }
    UncertaintySet sub = Slice(*s.free_set, sub_idx, sub_val, tol);
    UncertaintySet out;
    out.kind = s.kind;
    out.dim = s.dim;
    const std::vector<int> sub_free = sub.sliced() ? internal::FreeIndices(sub)
                                                   : std::vector<int>();
    out.pinned = s.pinned;
    out.pinned_value = s.pinned_value;
    for (std::size_t k = 0; k < sub_idx.size(); ++k) {
      out.pinned.push_back(free[sub_idx[k]]);
      out.pinned_value.push_back(sub_val[k]);
    }
    out.free_set = sub.sliced() ? sub.free_set : std::make_shared<UncertaintySet>(sub);
    return out;
  }
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= base->dim) throw Error("slice index out of range");
    obs.push_back(indices[k]);
    val.push_back(values[k]);
  }
  std::vector<int> free;
  for (int j = 0; j < s.dim; ++j) {
    if (std::find(obs.begin(), obs.end(), j) == obs.end()) free.push_back(j);
  }
  auto red = internal::ReducedSet(s, obs, val, free, tol);
  if (!red) throw Error("observation outside the set");
  UncertaintySet out;
  out.kind = s.kind;
  out.dim = s.dim;
  out.pinned = obs;
  out.pinned_value = val;
  out.free_set = red;
  return out;
}

// ---------------------------------------------------------------------------
// Probability guarantees.

struct GuaranteeReport {
  double epsilon = 1.0;
  bool assumes_zero_mean = true;
  bool assumes_independence = true;
  bool assumes_bounded_support = true;  // ||zeta||_inf <= 1
};

// Bound on the violation probability of a constraint made robust for s.
inline GuaranteeReport EpsilonBound(const UncertaintySet& s) {
  GuaranteeReport g;
  if (s.kind == SetKind::kBallBox && !s.sliced()) {
    g.epsilon = std::exp(-s.omega * s.omega / 2.0);
  } else if (s.kind == SetKind::kBudgeted && !s.sliced()) {
    g.epsilon = s.dim == 0 ? 1.0 : std::exp(-s.gamma * s.gamma / (2.0 * s.dim));
  } else {
    throw Error(std::string("no probability bound for set kind '") + ToString(s.kind) + "'");
  }
  return g;
}

// P(N(0,1) > z).
inline double NormalUpperTail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

inline double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace internal {

// Regularized lower and upper incomplete gamma functions.
inline void IncompleteGamma(double a, double x, double* p, double* q) {
  if (x <= 0.0) {
    *p = 0.0;
    *q = 1.0;
    return;
  }
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 10000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-17) break;
    }
    *p = sum * std::exp(-x + a * std::log(x) - gln);
    *q = 1.0 - *p;
    return;
  }
  // Lentz continued fraction for Q.
  const double fpmin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-17) break;
  }
  *q = std::exp(-x + a * std::log(x) - gln) * h;
  *p = 1.0 - *q;
}

// Finds x in [lo, hi] with f(x) = target for a decreasing f by bisection.
template <typename F>
double InvertDecreasing(F f, double target, double lo, double hi) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace internal

// P(chi^2_k > x).
inline double ChiSquareUpperTail(int k, double x) {
  double p, q;
  internal::IncompleteGamma(0.5 * k, 0.5 * x, &p, &q);
  return q;
}

inline double ChiSquareCdf(int k, double x) {
  double p, q;
  internal::IncompleteGamma(0.5 * k, 0.5 * x, &p, &q);
  return p;
}

// z with P(N(0,1) > z) = eps.
inline double NormalUpperQuantile(double eps) {
  return internal::InvertDecreasing(NormalUpperTail, eps, -40.0, 40.0);
}

// x with P(chi^2_k > x) = eps.
inline double ChiSquareUpperQuantile(int k, double eps) {
  double hi = 1.0;
  while (ChiSquareUpperTail(k, hi) > eps) hi *= 2.0;
  return internal::InvertDecreasing([k](double x) { return ChiSquareUpperTail(k, x); },
                                    eps, 0.0, hi);
}

enum class RadiusMode { kCorrectZ, kNaiveChi2 };

// Ball radius that yields a 1-eps guarantee for a single normally
// distributed constraint (kCorrectZ) versus the joint chi-square radius.
inline double RadiusForChance(double eps, int dim, RadiusMode mode) {
  if (!(eps > 0.0) || eps > 0.5) throw Error("epsilon must lie in (0, 0.5]");
  if (dim < 1) throw Error("dimension must be positive");
  if (mode == RadiusMode::kCorrectZ) return NormalUpperQuantile(eps);
  return std::sqrt(ChiSquareUpperQuantile(dim, eps));
}

}  // namespace robopt

#endif  // ROBOPT_UNCERTAINTY_HPP_

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

#include "robopt/uncertainty.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

namespace robopt {
namespace {

std::vector<UncertaintySet> AllKinds() {
  std::vector<UncertaintySet> out;
  out.push_back(MakeBox({-1, -2, 0}, {1, 1, 3}));
  out.push_back(MakeBall({1, 0, -1}, 1.5));
  out.push_back(MakeBallBox(3, 1.3));
  out.push_back(MakeBudgeted(3, 1.5));
  out.push_back(MakePolyhedral({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}},
                               {0.2, 0.2, 0.2, 1.0}));
  out.push_back(MakeClt(3, 0.0, 1.0, 0.5, {-1, -1, -1}, {1, 1, 1}));
  out.push_back(MakeScenarioHull({{0, 0, 0}, {1, 0, 2}, {0, -1, 1}, {2, 2, 2}}));
  return out;
}

// Rejection draws from the bounding box for the property tests.
std::vector<Vector> Draws(const UncertaintySet& s, int n, std::mt19937_64& rng) {
  const auto [lo, hi] = BoundingBox(s);
  std::vector<Vector> out;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int guard = 0;
  while (static_cast<int>(out.size()) < n && guard++ < 200 * n) {
    Vector z(s.dim);
    for (int j = 0; j < s.dim; ++j) z[j] = lo[j] + (hi[j] - lo[j]) * u(rng);
    if (Contains(s, z)) out.push_back(z);
  }
  return out;
}

TEST(Contains, BoxBoundary) {
  EXPECT_TRUE(Contains(MakeBoxRadius({1, 1, 1}), {1, 1, 1}));
}

TEST(Contains, BudgetedNorm) {
  EXPECT_FALSE(Contains(MakeBudgeted(2, 1.0), {0.6, 0.6}));
  EXPECT_TRUE(Contains(MakeBudgeted(2, 1.0), {0.6, -0.4}));
}

TEST(Contains, SimplexAgainstDirectCheck) {
  const UncertaintySet s = MakePolyhedral({{1, 0}, {0, 1}, {-1, -1}}, {0, 0, 1});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int k = 0; k < 1000; ++k) {
    const Vector z{u(rng), u(rng)};
    const bool direct = z[0] >= 0 && z[1] >= 0 && 1 - z[0] - z[1] >= 0;
    EXPECT_EQ(Contains(s, z), direct);
  }
}

TEST(Contains, DimensionMismatchThrows) {
  EXPECT_THROW(Contains(MakeBudgeted(2, 1.0), {0.1}), Error);
}

TEST(Contains, NominalPointOfEveryKind) {
  for (const UncertaintySet& s : AllKinds()) {
    EXPECT_TRUE(Contains(s, NominalPoint(s))) << ToString(s.kind);
  }
}

TEST(Support, BoxSignRule) {
  const SupportResult r = Support(MakeBoxRadius({1, 1}), {3, -2});
  EXPECT_EQ(r.argmax, (Vector{1, -1}));
  EXPECT_DOUBLE_EQ(r.value, 5.0);
}

TEST(Support, AgreesWithSampledMaximum) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  for (const UncertaintySet& s : AllKinds()) {
    const std::vector<Vector> pts = Draws(s, 400, rng);
    for (int t = 0; t < 10; ++t) {
      Vector g(s.dim);
      for (double& v : g) v = n01(rng);
      const SupportResult r = Support(s, g);
      EXPECT_TRUE(Contains(s, r.argmax, 1e-7)) << ToString(s.kind);
      EXPECT_NEAR(internal::Dot(g, r.argmax), r.value, 1e-9);
      for (const Vector& z : pts) EXPECT_LE(internal::Dot(g, z), r.value + 1e-9);
    }
  }
}

TEST(Support, PolyhedralMatchesVertexEnumeration) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    Matrix d;
    Vector q;
    for (int j = 0; j < 3; ++j) {
      Vector e(3, 0.0);
      e[j] = 1.0;
      d.push_back(e);
      q.push_back(1.0);
      e[j] = -1.0;
      d.push_back(e);
      q.push_back(1.0);
    }
    for (int k = 0; k < 3; ++k) {
      d.push_back({u(rng), u(rng), u(rng)});
      q.push_back(0.3 + std::fabs(u(rng)));
    }
    const UncertaintySet s = MakePolyhedral(d, q);
    const Vector g{u(rng), u(rng), u(rng)};
    DeterministicMILP p;
    p.sense = ObjectiveSense::kMaximize;
    for (int j = 0; j < 3; ++j) {
      p.AddVariable("z", -1.0, 1.0);
      p.objective[j] = g[j];
    }
    for (std::size_t i = 6; i < d.size(); ++i) {
      p.AddRow({{0, d[i][0]}, {1, d[i][1]}, {2, d[i][2]}}, RowSense::kGreaterEqual, -q[i]);
    }
    const testing::OracleValue o = testing::EnumerateVertices(p);
    ASSERT_TRUE(o.feasible);
    EXPECT_NEAR(Support(s, g).value, o.value, 1e-8);
  }
}

TEST(Support, BudgetedGreedyOracle) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 100; ++t) {
    const double gamma = 4.0 * std::fabs(n01(rng)) / 2.0;
    const UncertaintySet s = MakeBudgeted(4, std::min(gamma, 4.0));
    Vector g(4);
    for (double& v : g) v = n01(rng);
    Vector a(4);
    for (int j = 0; j < 4; ++j) a[j] = std::fabs(g[j]);
    std::sort(a.rbegin(), a.rend());
    double budget = s.gamma;
    double best = 0.0;
    for (double v : a) {
      const double take = std::min(1.0, budget);
      best += take * v;
      budget -= take;
      if (budget <= 0) break;
    }
    EXPECT_NEAR(Support(s, g).value, best, 1e-9);
  }
}

TEST(Project, ConstraintWiseInterval) {
  const UncertaintySet s = MakePolyhedral({{1, 0}, {0, 1}, {-1, -1}}, {0, 0, 1});
  const UncertaintySet p = Project(s, {0});
  const auto [lo, hi] = BoundingBox(p);
  EXPECT_NEAR(lo[0], 0.0, 1e-12);
  EXPECT_NEAR(hi[0], 1.0, 1e-12);
  EXPECT_TRUE(Contains(p, {0.5}));
  EXPECT_FALSE(Contains(p, {1.1}));
}

TEST(Project, BallOnOneIndex) {
  const UncertaintySet p = Project(MakeBall({0, 0, 0}, 2.5), {1});
  const auto [lo, hi] = BoundingBox(p);
  EXPECT_NEAR(lo[0], -2.5, 1e-12);
  EXPECT_NEAR(hi[0], 2.5, 1e-12);
}

TEST(Project, RandomPolytopesMatchLiftedFeasibility) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    Matrix d;
    Vector q;
    for (int k = 0; k < 7; ++k) {
      d.push_back({u(rng), u(rng), u(rng)});
      q.push_back(0.5 + std::fabs(u(rng)));
    }
    for (int j = 0; j < 3; ++j) {
      Vector e(3, 0.0);
      e[j] = 1.0;
      d.push_back(e);
      q.push_back(2.0);
      e[j] = -1.0;
      d.push_back(e);
      q.push_back(2.0);
    }
    const UncertaintySet s = MakePolyhedral(d, q);
    const UncertaintySet p = Project(s, {2, 0});
    for (int k = 0; k < 50; ++k) {
      const Vector y{2.5 * u(rng), 2.5 * u(rng)};
      // Lifted existence check: is there zeta_1 with (y[1], zeta_1, y[0]) in s?
      DeterministicMILP lp;
      lp.AddVariable("z1", -kInfinity, kInfinity);
      for (std::size_t i = 0; i < d.size(); ++i) {
        lp.AddRow({{0, d[i][1]}}, RowSense::kGreaterEqual,
                  -q[i] - d[i][0] * y[1] - d[i][2] * y[0]);
      }
      const bool exists = SolveLp(lp).status == SolveStatus::kOptimal;
      EXPECT_EQ(Contains(p, y, 1e-7), exists) << t << " " << k;
    }
  }
}

TEST(Project, ContainsIsConsistent) {
  std::mt19937_64 rng(37);
  for (const UncertaintySet& s : AllKinds()) {
    const std::vector<int> idx{2, 0};
    const UncertaintySet p = Project(s, idx);
    for (const Vector& z : Draws(s, 1000, rng)) {
      EXPECT_TRUE(Contains(p, {z[2], z[0]}, 1e-7)) << ToString(s.kind);
    }
  }
}

TEST(Project, LargePolyhedralFallsBackToBox) {
  const int n = 9;
  Matrix d;
  Vector q;
  for (int j = 0; j < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    d.push_back(e);
    q.push_back(1.0);
    e[j] = -1.0;
    d.push_back(e);
    q.push_back(1.0);
  }
  const UncertaintySet p = Project(MakePolyhedral(d, q), {0, 4});
  EXPECT_TRUE(p.relaxation);
  EXPECT_EQ(p.kind, SetKind::kBox);
}

TEST(Slice, BallRadiusShrinks) {
  const UncertaintySet s = Slice(MakeBall({5, 5}, 5), {0}, {8});
  const auto [lo, hi] = BoundingBox(s);
  EXPECT_NEAR(lo[1], 1.0, 1e-12);
  EXPECT_NEAR(hi[1], 9.0, 1e-12);
  EXPECT_NEAR(lo[0], 8.0, 1e-12);
  EXPECT_THROW(Slice(MakeBall({5, 5}, 5), {0}, {11}), Error);
}

TEST(Slice, BudgetShrinks) {
  const UncertaintySet s = Slice(MakeBudgeted(3, 2.0), {1}, {-0.5});
  EXPECT_NEAR(Support(s, {1, 0, 1}).value, 1.5, 1e-9);
}

TEST(Slice, PolyhedralSubstitution) {
  const UncertaintySet s =
      Slice(MakePolyhedral({{1, 0}, {0, 1}, {-1, -1}}, {0, 0, 1}), {0}, {0.25});
  EXPECT_NEAR(Support(s, {0, 1}).value, 0.75, 1e-8);
  EXPECT_TRUE(Contains(s, {0.25, 0.7}));
  EXPECT_FALSE(Contains(s, {0.3, 0.1}));
}

TEST(Slice, HullCutsEdges) {
  const UncertaintySet s = Slice(MakeScenarioHull({{0, 0}, {2, 0}, {0, 2}}), {0}, {1});
  EXPECT_NEAR(Support(s, {0, 1}).value, 1.0, 1e-12);
  EXPECT_NEAR(Support(s, {0, -1}).value, 0.0, 1e-12);
}

TEST(Slice, NestedSlices) {
  const UncertaintySet s = Slice(Slice(MakeBall({0, 0, 0}, 5), {0}, {3}), {2}, {0});
  EXPECT_NEAR(Support(s, {0, 1, 0}).value, 4.0, 1e-12);
}

TEST(EpsilonBound, ClosedForms) {
  EXPECT_NEAR(EpsilonBound(MakeBallBox(3, 2.0)).epsilon, std::exp(-2.0), 1e-15);
  EXPECT_NEAR(EpsilonBound(MakeBudgeted(2, 2.0)).epsilon, 0.36787944117144233, 1e-12);
  EXPECT_EQ(EpsilonBound(MakeBudgeted(2, 0.0)).epsilon, 1.0);
  EXPECT_THROW(EpsilonBound(MakeBoxRadius({1})), Error);
}

TEST(EpsilonBound, Monotone) {
  double prev = 2.0;
  for (double om = 0.0; om < 4.0; om += 0.25) {
    const double e = EpsilonBound(MakeBallBox(4, om)).epsilon;
    EXPECT_LE(e, prev);
    prev = e;
  }
  prev = 2.0;
  for (double g = 0.0; g <= 5.0; g += 0.5) {
    const double e = EpsilonBound(MakeBudgeted(5, g)).epsilon;
    EXPECT_LE(e, prev);
    prev = e;
  }
}

TEST(Quantiles, NormalTail) {
  EXPECT_NEAR(NormalUpperTail(1.959963984540054), 0.025, 1e-15);
  const double tail = NormalUpperTail(9.3);
  EXPECT_GT(tail, 7.0e-21 / 1.5);
  EXPECT_LT(tail, 7.0e-21 * 1.5);
}

TEST(Quantiles, ChiSquareReference) {
  EXPECT_NEAR(ChiSquareUpperQuantile(1, 0.05), 3.841458820694124, 1e-9);
  EXPECT_NEAR(ChiSquareUpperQuantile(10, 0.05), 18.307038053275146, 1e-9);
  EXPECT_NEAR(ChiSquareCdf(4, 2.0), 1.0 - 2.0 * std::exp(-1.0), 1e-14);
}

TEST(RadiusForChance, CorrectIsSmallerForSeveralCoordinates) {
  for (int dim = 2; dim <= 20; ++dim) {
    for (double eps : {1e-6, 1e-3, 0.01, 0.05, 0.2, 0.45}) {
      EXPECT_LT(RadiusForChance(eps, dim, RadiusMode::kCorrectZ),
                RadiusForChance(eps, dim, RadiusMode::kNaiveChi2));
    }
  }
}

TEST(RadiusForChance, SingleCoordinateMatchesTwoSidedQuantile) {
  // With one coordinate the chi-square radius equals the two-sided normal
  // quantile z_{1-eps/2}.
  for (double eps : {1e-6, 1e-3, 0.01, 0.05, 0.2, 0.45}) {
    EXPECT_NEAR(RadiusForChance(eps, 1, RadiusMode::kNaiveChi2),
                RadiusForChance(eps / 2.0, 1, RadiusMode::kCorrectZ), 1e-9);
  }
}

TEST(RadiusForChance, HalfIsMedian) {
  EXPECT_NEAR(RadiusForChance(0.5, 3, RadiusMode::kCorrectZ), 0.0, 1e-12);
  EXPECT_THROW(RadiusForChance(0.0, 3, RadiusMode::kCorrectZ), Error);
  EXPECT_THROW(RadiusForChance(0.7, 3, RadiusMode::kCorrectZ), Error);
}

TEST(Clt, SingleCoordinateInterval) {
  const UncertaintySet s = MakeClt(1, 0.0, 1.0, 1.0, {-2}, {2});
  const auto [lo, hi] = BoundingBox(s);
  EXPECT_NEAR(lo[0], -1.0, 1e-12);
  EXPECT_NEAR(hi[0], 1.0, 1e-12);
}

TEST(Clt, MembershipMatchesInequalities) {
  const UncertaintySet s = MakeClt(3, 0.5, 2.0, 0.7, {-3, -3, -3}, {3, 3, 3});
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-3.5, 3.5);
  for (int k = 0; k < 1000; ++k) {
    const Vector z{u(rng), u(rng), u(rng)};
    const double sum = z[0] + z[1] + z[2];
    bool direct = std::fabs(sum - 1.5) <= 0.7 * std::sqrt(3.0) * 2.0;
    for (double v : z) direct &= std::fabs(v) <= 3.0;
    EXPECT_EQ(Contains(s, z), direct);
  }
}

TEST(Clt, ZeroRhoIsSlab) {
  const UncertaintySet s = MakeClt(3, 0.2, 1.0, 0.0, {-1, -1, -1}, {1, 1, 1});
  EXPECT_TRUE(Contains(s, {0.2, 0.2, 0.2}));
  EXPECT_FALSE(Contains(s, {0.3, 0.2, 0.2}, 1e-9));
  EXPECT_TRUE(IsBounded(s));
  EXPECT_FALSE(IsBounded(MakePolyhedral(2, {{1, 0}}, {0})));
}

}  // namespace
}  // namespace robopt

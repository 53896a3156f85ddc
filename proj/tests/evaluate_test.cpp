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

#include "robopt/evaluate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "integer_recourse_fixture.hpp"
#include "inventory_fixture.hpp"

namespace robopt {
namespace {

using testing::HindsightCost;
using testing::IntegerRecourseModel;
using testing::InventoryCost;
using testing::InventoryModel;

double Norm(const Vector& v, const Vector& c) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += (v[k] - c[k]) * (v[k] - c[k]);
  return std::sqrt(s);
}

TEST(Sample, BoxIsUniformAndReproducible) {
  const UncertaintySet box = MakeBox({0.0, -2.0}, {1.0, 2.0});
  const SampleBatch a = Sample(box, 4000, 11);
  const SampleBatch b = Sample(box, 4000, 11);
  EXPECT_EQ(a.draws, b.draws);
  EXPECT_EQ(a.sampler, "uniform-box");
  double m0 = 0.0, m1 = 0.0;
  for (const Vector& z : a.draws) {
    m0 += z[0];
    m1 += z[1];
  }
  m0 /= 4000;
  m1 /= 4000;
  EXPECT_NEAR(m0, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / 4000));
  EXPECT_NEAR(m1, 0.0, 3.0 * std::sqrt(16.0 / 12.0 / 4000));
  EXPECT_NE(Sample(box, 10, 12).draws, Sample(box, 10, 11).draws);
  // A prefix of a larger run reproduces a smaller run.
  EXPECT_EQ(Sample(box, 10, 11).draws[9], a.draws[9]);
  for (const Vector& z : Sample(box, 500, 3, SampleMode::kBoundary).draws) {
    const bool on_face = z[0] == 0.0 || z[0] == 1.0 || z[1] == -2.0 || z[1] == 2.0;
    EXPECT_TRUE(on_face);
  }
}

TEST(Sample, BallInteriorAndSurface) {
  const UncertaintySet ball = MakeBall({1.0, 2.0, 3.0}, 2.0);
  double mean_radius = 0.0;
  for (const Vector& z : Sample(ball, 4000, 5).draws) {
    const double r = Norm(z, ball.center);
    EXPECT_LE(r, 2.0 + 1e-12);
    mean_radius += r / 4000;
  }
  // E|z - c| = n / (n + 1) * omega for the uniform ball.
  EXPECT_NEAR(mean_radius, 1.5, 0.02);
  for (const Vector& z : Sample(ball, 200, 5, SampleMode::kBoundary).draws) {
    EXPECT_NEAR(Norm(z, ball.center), 2.0, 1e-12);
  }
}

TEST(Sample, HitAndRunOnSimplex) {
  // z >= 0, z1 + z2 <= 1: the mean of the uniform triangle is (1/3, 1/3).
  const UncertaintySet tri = MakePolyhedral({{1, 0}, {0, 1}, {-1, -1}}, {0, 0, 1});
  const SampleBatch b = Sample(tri, 5000, 9);
  EXPECT_EQ(b.sampler, "hit-and-run");
  double m0 = 0.0, m1 = 0.0;
  for (const Vector& z : b.draws) {
    m0 += z[0] / 5000;
    m1 += z[1] / 5000;
  }
  EXPECT_NEAR(m0, 1.0 / 3.0, 0.02);
  EXPECT_NEAR(m1, 1.0 / 3.0, 0.02);
  EXPECT_THROW(Sample(tri, 10, 1, SampleMode::kBoundary), Error);
  EXPECT_NO_THROW(Sample(MakeBudgeted(3, 1.5), 200, 1));
  EXPECT_NO_THROW(Sample(MakeBallBox(3, 1.2), 200, 1));
}

TEST(Sample, HullAndSlices) {
  const UncertaintySet hull = MakeScenarioHull({{0, 0}, {2, 0}, {0, 2}});
  EXPECT_EQ(Sample(hull, 300, 2).sampler, "dirichlet-hull");
  const UncertaintySet s = Slice(MakeBoxRadius({1.0, 1.0, 1.0}), {1}, {0.25});
  for (const Vector& z : Sample(s, 300, 4).draws) {
    EXPECT_EQ(z[1], 0.25);
    EXPECT_LE(std::fabs(z[0]), 1.0);
  }
  EXPECT_THROW(Sample(hull, 0, 1), Error);
}

TEST(EvaluateSolution, RobustHasNoViolationNominalDoes) {
  const UncertainLP m = IntegerRecourseModel();
  const SampleBatch b = Sample(m.sets.at("Z"), 10000, 1);
  PolicyOptions rc;
  rc.kind = PolicyKind::kRc;
  const PolicySolution r = SolvePolicy(m, "Z", rc);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.objective, 29.0, 1e-6);
  const SimulationReport robust = EvaluateSolution(m, r.decide, b, "Z");
  for (const ConstraintStats& c : robust.constraints) EXPECT_EQ(c.violation_probability, 0.0);
  EXPECT_EQ(robust.mean_violated_constraints, 0.0);
  EXPECT_NEAR(robust.objective.mean, 29.0, 1e-9);

  PolicyOptions nom;
  nom.kind = PolicyKind::kNominal;
  const PolicySolution n = SolvePolicy(m, "Z", nom);
  ASSERT_EQ(n.status, SolveStatus::kOptimal);
  const SimulationReport rep = EvaluateSolution(m, n.decide, b, "Z");
  double worst = 0.0;
  int violated = 0;
  for (std::size_t i = 0; i < b.draws.size(); ++i) {
    bool any = false;
    for (const UncertainConstraint& c : m.constraints) {
      const double v = c.Residual(n.x, b.draws[i]);
      worst = std::max(worst, v);
      any = any || v > 1e-7;
    }
    violated += any;
  }
  EXPECT_GT(worst, 0.0);
  double max_reported = 0.0;
  for (const ConstraintStats& c : rep.constraints) {
    max_reported = std::max(max_reported, c.worst_violation);
  }
  EXPECT_NEAR(max_reported, worst, 1e-12);
  EXPECT_GT(rep.mean_violated_constraints, 0.0);
  EXPECT_GE(rep.mean_violated_constraints, static_cast<double>(violated) / b.draws.size());
}

TEST(EvaluateSolution, EqualityResidualIsAbsolute) {
  UncertainLP m;
  const int x = m.AddVariable("x", 0.0, 10.0);
  m.objective.c = {{x, 1.0}};
  m.sets["Z"] = MakeBox({-1.0}, {1.0});
  UncertainConstraint c;
  c.name = "eq";
  c.sense = RowSense::kEqual;
  c.a = {{x, 1.0}};
  c.rhs = 2.0;
  c.rhs_factor[0] = 1.0;
  c.set = "Z";
  m.constraints.push_back(c);
  SampleBatch b;
  b.draws = {{0.5}, {-0.25}, {0.0}};
  const SimulationReport rep =
      EvaluateSolution(m, [](const Vector&) { return Vector{2.0}; }, b, "Z");
  ASSERT_EQ(rep.constraints.size(), 1u);
  EXPECT_TRUE(rep.constraints[0].equality);
  EXPECT_NEAR(rep.constraints[0].violation_probability, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(rep.constraints[0].worst_violation, 0.5, 1e-12);
  EXPECT_NEAR(rep.constraints[0].mean_violation, 0.375, 1e-12);
}

TEST(SolvePolicy, AffineRulesMatchHandSubstitution) {
  const UncertainLP m = InventoryModel(true);
  PolicyOptions opt;
  opt.kind = PolicyKind::kAarc;
  const PolicySolution p = SolvePolicy(m, "D", opt);
  ASSERT_EQ(p.status, SolveStatus::kOptimal);
  const Vector a = p.decide({5.0, 5.0});
  const Vector b = p.decide({7.0, 5.0});
  const Vector c = p.decide({6.0, 1.0});
  // q1 and the cost variables are static; q2 is affine in d1 only.
  EXPECT_EQ(a[0], b[0]);
  EXPECT_EQ(a[2], c[2]);
  EXPECT_NEAR(c[1], 0.5 * (a[1] + b[1]), 1e-9);
  const SampleBatch draws = Sample(m.sets.at("D"), 2000, 3);
  const SimulationReport rep = EvaluateSolution(m, p.decide, draws, "D");
  for (std::size_t i = 0; i < draws.draws.size(); ++i) {
    const Vector x = p.decide(draws.draws[i]);
    for (const UncertainConstraint& row : m.constraints) {
      EXPECT_LE(-row.Residual(x, draws.draws[i]), 1e-6);
    }
    EXPECT_NEAR(rep.objectives[i], x[2] + x[3], 1e-12);
    EXPECT_LE(rep.objectives[i], p.objective + 1e-6);
  }
}

TEST(PerfectHindsight, CertainModelEqualsNominal) {
  UncertainLP m;
  const int x = m.AddVariable("x", 0.0, 4.0);
  const int y = m.AddVariable("y", 0.0, 4.0);
  m.objective.sense = ObjectiveSense::kMaximize;
  m.objective.c = {{x, 2.0}, {y, 1.0}};
  m.sets["Z"] = MakeBoxRadius({1.0});
  UncertainConstraint c;
  c.a = {{x, 1.0}, {y, 1.0}};
  c.rhs = 5.0;
  m.constraints.push_back(c);
  const DrawValues ph = PerfectHindsight(m, Sample(m.sets.at("Z"), 20, 1), "Z");
  for (double v : ph.values) EXPECT_NEAR(v, 9.0, 1e-9);
  EXPECT_EQ(ph.excluded, 0);
}

TEST(PerfectHindsight, InventoryMatchesOracle) {
  const UncertainLP m = InventoryModel();
  const SampleBatch b = Sample(m.sets.at("D"), 300, 21);
  const DrawValues ph = PerfectHindsight(m, b, "D");
  for (std::size_t i = 0; i < b.draws.size(); ++i) {
    EXPECT_NEAR(ph.values[i], HindsightCost(b.draws[i]), 1e-7) << i;
  }
}

TEST(FoldingHorizon, InventoryAgainstOracle) {
  const UncertainLP m = InventoryModel();
  const SampleBatch b = Sample(m.sets.at("D"), 200, 7);
  FoldingOptions opt;
  opt.policy.kind = PolicyKind::kRc;
  const DrawValues fh = FoldingHorizon(m, b, "D", opt);
  ASSERT_EQ(fh.excluded, 0);
  const PolicySolution rc = SolvePolicy(m, "D", opt.policy);
  ASSERT_EQ(rc.status, SolveStatus::kOptimal);
  const DrawValues ph = PerfectHindsight(m, b, "D");
  for (std::size_t i = 0; i < b.draws.size(); ++i) {
    const Vector& x = fh.decisions[i];
    // Same first-stage order everywhere; realized cost equals the formula.
    EXPECT_NEAR(x[0], rc.x[0], 1e-7);
    EXPECT_NEAR(fh.values[i], InventoryCost(x[0], x[1], b.draws[i]), 1e-7);
    EXPECT_LE(fh.values[i], rc.objective + 1e-6);
    EXPECT_GE(fh.values[i], ph.values[i] - 1e-7);
  }
  const PriceReport p = Prices(m, rc.objective, 0.0, fh.values, fh.values, ph.values);
  EXPECT_GE(p.pou_mean, 0.0);
  ASSERT_TRUE(p.por.has_value());
}

TEST(FoldingHorizon, DegenerateStageStructures) {
  UncertainLP m = InventoryModel();
  const SampleBatch b = Sample(m.sets.at("D"), 50, 8);
  FoldingOptions opt;
  opt.policy.kind = PolicyKind::kRc;
  // Everything observed up front: each draw is solved in hindsight.
  UncertainLP all = m;
  all.stages = {Stage{{0, 1}, {0, 1}}};
  const DrawValues fh_all = FoldingHorizon(all, b, "D", opt);
  const DrawValues ph = PerfectHindsight(m, b, "D");
  for (std::size_t i = 0; i < b.draws.size(); ++i) {
    EXPECT_NEAR(fh_all.values[i], ph.values[i], 1e-6);
  }
  // Nothing observed: folding horizon reproduces the static solution.
  UncertainLP none = m;
  none.stages = {Stage{{0, 1}, {}}};
  const DrawValues fh_none = FoldingHorizon(none, b, "D", opt);
  const PolicySolution rc = SolvePolicy(m, "D", opt.policy);
  const DrawValues st = StaticObjectives(m, rc, b, "D");
  for (std::size_t i = 0; i < b.draws.size(); ++i) {
    EXPECT_NEAR(fh_none.values[i], st.values[i], 1e-7);
  }
}

TEST(Sweep, FixingTheFirstOrder) {
  const UncertainLP m = InventoryModel();
  const SampleBatch b = Sample(m.sets.at("D"), 60, 2);
  FoldingOptions opt;
  opt.policy.kind = PolicyKind::kRc;
  const auto curve = Sweep(m, 0, {0.0, 2.0, 4.0, 6.0}, b, "D", opt);
  ASSERT_EQ(curve.size(), 4u);
  for (const auto& [q1, worst] : curve) {
    double oracle = -kInfinity;
    for (const Vector& d : b.draws) {
      // The second order is re-solved robustly on the remaining demand,
      // so it is at least as costly as the best hindsight q2.
      oracle = std::max(oracle, testing::CostGivenFirst(q1, d));
    }
    EXPECT_GE(worst, oracle - 1e-7) << q1;
  }
}

TEST(Statistics, SignTestAgainstEnumeration) {
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> y{2, 3, 4, 5, 6, 7, 8, 8};
  const SignTestResult s = SignTest(x, y);
  EXPECT_TRUE(s.defined);
  EXPECT_EQ(s.zeros, 1);
  EXPECT_EQ(s.x_better, 7);
  EXPECT_NEAR(s.p_value, 2.0 / 128.0, 1e-12);
  EXPECT_FALSE(SignTest(x, x).defined);
  std::vector<double> big(200), shifted(200);
  for (int i = 0; i < 200; ++i) {
    big[i] = i;
    shifted[i] = i + 1;
  }
  EXPECT_LT(SignTest(big, shifted).p_value, 1e-6);
}

TEST(Statistics, PairedTTest) {
  std::vector<double> x(100), y(100);
  for (int i = 0; i < 100; ++i) {
    x[i] = i;
    y[i] = i + 1.0;
  }
  const TTestResult d = PairedTTest(y, x);
  EXPECT_TRUE(d.defined);
  EXPECT_EQ(d.p_value, 0.0);
  EXPECT_FALSE(PairedTTest(x, x).defined);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 100; ++i) {
    x[i] = n01(rng);
    y[i] = x[i] + 0.5 + n01(rng);
  }
  const TTestResult t = PairedTTest(x, y);
  EXPECT_LT(t.p_value, 0.01);
  EXPECT_LT(t.mean_difference, 0.0);
  // Student-t tail against known quantiles.
  EXPECT_NEAR(StudentUpperTail(2.228, 10), 0.025, 1e-4);
  EXPECT_NEAR(StudentUpperTail(1.0, 1), 0.25, 1e-12);
  EXPECT_NEAR(StudentUpperTail(0.0, 5), 0.5, 1e-12);
}

TEST(ComparePolicies, AllColumnsAndHindsightDominates) {
  const UncertainLP m = InventoryModel(true);
  const SampleBatch b = Sample(m.sets.at("D"), 40, 5, SampleMode::kBoundary);
  const Comparison c = ComparePolicies(m, b, "D");
  ASSERT_EQ(c.rows.size(), 6u);
  EXPECT_TRUE(c.hindsight_dominates);
  for (const PolicyRow& r : c.rows) {
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    ASSERT_EQ(r.values.size(), b.draws.size());
    EXPECT_GE(r.pou_mean, 0.0);
    EXPECT_GE(r.stats.mean, c.hindsight_stats.mean - 1e-9);
  }
  EXPECT_EQ(c.sign.pairs, 40);
  EXPECT_EQ(c.ttest.n, 40);
}

}  // namespace
}  // namespace robopt

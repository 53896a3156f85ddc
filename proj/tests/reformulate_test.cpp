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

#include "robopt/reformulate.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "random_models.hpp"
#include "robopt/adversarial.hpp"

namespace robopt {
namespace {

// (2 + zeta) x1 (+ s) {<=, =} 1 with |zeta| <= 1.
UncertainLP PitfallModel(bool slack_equality) {
  UncertainLP m;
  const int x1 = m.AddVariable("x1", -kInfinity, kInfinity);
  m.objective.sense = ObjectiveSense::kMaximize;
  m.objective.c[x1] = 1.0;
  m.sets["Z"] = MakeBoxRadius({1.0});
  UncertainConstraint c;
  c.name = "pitfall";
  c.a[x1] = 2.0;
  c.p[x1][0] = 1.0;
  c.rhs = 1.0;
  c.set = "Z";
  if (slack_equality) {
    const int s = m.AddVariable("s", 0.0, kInfinity);
    c.a[s] = 1.0;
    c.sense = RowSense::kEqual;
    c.allow_uncertain_equality = true;
  }
  m.constraints.push_back(c);
  return m;
}

double SolveRcObjective(const UncertainLP& m, Vector* x = nullptr) {
  const ReformulationArtifact art = ReformulateRc(m);
  const SolveResult r = SolveDeterministic(art.milp);
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  if (x) *x = OriginalValues(art, r);
  return r.objective;
}

TEST(ReformulateRc, InequalityPitfallGivesOneThird) {
  EXPECT_NEAR(SolveRcObjective(PitfallModel(false)), 1.0 / 3.0, 1e-9);
}

TEST(ReformulateRc, SlackEqualityCollapsesToZero) {
  UncertainLP m = PitfallModel(true);
  Vector x;
  EXPECT_NEAR(SolveRcObjective(m, &x), 0.0, 1e-9);
  EXPECT_NEAR(x[1], 1.0, 1e-9);
  m.constraints[0].allow_uncertain_equality = false;
  EXPECT_THROW(ReformulateRc(m), Error);
}

TEST(ReformulateRc, TwoPointHullGivesTwoEqualities) {
  UncertainLP m = PitfallModel(true);
  m.sets["Z"] = MakeScenarioHull({{-1.0}, {1.0}});
  const ReformulationArtifact art = ReformulateRc(m);
  int scenario_rows = 0;
  for (const Provenance& p : art.rows) scenario_rows += p.role == "scenario";
  EXPECT_EQ(scenario_rows, 4);
  Vector x;
  EXPECT_NEAR(SolveRcObjective(m, &x), 0.0, 1e-9);
  EXPECT_NEAR(x[1], 1.0 - 2.0 * x[0], 1e-9);
}

TEST(ReformulateRc, ZeroFactorKeepsCertainOptimum) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    UncertainLP m = testing::RandomRobustLp(rng, SetKind::kBox, 4, 2, 3);
    for (auto& c : m.constraints) {
      c.p.clear();
      c.rhs_factor.clear();
    }
    const SolveResult nominal = SolveLp(Instantiate(m));
    EXPECT_NEAR(SolveRcObjective(m), nominal.objective, 1e-9);
  }
}

TEST(ReformulateRc, BallIsDeclined) {
  UncertainLP m = PitfallModel(false);
  m.sets["Z"] = MakeBall({0.0}, 1.0);
  try {
    ReformulateRc(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("adversarial"), std::string::npos);
  }
}

TEST(ReformulateRc, UnboundedPolyhedronIsRejected) {
  UncertainLP m = PitfallModel(false);
  m.sets["Z"] = MakePolyhedral(1, {{1.0}}, {1.0});
  EXPECT_THROW(ReformulateRc(m), Error);
}

class RcVersusAdversarial : public ::testing::TestWithParam<SetKind> {};

TEST_P(RcVersusAdversarial, OptimaAgree) {
  std::mt19937_64 rng(100 + static_cast<int>(GetParam()));
  std::uniform_int_distribution<int> nd(1, 6), ld(1, 4), md(1, 4);
  for (int t = 0; t < 200; ++t) {
    const UncertainLP m = testing::RandomRobustLp(rng, GetParam(), nd(rng), ld(rng), md(rng));
    const double rc = SolveRcObjective(m);
    const AdversarialResult adv = SolveAdversarial(m);
    ASSERT_TRUE(adv.converged);
    EXPECT_NEAR(rc, adv.result.objective, 1e-6) << t;
  }
}

INSTANTIATE_TEST_SUITE_P(Kinds, RcVersusAdversarial,
                         ::testing::Values(SetKind::kBox, SetKind::kBudgeted,
                                           SetKind::kPolyhedral));

TEST(ReformulateRc, PolyhedralDualCertificate) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    const UncertainLP m = testing::RandomRobustLp(rng, SetKind::kPolyhedral, 3, 3, 2);
    const ReformulationArtifact art = ReformulateRc(m);
    const SolveResult r = SolveDeterministic(art.milp);
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    const UncertaintySet& s = m.sets.at("Z");
    const auto [d, q] = PolyhedralForm(s);
    for (int i = 0; i < static_cast<int>(m.constraints.size()); ++i) {
      std::vector<double> w;
      for (std::size_t j = 0; j < art.vars.size(); ++j) {
        if (art.vars[j].source == i && art.vars[j].role == "polyhedral-dual") {
          w.push_back(r.values[j]);
        }
      }
      ASSERT_EQ(w.size(), d.size());
      const UncertainConstraint& c = m.constraints[i];
      const Vector g = c.UncertainCoefficients(r.values, s.dim);
      for (int k = 0; k < s.dim; ++k) {
        double dtw = 0.0;
        for (std::size_t row = 0; row < d.size(); ++row) dtw += d[row][k] * w[row];
        EXPECT_NEAR(dtw, -g[k], 1e-7);
      }
      double qw = 0.0;
      for (std::size_t row = 0; row < d.size(); ++row) {
        EXPECT_GE(w[row], -1e-9);
        qw += q[row] * w[row];
      }
      EXPECT_LE(c.NominalActivity(r.values) + qw, c.rhs + 1e-7);
    }
  }
}

TEST(ReformulateRc, SupportConsistencyUnderSampling) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (SetKind kind : {SetKind::kBox, SetKind::kBudgeted}) {
    for (int t = 0; t < 5; ++t) {
      const UncertainLP m = testing::RandomRobustLp(rng, kind, 3, 3, 2);
      const ReformulationArtifact art = ReformulateRc(m);
      const SolveResult r = SolveDeterministic(art.milp);
      ASSERT_EQ(r.status, SolveStatus::kOptimal);
      const UncertaintySet& s = m.sets.at("Z");
      for (int i = 0; i < static_cast<int>(m.constraints.size()); ++i) {
        double reform = 0.0;
        for (std::size_t row = 0; row < art.rows.size(); ++row) {
          if (art.rows[row].source == i && art.rows[row].role == "robust-main") {
            reform = art.milp.RowActivity(static_cast<int>(row), r.values) -
                     art.milp.rows[row].rhs;
          }
        }
        int drawn = 0;
        while (drawn < 10000) {
          Vector z(s.dim);
          for (double& v : z) v = u(rng);
          if (!Contains(s, z)) continue;
          ++drawn;
          EXPECT_LE(m.constraints[i].Residual(r.values, z), reform + 1e-6);
        }
      }
    }
  }
}

TEST(ReformulateRc, BudgetEqualToDimensionMatchesBox) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    UncertainLP m = testing::RandomRobustLp(rng, SetKind::kBox, 4, 3, 3);
    m.sets["Z"] = MakeBudgeted(3, 3.0);
    const double budget = SolveRcObjective(m);
    m.sets["Z"] = MakeBoxRadius({1.0, 1.0, 1.0});
    EXPECT_NEAR(budget, SolveRcObjective(m), 1e-8);
  }
}

TEST(ReformulateRc, SlicedSetFoldsPinnedCoordinates) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    UncertainLP m = testing::RandomRobustLp(rng, SetKind::kPolyhedral, 3, 3, 2);
    const UncertaintySet full = m.sets.at("Z");
    const Vector nominal = NominalPoint(full);
    m.sets["Z"] = Slice(full, {1}, {nominal[1]});
    const double rc = SolveRcObjective(m);
    const AdversarialResult adv = SolveAdversarial(m);
    ASSERT_TRUE(adv.converged);
    EXPECT_NEAR(rc, adv.result.objective, 1e-6);
  }
}

TEST(ExpandAarc, ZeroInfoBaseCollapsesToRc) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const UncertainLP m =
        testing::RandomTwoStage(rng, SetKind::kBox, 2, 2, 2, 3, Matrix{{0.0, 0.0}});
    UncertainLP stat = m;
    for (auto& v : stat.variables) v.adjustable.reset();
    const AarcExpansion e = ExpandAarc(m);
    EXPECT_NEAR(SolveRcObjective(e.model), SolveRcObjective(stat), 1e-8);
  }
}

TEST(ExpandAarc, AdjustableNeverWorseAndRuleTwoMoreConservative) {
  std::mt19937_64 rng(4);
  for (SetKind kind : {SetKind::kBox, SetKind::kBudgeted, SetKind::kPolyhedral}) {
    for (int t = 0; t < 40; ++t) {
      std::mt19937_64 fork = rng;
      const UncertainLP full = testing::RandomTwoStage(rng, kind, 2, 2, 3, 3, {});
      // Same instance with a rank-one information base.
      const UncertainLP proj = testing::RandomTwoStage(fork, kind, 2, 2, 3, 3, {{1.0, 2.0, -1.0}});
      UncertainLP stat = full;
      for (auto& v : stat.variables) v.adjustable.reset();
      const double rc = SolveRcObjective(stat);
      const double aarc1 = SolveRcObjective(ExpandAarc(full).model);
      const double aarc2 = SolveRcObjective(ExpandAarc(proj).model);
      EXPECT_LE(aarc1, rc + 1e-8);
      EXPECT_LE(aarc2, rc + 1e-8);
      EXPECT_LE(aarc1, aarc2 + 1e-8);
    }
  }
}

TEST(ExpandAarc, FixedRecourseViolationIsRejected) {
  UncertainLP m = PitfallModel(false);
  m.variables[0].adjustable = AdjustableRule{};
  EXPECT_THROW(ExpandAarc(m), Error);
}

// Two periods, demand P zeta with scenarios (10,10), (10,11), (11,11) as the
// columns of P and zeta in the standard simplex. Period-two order y depends on
// period-one demand only.
UncertainLP DemandModel(const Matrix& info_base) {
  UncertainLP m;
  const int x = m.AddVariable("x", 0.0, 30.0);
  const int y = m.AddVariable("y", 0.0, 30.0);
  const int c = m.AddVariable("cost", -kInfinity, kInfinity);
  AdjustableRule r;
  r.info_base = info_base;
  r.set = "Z";
  m.variables[y].adjustable = r;
  m.sets["Z"] = MakePolyhedral(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {-1, -1, -1}},
                               {0, 0, 0, -1, 1});
  const Matrix p = {{10, 10, 11}, {10, 11, 11}};
  auto add = [&](std::map<int, double> a, FactorMap pz, std::map<int, double> rz, RowSense s,
                 double rhs) {
    UncertainConstraint k;
    k.name = "r" + std::to_string(m.constraints.size());
    k.a = std::move(a);
    k.p = std::move(pz);
    k.rhs_factor = std::move(rz);
    k.sense = s;
    k.rhs = rhs;
    k.set = "Z";
    m.constraints.push_back(k);
  };
  // Stock after period one x - d1 >= 0 and total x + y - d1 - d2 >= 0.
  add({{x, 1.0}}, {}, {{0, p[0][0]}, {1, p[0][1]}, {2, p[0][2]}}, RowSense::kGreaterEqual, 0.0);
  add({{x, 1.0}, {y, 1.0}}, {},
      {{0, p[0][0] + p[1][0]}, {1, p[0][1] + p[1][1]}, {2, p[0][2] + p[1][2]}},
      RowSense::kGreaterEqual, 0.0);
  // Holding cost on the final stock plus ordering cost.
  add({{c, 1.0}, {x, -2.0}, {y, -1.5}}, {}, {}, RowSense::kGreaterEqual, 0.0);
  add({{c, 1.0}, {x, -3.0}, {y, -1.0}}, {},
      {{0, -(p[0][0] + p[1][0])}, {1, -(p[0][1] + p[1][1])}, {2, -(p[0][2] + p[1][2])}},
      RowSense::kGreaterEqual, 0.0);
  m.objective.c[c] = 1.0;
  return m;
}

TEST(ExpandAarc, InjectiveInformationGivesEqualOptima) {
  const Matrix p = {{10, 10, 11}, {10, 11, 11}};
  const double rule1 = SolveRcObjective(ExpandAarc(DemandModel({{1.0, 1.0, 0.0}})).model);
  const double rule2 = SolveRcObjective(ExpandAarc(DemandModel(FactorInfoBase(p, {0}))).model);
  EXPECT_NEAR(rule1, rule2, 1e-7);
  const double full = SolveRcObjective(ExpandAarc(DemandModel({})).model);
  EXPECT_LE(full, rule1 + 1e-9);
}

TEST(ExpandAarc, EliminationMatchesFullyAdjustableVariable) {
  // zeta1 x1 + x2 + x3 = 1 with x2 adjustable on all of zeta, and
  // x1 + x2 + zeta2 x3 <= 5 plus random side constraints.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  for (int t = 0; t < 20; ++t) {
    UncertainLP m;
    m.AddVariable("x1", 0.0, 10.0);
    m.AddVariable("x2", -kInfinity, kInfinity);
    m.AddVariable("x3", 0.0, 10.0);
    m.sets["Z"] = MakeBox({-u(rng), -u(rng)}, {u(rng), u(rng)});
    m.objective.sense = ObjectiveSense::kMaximize;
    m.objective.c = {{0, u(rng)}, {2, u(rng)}};
    UncertainConstraint eq;
    eq.name = "eq";
    eq.a = {{1, 1.0}, {2, 1.0}};
    eq.p[0][0] = 1.0;
    eq.sense = RowSense::kEqual;
    eq.rhs = 1.0;
    eq.set = "Z";
    eq.allow_uncertain_equality = true;
    UncertainConstraint le;
    le.name = "le";
    le.a = {{0, u(rng)}, {1, 1.0}};
    le.p[2][1] = u(rng);
    le.rhs = 5.0;
    le.set = "Z";
    UncertainConstraint side;
    side.name = "side";
    side.a = {{0, 1.0}, {2, u(rng)}};
    side.rhs = 4.0 + u(rng);
    m.constraints = {eq, le, side};
    const double elim = SolveRcObjective(EliminateEquality(m, 0, 1));
    UncertainLP adj = m;
    adj.variables[1].adjustable = AdjustableRule{{}, {}, "Z"};
    const double aarc = SolveRcObjective(ExpandAarc(adj).model);
    EXPECT_NEAR(elim, aarc, 1e-7) << t;
  }
}

// Random min-max objective problems for Pareto re-optimization.
UncertainLP RandomUncertainObjective(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  UncertainLP m;
  for (int j = 0; j < 3; ++j) m.AddVariable("x" + std::to_string(j), 0.0, 4.0);
  m.sets["Z"] = MakeBoxRadius({1.0, 1.0});
  m.objective.sense = ObjectiveSense::kMaximize;
  m.objective.set = "Z";
  for (int j = 0; j < 3; ++j) {
    m.objective.c[j] = 1.0;
    // Only x0 carries uncertainty so that ties among worst-case optima exist.
    if (j == 0) m.objective.factor[j][0] = 0.5 + 0.5 * u(rng);
  }
  UncertainConstraint c;
  c.name = "cap";
  c.a = {{0, 1.0}, {1, 1.0}, {2, 1.0}};
  c.rhs = 4.0 + u(rng);
  m.constraints.push_back(c);
  return m;
}

TEST(ParetoReoptimize, PreservesWorstCaseAndImprovesNominal) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const UncertainLP m = RandomUncertainObjective(rng);
    const UncertainLP epi = EpigraphObjective(m);
    Vector x;
    const double t_star = SolveRcObjective(epi, &x);
    x.resize(m.num_variables());
    const ParetoResult p = ParetoReoptimize(m, t_star, x, {0.5, 0.0});
    ASSERT_EQ(p.result.status, SolveStatus::kOptimal);
    EXPECT_NEAR(p.worst_case, t_star, 1e-7);
    EXPECT_GE(p.nominal_after, p.nominal_before - 1e-9);
  }
}

TEST(ParetoReoptimize, UniqueOptimumIsUnchanged) {
  UncertainLP m = PitfallModel(false);
  Vector x;
  const double t_star = SolveRcObjective(m, &x);
  const ParetoResult p = ParetoReoptimize(m, t_star, x);
  EXPECT_NEAR(p.result.values[0], x[0], 1e-9);
}

TEST(SolveRobustFractional, ConstantRatio) {
  UncertainLP base;
  base.AddVariable("x", 0.0, 1.0);
  base.sets["Z"] = MakeBoxRadius({1.0});
  AffineForm num, den;
  num.constant = 3.0;
  den.constant = 4.0;
  const FractionalResult r = SolveRobustFractional(base, num, den, "Z", 1e-9);
  EXPECT_NEAR(r.lambda, 0.75, 1e-8);
}

TEST(SolveRobustFractional, MatchesGridSearch) {
  // min_x max_zeta ((1 + 0.5 zeta) x + 2) / (x + 1 + 0.3 zeta), x in [0, 3].
  UncertainLP base;
  base.AddVariable("x", 0.0, 3.0);
  base.sets["Z"] = MakeBoxRadius({1.0});
  AffineForm num, den;
  num.a[0] = 1.0;
  num.p[0][0] = 0.5;
  num.constant = 2.0;
  den.a[0] = 1.0;
  den.constant = 1.0;
  den.zeta[0] = 0.3;
  const FractionalResult r = SolveRobustFractional(base, num, den, "Z", 1e-9);
  double best = kInfinity;
  for (int i = 0; i <= 3000; ++i) {
    const double x = 3.0 * i / 3000.0;
    double worst = -kInfinity;
    for (int k = 0; k <= 400; ++k) {
      const double z = -1.0 + 2.0 * k / 400.0;
      worst = std::max(worst, ((1 + 0.5 * z) * x + 2) / (x + 1 + 0.3 * z));
    }
    best = std::min(best, worst);
  }
  EXPECT_NEAR(r.lambda, best, 1e-4);
  double prev = kInfinity;
  for (double lam = 0.0; lam <= 3.0; lam += 0.25) {
    const double g = ParametricValue(base, num, den, "Z", lam);
    EXPECT_LE(g, prev + 1e-12);
    prev = g;
  }
}

TEST(SolveRobustFractional, NonPositiveDenominatorIsRejected) {
  UncertainLP base;
  base.AddVariable("x", 0.0, 3.0);
  base.sets["Z"] = MakeBoxRadius({1.0});
  AffineForm num, den;
  num.constant = 1.0;
  den.a[0] = 1.0;
  den.zeta[0] = 0.5;
  EXPECT_THROW(SolveRobustFractional(base, num, den, "Z"), Error);
}

}  // namespace
}  // namespace robopt

// Copyright 2026 The rpsdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rpsdyn/analysis.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rpsdyn/dynamics.hpp"
#include "rpsdyn/game.hpp"

namespace rpsdyn {
namespace {

using Q = Rational;
using Vec = std::vector<double>;

template <typename S>
Trajectory<S> Simulate(Algorithm algorithm, const RpsMatrix<S>& a, SimplexPoint<S> x0,
                       std::int64_t horizon, S eta = S(1),
                       TiebreakRule tiebreak = TiebreakRule::Lexicographic()) {
  LearnerConfig<S> c;
  c.algorithm = algorithm;
  c.eta = eta;
  c.horizon = horizon;
  c.x0 = std::move(x0);
  c.tiebreak = tiebreak;
  return Run(c, a);
}

Trajectory<double> ConstantTrajectory(std::int64_t horizon) {
  Trajectory<double> traj;
  traj.matrix = MakeUnweightedRps<double>(3);
  traj.config.algorithm = Algorithm::kFictitiousPlay;
  traj.config.horizon = horizon;
  traj.config.x0 = SimplexPoint<double>::Vertex(3, 0);
  for (std::int64_t t = 0; t <= horizon; ++t) {
    traj.xs.push_back(SimplexPoint<double>::Vertex(3, 0));
    traj.supports.push_back(traj.xs.back().Support());
  }
  for (std::int64_t t = 0; t <= horizon + 1; ++t) {
    traj.ys.push_back(Vec(3, 0.0));
    traj.energies.push_back(0.0);
  }
  return traj;
}

const SimplexPoint<double> kFig1cX0({0.05, 0.35, 0.39, 0.21});

double RelErr(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(ClassifyRegion, Examples) {
  auto v = ClassifyRegion(Vec{3, 0, 0});
  EXPECT_EQ(v.kind, RegionKind::kVertex);
  EXPECT_EQ(v.index, 0);
  auto e = ClassifyRegion(Vec{1.2, 1.0, -2});
  EXPECT_EQ(e.kind, RegionKind::kEdge);
  EXPECT_EQ(e.index, 0);
  EXPECT_EQ(ClassifyRegion(Vec{0, 0, 0}).kind, RegionKind::kInterior);
  EXPECT_EQ(ClassifyRegion(Vec{1.0, -2, 1.2}).index, 2);
  EXPECT_EQ(ClassifyRegion(Vec{1, 0, 1, -5}).kind, RegionKind::kOtherBoundary);
  EXPECT_EQ(RegionName(v), "P1");
  EXPECT_EQ(RegionName(e), "P1~");
}

TEST(ClassifyRegion, AgreesWithPrimal) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 3 + trial % 4;
    Vec y(n);
    for (auto& v : y) v = u(rng);
    RegionTag tag = ClassifyRegion(y);
    auto x = GdPrimal(y);
    std::optional<int> vertex = x.VertexIndex();
    SupportSet s = x.Support();
    EXPECT_EQ(tag.kind == RegionKind::kVertex, vertex.has_value());
    if (tag.kind == RegionKind::kVertex) {
      EXPECT_EQ(tag.index, *vertex);
    }
    bool adjacent_pair = s.size() == 2 && (s.indices[1] == s.indices[0] + 1 ||
                                           (s.indices[0] == 0 && s.indices[1] == n - 1));
    EXPECT_EQ(tag.kind == RegionKind::kEdge, adjacent_pair && n > 2);
    if (tag.kind == RegionKind::kEdge) {
      EXPECT_TRUE(s.Contains(tag.index));
      EXPECT_TRUE(s.Contains((tag.index + 1) % n));
    }
    EXPECT_EQ(tag.kind == RegionKind::kInterior, s.size() == n);
  }
}

TEST(Regret, Examples) {
  auto a = MakeUnweightedRps<double>(3);
  auto t0 = Simulate(Algorithm::kFictitiousPlay, a, SimplexPoint<double>::Vertex(3, 0), 0);
  EXPECT_EQ(Regret(t0).regret_total, 2.0);

  auto aq = MakeUnweightedRps<Q>(3);
  for (std::int64_t horizon : {1, 7, 50, 500}) {
    auto traj = Simulate(Algorithm::kFictitiousPlay, aq, SimplexPoint<Q>::Vertex(3, 0), horizon,
                         Q(1), TiebreakRule::Tournament());
    EXPECT_EQ(Regret(traj).regret_total, Q(2));
  }
}

TEST(Regret, Identities) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> w(0.5, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 3;
    Vec weights(n);
    for (auto& v : weights) v = w(rng);
    auto a = MakeRps(weights);
    Vec x0(n, 1.0 / n);
    const bool fp = trial % 2 == 0;
    auto traj = Simulate(fp ? Algorithm::kFictitiousPlay : Algorithm::kGradientDescent, a,
                         SimplexPoint<double>(x0), 300 + trial, fp ? 1.0 : 0.1 + 0.3 * trial);
    auto report = Regret(traj);
    const double horizon = traj.horizon();
    if (fp) {
      EXPECT_LE(RelErr(report.regret_total, 2.0 * EnergyFp(traj.ys.back())), 1e-9);
      EXPECT_EQ(report.regret_by_energy, 2.0 * EnergyFp(traj.ys.back()));
    } else {
      ASSERT_TRUE(report.regret_upper_ftrl.has_value());
      EXPECT_LE(report.regret_total, *report.regret_upper_ftrl + 1e-9);
    }
    EXPECT_LE(RelErr(report.duality_gap_avg * horizon, report.regret_total), 1e-9);
    EXPECT_LE(RelErr(RegretSummedPayoff(traj), report.regret_total), 1e-9);
  }
}

TEST(Regret, CurveIsLogSpacedAndEndsAtHorizon) {
  auto traj = Simulate(Algorithm::kFictitiousPlay, MakeUnweightedRps<double>(3),
                       SimplexPoint<double>::Vertex(3, 0), 1000);
  auto curve = Regret(traj).per_T_curve;
  ASSERT_GE(curve.size(), 3u);
  EXPECT_EQ(curve.back().first, 1000);
  for (std::size_t k = 1; k < curve.size(); ++k) EXPECT_GT(curve[k].first, curve[k - 1].first);
  for (const auto& [t, reg] : curve) EXPECT_EQ(reg, RegretAt(traj, t));
}

TEST(FitRegretSlope, Examples) {
  EXPECT_NEAR(FitRegretSlope({{10, 2 * std::sqrt(10.0)}, {100, 20.0}, {1000, 2 * std::sqrt(1000.0)}})
                  .slope,
              0.5, 1e-9);
  EXPECT_NEAR(FitRegretSlope({{10, 2.0}, {100, 2.0}, {1000, 2.0}}).slope, 0.0, 1e-9);
  EXPECT_NEAR(FitRegretSlope({{10, 10.0}, {100, 100.0}, {1000, 1000.0}}).slope, 1.0, 1e-9);
}

TEST(FitRegretSlope, Errors) {
  try {
    FitRegretSlope({{10, 2.0}, {100, 0.0}, {1000, 2.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonpositiveRegret);
  }
  EXPECT_THROW(FitRegretSlope({{10, 2.0}, {100, 3.0}}), Error);
}

TEST(DetectPhases, FpCyclesFromFirstVertex) {
  auto traj = Simulate(Algorithm::kFictitiousPlay, MakeUnweightedRps<Q>(3),
                       SimplexPoint<Q>::Vertex(3, 0), 12);
  auto summary = DetectPhases(traj);
  ASSERT_GE(summary.K(), 3);
  EXPECT_EQ(summary.t0, 1);
  auto vertices = summary.Vertices();
  for (int k = 0; k < summary.K(); ++k) EXPECT_EQ(vertices[k], (1 + k) % 3);
  EXPECT_TRUE(VerifyCycling(summary, 3).pass);
}

TEST(DetectPhases, ConstantTrajectoryIsOnePhase) {
  auto summary = DetectPhases(ConstantTrajectory(25));
  ASSERT_EQ(summary.K(), 1);
  EXPECT_EQ(summary.phases[0].length, 25);
  EXPECT_EQ(summary.phases[0].vertex, 0);
}

TEST(DetectPhases, GdLargeStepCycles) {
  auto traj = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(4), kFig1cX0, 3000,
                       10.0);
  auto summary = DetectPhases(traj);
  EXPECT_GE(summary.K(), 8);
  EXPECT_TRUE(VerifyCycling(summary, 4).pass);
}

TEST(DetectPhases, PhasesTileTheHorizon) {
  for (auto rule : {StartRule::kFirstVertex, StartRule::kEnergyIncrease}) {
    for (int n : {3, 4, 5}) {
      auto traj = Simulate(Algorithm::kFictitiousPlay, MakeRps<double>(Vec(n, 1.0)),
                           SimplexPoint<double>::Uniform(n), 2000);
      auto summary = DetectPhases(traj, rule);
      ASSERT_GE(summary.K(), 1);
      std::int64_t t = summary.t0;
      for (const auto& p : summary.phases) {
        EXPECT_EQ(p.start, t);
        EXPECT_GE(p.length, 1);
        t += p.length;
      }
      EXPECT_EQ(t, 2001);
      for (int k = 1; k < summary.K(); ++k) {
        EXPECT_EQ(summary.phases[k].energy_increased,
                  summary.phases[k].start_energy > summary.phases[k - 1].start_energy);
      }
    }
  }
}

TEST(DetectPhases, EnergyIncreaseRuleStartsAfterFirstIncrease) {
  auto traj = Simulate(Algorithm::kFictitiousPlay, MakeUnweightedRps<double>(4),
                       SimplexPoint<double>::Vertex(4, 0), 500);
  auto summary = DetectPhases(traj, StartRule::kEnergyIncrease);
  ASSERT_GT(summary.t0, 1);
  EXPECT_GT(traj.energies[summary.t0], traj.energies[1]);
  EXPECT_TRUE(VerifyCycling(summary, 4).pass);
}

TEST(DetectPhases, NoVertexReached) {
  auto traj = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(3),
                       SimplexPoint<double>({0.3, 0.4, 0.3}), 20, 0.01);
  try {
    DetectPhases(traj);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoVertexReached);
  }
}

TEST(VerifyCycling, Examples) {
  EXPECT_TRUE(VerifyCycling(std::vector<int>{1, 2, 0, 1, 2}, 3).pass);
  auto bad = VerifyCycling(std::vector<int>{1, 0}, 3);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.first_violation, 1);
}

TEST(VerifyCycling, AnyFpTiebreakAfterEnergyIncrease) {
  for (auto rule : {TiebreakRule::Lexicographic(), TiebreakRule::Tournament(),
                    TiebreakRule::PreferSwitch(), TiebreakRule::PreferIncumbent(),
                    TiebreakRule::RandomSeeded(7)}) {
    for (int n : {3, 4, 5, 6}) {
      auto traj = Simulate(Algorithm::kFictitiousPlay, MakeUnweightedRps<double>(n),
                           SimplexPoint<double>::Vertex(n, 0), 3000, 1.0, rule);
      auto summary = DetectPhases(traj, StartRule::kEnergyIncrease);
      EXPECT_TRUE(VerifyCycling(summary, n).pass) << static_cast<int>(rule.kind) << " n=" << n;
    }
  }
}

TEST(EnergyGrowthLedger, FpStaysAreFlatAndSwitchesBounded) {
  auto a = MakeRps<double>({1, 2.5, 0.7, 1.9});
  auto traj = Simulate(Algorithm::kFictitiousPlay, a, SimplexPoint<double>::Uniform(4), 2000);
  auto ledger = EnergyGrowthLedger(traj);
  EXPECT_EQ(ledger.size(), 1999u);
  for (const auto& e : ledger) {
    ASSERT_TRUE(e.classified());
    bool stay = traj.xs[e.t] == traj.xs[e.t + 1];
    EXPECT_EQ(e.transition, stay ? TransitionClass::kFpStay : TransitionClass::kFpSwitch);
    if (stay) {
      EXPECT_LE(std::abs(e.delta), 1e-12);
    }
    EXPECT_TRUE(e.within_bound);
  }
  auto tally = TallyLedger(ledger);
  EXPECT_EQ(tally.violations, 0);
  EXPECT_EQ(tally.unclassified, 0);
}

TEST(EnergyGrowthLedger, GdCases) {
  auto traj = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(4), kFig1cX0, 5000,
                       6.0);
  auto ledger = EnergyGrowthLedger(traj);
  EXPECT_EQ(ledger.size(), 5000u);
  int stay = 0, next = 0;
  for (const auto& e : ledger) {
    if (e.transition == TransitionClass::kGdVertexStay) {
      ++stay;
      EXPECT_LE(std::abs(e.delta), 1e-12);
    } else if (e.transition == TransitionClass::kGdVertexNext) {
      ++next;
      EXPECT_GT(e.delta, 1.0 - 1e-9);
      EXPECT_LT(e.delta, 6.0 + 1e-9);
    }
    if (!e.ambiguous) {
      EXPECT_TRUE(e.within_bound) << "t=" << e.t;
    }
  }
  EXPECT_GT(stay, 0);
  EXPECT_GT(next, 0);
  EXPECT_EQ(TallyLedger(ledger).violations, 0);
}

TEST(EnergyGrowthLedger, RationalMatchesFloatClasses) {
  auto tq = Simulate(Algorithm::kGradientDescent, MakeRps<Q>({Q(1), Q(2), Q(3)}),
                     SimplexPoint<Q>({Q(3, 10), Q(2, 5), Q(3, 10)}), 500, Q(10));
  auto lq = EnergyGrowthLedger(tq);
  for (const auto& e : lq) {
    EXPECT_FALSE(e.ambiguous);
    EXPECT_TRUE(e.classified());
    EXPECT_TRUE(e.within_bound);
  }
}

TEST(PhaseLengthCheck, FpHasPositiveSlope) {
  auto traj = Simulate(Algorithm::kFictitiousPlay, MakeUnweightedRps<double>(3),
                       SimplexPoint<double>::Vertex(3, 0), 10000);
  auto fit = PhaseLengthCheck(DetectPhases(traj, StartRule::kEnergyIncrease));
  EXPECT_FALSE(fit.degenerate);
  EXPECT_GT(fit.alpha, 0.0);
  EXPECT_GE(fit.beta, 0.0);
  EXPECT_GE(fit.min_residual, -1e-9);
  EXPECT_NEAR(fit.min_residual, 0.0, 1e-9);
}

TEST(PhaseLengthCheck, GdLargeStepHasPositiveSlope) {
  auto traj = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(4), kFig1cX0, 10000,
                       10.0);
  auto fit = PhaseLengthCheck(DetectPhases(traj));
  EXPECT_TRUE(fit.positive);
  EXPECT_GT(fit.alpha, 0.0);
}

TEST(PhaseLengthCheck, EqualEnergiesAreDegenerate) {
  auto traj = Simulate(Algorithm::kFictitiousPlay, MakeUnweightedRps<Q>(3),
                       SimplexPoint<Q>::Vertex(3, 0), 200, Q(1), TiebreakRule::Tournament());
  auto fit = PhaseLengthCheck(DetectPhases(traj));
  EXPECT_TRUE(fit.degenerate);
  EXPECT_TRUE(std::isinf(fit.alpha));
}

TEST(PhaseLengthCheck, TooFewPhases) {
  try {
    PhaseLengthCheck(DetectPhases(ConstantTrajectory(10)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewPhases);
  }
}

TEST(CheckDualSubspace, Examples) {
  auto aq = MakeRps<Q>({Q(1), Q(2), Q(3)});
  auto xq = InteriorNash(aq).point;
  auto tq = Simulate(Algorithm::kGradientDescent, aq, SimplexPoint<Q>({Q(3, 10), Q(2, 5), Q(3, 10)}),
                     200, Q(10));
  EXPECT_EQ(CheckDualSubspace(tq, xq), Q(0));

  auto a = MakeRps<double>({1, 2, 3});
  auto x = InteriorNash(a).point;
  auto t0 = Simulate(Algorithm::kGradientDescent, a, SimplexPoint<double>::Uniform(3), 0, 0.5);
  t0.ys.resize(1);
  EXPECT_EQ(CheckDualSubspace(t0, x), 0.0);

  auto t = Simulate(Algorithm::kGradientDescent, a, SimplexPoint<double>({0.3, 0.4, 0.3}), 10000,
                    0.3);
  EXPECT_LE(CheckDualSubspace(t, x), 1e-8 * 10000);
  EXPECT_THROW(CheckDualSubspace(t, SimplexPoint<double>::Uniform(4)), Error);
}

TEST(BoundaryInvarianceCheck, Examples) {
  auto large = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(4), kFig1cX0, 500,
                        10.0);
  auto r1 = BoundaryInvarianceCheck(large);
  EXPECT_EQ(r1.first_boundary_t, 1);
  EXPECT_FALSE(r1.ever_returns_interior);
  EXPECT_TRUE(r1.threshold_property_holds);

  auto small = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(3),
                        SimplexPoint<double>({0.3, 0.4, 0.3}), 100, 0.1);
  auto r2 = BoundaryInvarianceCheck(small);
  EXPECT_FALSE(r2.first_boundary_t.has_value());
  EXPECT_FALSE(r2.ever_returns_interior);
  EXPECT_TRUE(r2.threshold_property_holds);

  auto mid = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(4),
                      SimplexPoint<double>({0.2, 0.2, 0.25, 0.35}), 100, 0.3);
  auto r3 = BoundaryInvarianceCheck(mid);
  EXPECT_TRUE(r3.first_boundary_t.has_value());
  EXPECT_TRUE(r3.threshold_property_holds);
}

TEST(SmallStepsizeEnergyCheck, Examples) {
  const std::int64_t horizon = 10000;
  auto interior = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(3),
                           SimplexPoint<double>({0.3, 0.4, 0.3}), horizon,
                           1.0 / std::sqrt(static_cast<double>(horizon)));
  auto r1 = SmallStepsizeEnergyCheck(interior);
  EXPECT_EQ(r1.status, CheckStatus::kPass);
  EXPECT_EQ(r1.energy_bound, 1.5);
  EXPECT_LE(r1.final_energy, 1.5);

  auto boundary = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(4), kFig1cX0,
                           50, 10.0);
  EXPECT_EQ(SmallStepsizeEnergyCheck(boundary).status, CheckStatus::kNotApplicable);

  auto single = Simulate(Algorithm::kGradientDescent, MakeUnweightedRps<double>(3),
                         SimplexPoint<double>({0.3, 0.4, 0.3}), 0, 1.0);
  EXPECT_EQ(SmallStepsizeEnergyCheck(single).status, CheckStatus::kPass);
}

TEST(WholeTrajectory, ResidualsAndMonotonicity) {
  auto traj = Simulate(Algorithm::kGradientDescent, MakeRps<double>({1, 3, 2}),
                       SimplexPoint<double>({0.2, 0.5, 0.3}), 3000, 2.0);
  EXPECT_LE(DualConsistencyResidual(traj), 1e-12);
  EXPECT_FALSE(FirstEnergyDecrease(traj).has_value());
  auto broken = traj;
  broken.energies[10] += 1.0;
  EXPECT_EQ(FirstEnergyDecrease(broken), 10);
}

}  // namespace
}  // namespace rpsdyn

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

#include "rpsdyn/dynamics.hpp"

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

namespace rpsdyn {
namespace {

using Q = Rational;
using Vec = std::vector<double>;

SimplexPoint<double> RandomSimplex(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  Vec x(n);
  double s = 0;
  for (auto& v : x) s += (v = e(rng));
  for (auto& v : x) v /= s;
  double rest = 1.0;
  for (int i = 0; i + 1 < n; ++i) rest -= x[i];
  x[n - 1] = std::max(0.0, rest);
  return SimplexPoint<double>::Trusted(x);
}

TEST(DualStep, Examples) {
  auto a = MakeUnweightedRps<double>(3);
  auto e1 = SimplexPoint<double>::Vertex(3, 0);
  EXPECT_EQ(DualStep(Vec(3, 0.0), e1, a, 1.0), (Vec{0, 1, -1}));
  EXPECT_EQ(DualStep(Vec(3, 0.0), e1, a, 0.5), (Vec{0, 0.5, -0.5}));
  EXPECT_THROW(DualStep(Vec(4, 0.0), e1, a, 1.0), Error);
}

TEST(DualStep, OrthogonalToIterate) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  auto a = MakeRps<double>({1, 3, 2, 0.5, 4});
  for (int trial = 0; trial < 200; ++trial) {
    Vec y(5);
    for (auto& v : y) v = g(rng);
    auto x = RandomSimplex(rng, 5);
    auto y2 = DualStep(y, x, a, 0.7);
    double dot = 0;
    for (int i = 0; i < 5; ++i) dot += x[i] * (y2[i] - y[i]);
    EXPECT_NEAR(dot, 0.0, 1e-14);
  }
}

TEST(FpPrimal, Examples) {
  for (auto rule : {TiebreakRule::Lexicographic(), TiebreakRule::Tournament(),
                    TiebreakRule::PreferSwitch(), TiebreakRule::RandomSeeded(3)}) {
    EXPECT_EQ(FpPrimal(Vec{0, 1, -1}, rule, 0), 1);
  }
  EXPECT_EQ(FpPrimal(Vec{1, 1, 0}, TiebreakRule::Lexicographic(), std::nullopt), 0);
  // Tie between coordinates 1 and n resolves to 1, the cyclic successor of n.
  EXPECT_EQ(FpPrimal(Vec{1, 0, 1}, TiebreakRule::Tournament(), std::nullopt), 0);
  EXPECT_EQ(FpPrimal(Vec{1, 0, 1}, TiebreakRule::Tournament(), 2), 0);
}

TEST(FpPrimal, TournamentPrefersSuccessor) {
  EXPECT_EQ(FpPrimal(Vec{1, 1, 0}, TiebreakRule::Tournament(), 0), 1);
  EXPECT_EQ(FpPrimal(Vec{0, 2, 2, 0}, TiebreakRule::Tournament(), std::nullopt), 2);
  // Three-way tie from incumbent 1: 1 -> 2 -> 3, stop where the successor is untied.
  EXPECT_EQ(FpPrimal(Vec{0, 1, 1, 1}, TiebreakRule::Tournament(), 1), 3);
  // All tied: the chain from the incumbent runs n-1 steps around the cycle.
  EXPECT_EQ(FpPrimal(Vec{1, 1, 1}, TiebreakRule::Tournament(), 1), 0);
  EXPECT_EQ(FpPrimal(Vec{1, 1, 1}, TiebreakRule::Tournament(), std::nullopt), 0);
}

TEST(FpPrimal, OtherRules) {
  EXPECT_EQ(FpPrimal(Vec{1, 1, 0}, TiebreakRule::PreferIncumbent(), 1), 1);
  EXPECT_EQ(FpPrimal(Vec{1, 1, 0}, TiebreakRule::PreferIncumbent(), 2), 0);
  EXPECT_EQ(FpPrimal(Vec{1, 1, 0}, TiebreakRule::PreferSwitch(), 0), 1);
  EXPECT_EQ(FpPrimal(Vec{1, 1, 0}, TiebreakRule::PreferSwitch(), 1), 0);
  // Tolerance: 1e-12 apart counts as tied in float mode.
  EXPECT_EQ(FpPrimal(Vec{1.0 - 1e-12, 1.0, 0}, TiebreakRule::Lexicographic(), std::nullopt), 0);
  EXPECT_EQ(FpPrimal(Vec{1.0 - 1e-12, 1.0, 0}, TiebreakRule::Lexicographic(), std::nullopt, 0.0),
            1);
}

TEST(FpPrimal, RandomSeededIsDeterministicAndInTiedSet) {
  Vec y = {2, 2, 0, 2};
  std::set<int> seen;
  for (std::int64_t step = 0; step < 64; ++step) {
    int a = FpPrimal(y, TiebreakRule::RandomSeeded(99), std::nullopt, 1e-9, step);
    int b = FpPrimal(y, TiebreakRule::RandomSeeded(99), std::nullopt, 1e-9, step);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, 2);
    seen.insert(a);
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(FindSupport, Examples) {
  EXPECT_EQ(FindSupport(Vec{0, 0, 0}).indices, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(FindSupport(Vec{10, 0, 0}).indices, (std::vector<int>{0}));
  EXPECT_EQ(FindSupport(Vec{0.5, 0.3, -5}).indices, (std::vector<int>{0, 1}));
}

TEST(GdPrimal, Examples) {
  auto u = GdPrimal(Vec{0, 0, 0});
  for (double v : u.coords()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(GdPrimal(Vec{3, 0, 0}).coords(), (Vec{1, 0, 0}));
  auto x = GdPrimal(Vec{0.5, 0.3, -5});
  EXPECT_NEAR(x[0], 0.6, 1e-15);
  EXPECT_NEAR(x[1], 0.4, 1e-15);
  EXPECT_EQ(x[2], 0.0);
  EXPECT_EQ(GdPrimal(std::vector<Q>{Q(1, 2), Q(3, 10), Q(-5)}).coords(),
            (std::vector<Q>{Q(3, 5), Q(2, 5), Q(0)}));
}

TEST(GdPrimal, OnSimplexWithMatchingSupport) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 5000; ++trial) {
    int n = 3 + trial % 5;
    Vec y(n);
    for (auto& v : y) v = u(rng);
    auto x = GdPrimal(y);
    double s = 0;
    for (double v : x.coords()) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_EQ(x.Support(), FindSupport(y));
  }
}

TEST(Energy, Examples) {
  EXPECT_EQ(EnergyFp(Vec{0, 1, -1}), 1.0);
  EXPECT_EQ(EnergyFp(Vec{0, 0, 0}), 0.0);
  EXPECT_EQ(EnergyFp(Vec{-2, -3, -1}), -1.0);
  EXPECT_NEAR(EnergyGd(Vec{0, 0, 0}), -1.0 / 6.0, 1e-15);
  EXPECT_NEAR(EnergyGd(Vec{0, 0, 0, 0, 0}), -0.1, 1e-15);
  EXPECT_EQ(EnergyGd(Vec{3, 0, 0}), 2.5);
  EXPECT_NEAR(EnergyGd(Vec{0.5, 0.3, -5}), 0.16, 1e-15);
  EXPECT_EQ(EnergyGd(std::vector<Q>{Q(1, 2), Q(3, 10), Q(-5)}), Q(4, 25));
}

TEST(Energy, GdClosedFormsOnEdgesAndVertices) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 2000; ++trial) {
    Vec y(4);
    for (auto& v : y) v = u(rng);
    auto s = FindSupport(y);
    if (s.size() == 1) {
      EXPECT_NEAR(EnergyGd(y), y[s.indices[0]] - 0.5, 1e-12);
    } else if (s.size() == 2) {
      double a = y[s.indices[0]], b = y[s.indices[1]];
      EXPECT_NEAR(EnergyGd(y), 0.25 * (a - b) * (a - b) + 0.5 * (a + b) - 0.25, 1e-12);
    }
  }
}

TEST(Run, FpFirstStep) {
  LearnerConfig<double> c;
  c.algorithm = Algorithm::kFictitiousPlay;
  c.horizon = 1;
  c.x0 = SimplexPoint<double>::Vertex(3, 0);
  auto traj = rpsdyn::Run(c, MakeUnweightedRps<double>(3));
  ASSERT_EQ(traj.xs.size(), 2u);
  ASSERT_EQ(traj.ys.size(), 3u);
  EXPECT_EQ(traj.ys[1], (Vec{0, 1, -1}));
  EXPECT_EQ(traj.xs[1].VertexIndex(), 1);
  EXPECT_EQ(traj.ys[0], (Vec{0, 0, 0}));
}

TEST(Run, GdLargeStepFirstIterateIsVertex) {
  LearnerConfig<double> c;
  c.algorithm = Algorithm::kGradientDescent;
  c.eta = 10;
  c.x0 = SimplexPoint<double>({0.05, 0.35, 0.39, 0.21});
  for (std::int64_t horizon : {1, 5, 50}) {
    c.horizon = horizon;
    auto traj = rpsdyn::Run(c, MakeUnweightedRps<double>(4));
    EXPECT_TRUE(traj.xs[1].IsVertex());
  }
}

struct RandomCase {
  LearnerConfig<double> config;
  RpsMatrix<double> matrix;
};

std::vector<RandomCase> RandomCases() {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> w(0.5, 3.0);
  std::uniform_real_distribution<double> eta(0.05, 12.0);
  std::vector<RandomCase> cases;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + trial % 4;
    Vec weights(n);
    for (auto& v : weights) v = w(rng);
    LearnerConfig<double> c;
    c.algorithm = trial % 2 ? Algorithm::kGradientDescent : Algorithm::kFictitiousPlay;
    c.eta = c.algorithm == Algorithm::kGradientDescent ? eta(rng) : 1.0;
    c.horizon = 400;
    c.x0 = RandomSimplex(rng, n);
    c.tiebreak = TiebreakRule::RandomSeeded(trial);
    cases.push_back({c, MakeRps(weights)});
  }
  return cases;
}

TEST(RunInvariants, DualConsistencyAndEnergyMonotonicity) {
  for (const auto& rc : RandomCases()) {
    auto traj = rpsdyn::Run(rc.config, rc.matrix);
    for (std::int64_t t = 0; t <= traj.horizon(); ++t) {
      auto ax = rc.matrix.Apply(traj.xs[t]);
      for (int i = 0; i < traj.n(); ++i) {
        EXPECT_LE(std::abs(traj.ys[t + 1][i] - traj.ys[t][i] - rc.config.eta * ax[i]), 1e-12);
      }
    }
    for (std::size_t t = 1; t + 1 < traj.energies.size(); ++t) {
      EXPECT_GE(traj.energies[t + 1] - traj.energies[t],
                -1e-9 * std::max(1.0, std::abs(traj.energies[t])));
    }
  }
}

TEST(RunInvariants, PrimalIteratesFollowDualIterates) {
  for (const auto& rc : RandomCases()) {
    auto traj = rpsdyn::Run(rc.config, rc.matrix);
    for (std::int64_t t = 1; t <= traj.horizon(); ++t) {
      if (rc.config.algorithm == Algorithm::kGradientDescent) {
        EXPECT_EQ(traj.xs[t], GdPrimal(traj.ys[t]));
        EXPECT_EQ(traj.supports[t], FindSupport(traj.ys[t]));
      } else {
        ASSERT_TRUE(traj.xs[t].IsVertex());
        int i = *traj.xs[t].VertexIndex();
        EXPECT_GE(traj.ys[t][i], EnergyFp(traj.ys[t]) - rc.config.tie_tolerance);
      }
    }
  }
}

TEST(RunInvariants, FpEnergyCases) {
  for (const auto& rc : RandomCases()) {
    if (rc.config.algorithm != Algorithm::kFictitiousPlay) continue;
    auto traj = rpsdyn::Run(rc.config, rc.matrix);
    const double a_max = rc.matrix.a_max();
    for (std::int64_t t = 1; t < traj.horizon(); ++t) {
      double d = traj.energies[t + 1] - traj.energies[t];
      if (traj.xs[t] == traj.xs[t + 1]) {
        EXPECT_LE(std::abs(d), 1e-12);
      } else {
        EXPECT_GE(d, -1e-12);
        EXPECT_LE(d, a_max + 1e-12);
      }
    }
  }
}

TEST(RunInvariants, RationalUnweightedFromVertexStaysIntegral) {
  for (int n : {3, 4, 5}) {
    for (auto rule : {TiebreakRule::Lexicographic(), TiebreakRule::Tournament()}) {
      LearnerConfig<Q> c;
      c.algorithm = Algorithm::kFictitiousPlay;
      c.horizon = 300;
      c.x0 = SimplexPoint<Q>::Vertex(n, 0);
      c.tiebreak = rule;
      auto traj = rpsdyn::Run(c, MakeUnweightedRps<Q>(n));
      for (const auto& y : traj.ys) {
        for (const auto& v : y) ASSERT_TRUE(ScalarTraits<Q>::IsInteger(v));
      }
    }
  }
}

TEST(Run, RationalMatchesFloatOnExactlyRepresentableRun) {
  LearnerConfig<Q> cq;
  cq.algorithm = Algorithm::kGradientDescent;
  cq.eta = Q(10);
  cq.horizon = 300;
  cq.x0 = SimplexPoint<Q>({Q(3, 10), Q(2, 5), Q(3, 10)});
  LearnerConfig<double> cd;
  cd.algorithm = Algorithm::kGradientDescent;
  cd.eta = 10;
  cd.horizon = 300;
  cd.x0 = SimplexPoint<double>({0.3, 0.4, 0.3});
  auto tq = rpsdyn::Run(cq, MakeRps<Q>({Q(1), Q(2), Q(3)}));
  auto td = rpsdyn::Run(cd, MakeRps<double>({1, 2, 3}));
  for (std::int64_t t = 0; t <= 300; ++t) {
    EXPECT_EQ(tq.supports[t], td.supports[t]);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(ToDouble(tq.ys[t][i]), td.ys[t][i], 1e-9);
  }
}

TEST(Run, RationalOverflowIsReported) {
  LearnerConfig<Q> c;
  c.algorithm = Algorithm::kGradientDescent;
  c.eta = Q(1, 7);
  c.horizon = 2000;
  c.x0 = SimplexPoint<Q>({Q(1, 3), Q(1, 2), Q(1, 6)});
  c.bit_budget = 64;
  try {
    rpsdyn::Run(c, MakeRps<Q>({Q(1), Q(2), Q(3)}));
    FAIL() << "expected ArithmeticOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArithmeticOverflow);
  }
}

TEST(Run, ConfigValidation) {
  auto a = MakeUnweightedRps<double>(3);
  LearnerConfig<double> c;
  c.algorithm = Algorithm::kGradientDescent;
  c.horizon = 10;
  c.x0 = SimplexPoint<double>::Uniform(3);
  auto expect_invalid = [&](LearnerConfig<double> bad) {
    try {
      rpsdyn::Run(bad, a);
      ADD_FAILURE() << "expected ConfigInvalid";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfigInvalid);
    }
  };
  auto bad = c;
  bad.eta = 0;
  expect_invalid(bad);
  bad = c;
  bad.horizon = -1;
  expect_invalid(bad);
  bad = c;
  bad.x0 = SimplexPoint<double>::Uniform(4);
  expect_invalid(bad);
  bad = c;
  bad.x0 = SimplexPoint<double>::Trusted({0.5, 0.5, 0.5});
  expect_invalid(bad);
  bad = c;
  bad.algorithm = Algorithm::kFictitiousPlay;
  bad.eta = 2;
  expect_invalid(bad);
  bad = c;
  bad.algorithm = Algorithm::kFictitiousPlay;
  bad.schedule = StepsizeSchedule::kInverseSqrtTime;
  expect_invalid(bad);
}

TEST(Run, HorizonZero) {
  LearnerConfig<double> c;
  c.algorithm = Algorithm::kFictitiousPlay;
  c.horizon = 0;
  c.x0 = SimplexPoint<double>::Vertex(3, 0);
  auto traj = rpsdyn::Run(c, MakeUnweightedRps<double>(3));
  EXPECT_EQ(traj.xs.size(), 1u);
  EXPECT_EQ(traj.ys.size(), 2u);
  EXPECT_EQ(traj.energies.size(), 2u);
}

TEST(Run, DecreasingScheduleScalesCumulativePayoff) {
  LearnerConfig<double> c;
  c.algorithm = Algorithm::kGradientDescent;
  c.eta = 1;
  c.schedule = StepsizeSchedule::kInverseSqrtTime;
  c.horizon = 50;
  c.x0 = SimplexPoint<double>({0.3, 0.4, 0.3});
  auto a = MakeUnweightedRps<double>(3);
  auto traj = rpsdyn::Run(c, a);
  Vec total(3, 0.0);
  for (std::int64_t t = 0; t <= 50; ++t) {
    auto ax = a.Apply(traj.xs[t]);
    for (int i = 0; i < 3; ++i) total[i] += ax[i];
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(traj.ys[t + 1][i], total[i] / std::sqrt(t + 1.0), 1e-12);
    }
  }
}

TEST(Run, Deterministic) {
  for (const auto& rc : RandomCases()) {
    auto a = rpsdyn::Run(rc.config, rc.matrix);
    auto b = rpsdyn::Run(rc.config, rc.matrix);
    EXPECT_EQ(a.ys, b.ys);
    EXPECT_EQ(a.xs, b.xs);
  }
}

}  // namespace
}  // namespace rpsdyn

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

// Runs FP and large-stepsize GD on weighted 3-strategy RPS and prints the
// regret, the phase vertices and the energy ledger summary.

#include <iostream>

#include "rpsdyn/analysis.hpp"
#include "rpsdyn/dynamics.hpp"
#include "rpsdyn/game.hpp"
#include "rpsdyn/io.hpp"

int main() {
  using rpsdyn::Algorithm;
  auto a = rpsdyn::MakeRps<double>({1.0, 2.0, 3.0});
  auto nash = rpsdyn::InteriorNash(a);
  std::cout << "x* =";
  for (double v : nash.point.coords()) std::cout << ' ' << v;
  std::cout << '\n';

  rpsdyn::LearnerConfig<double> fp;
  fp.algorithm = Algorithm::kFictitiousPlay;
  fp.horizon = 1000;
  fp.x0 = rpsdyn::SimplexPoint<double>::Vertex(3, 0);

  rpsdyn::LearnerConfig<double> gd = fp;
  gd.algorithm = Algorithm::kGradientDescent;
  gd.eta = 10.0;
  gd.x0 = rpsdyn::SimplexPoint<double>({0.3, 0.4, 0.3});

  for (const auto& config : {fp, gd}) {
    auto traj = rpsdyn::Run(config, a);
    auto regret = rpsdyn::Regret(traj);
    auto phases = rpsdyn::DetectPhases(traj);
    auto tally = rpsdyn::TallyLedger(rpsdyn::EnergyGrowthLedger(traj));
    std::cout << rpsdyn::AlgorithmName(config.algorithm) << ": Reg(T) = " << regret.regret_total
              << ", duality gap of the average = " << regret.duality_gap_avg
              << ", phases = " << phases.K()
              << ", cycling = " << (rpsdyn::VerifyCycling(phases, 3).pass ? "yes" : "no")
              << ", ledger violations = " << tally.violations << '\n';
  }
  return 0;
}

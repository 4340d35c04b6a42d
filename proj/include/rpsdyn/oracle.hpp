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

#ifndef RPSDYN_ORACLE_HPP_
#define RPSDYN_ORACLE_HPP_

// Slow, independent references for the fast paths in dynamics/analysis.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpsdyn/analysis.hpp"
#include "rpsdyn/dynamics.hpp"
#include "rpsdyn/error.hpp"
#include "rpsdyn/game.hpp"
#include "rpsdyn/scalar.hpp"

namespace rpsdyn {

inline constexpr int kBruteforceMaxDimension = 20;

template <typename Scalar>
struct ProjectionCandidate {
  SupportSet support;
  std::optional<SimplexPoint<Scalar>> point;  // empty when infeasible
  Scalar objective{};                         // <x, y> - |x|^2 / 2
};

// Maximizer of <x, y> - |x|^2/2 restricted to the affine hull of face S:
// x_i = y_i - mean_S(y) + 1/|S| on S, zero elsewhere. Rejected if negative.
template <typename Scalar>
ProjectionCandidate<Scalar> FaceCandidate(const DualVector<Scalar>& y, const SupportSet& s) {
  ProjectionCandidate<Scalar> c;
  c.support = s;
  Scalar sum(0);
  for (int i : s.indices) sum += y[i];
  const Scalar m(s.size());
  std::vector<Scalar> x(y.size(), Scalar(0));
  for (int i : s.indices) {
    x[i] = y[i] - sum / m + Scalar(1) / m;
    if (x[i] < Scalar(0)) return c;
  }
  Scalar objective(0);
  for (std::size_t i = 0; i < y.size(); ++i) objective += x[i] * y[i] - x[i] * x[i] / Scalar(2);
  c.objective = objective;
  c.point = SimplexPoint<Scalar>::Trusted(std::move(x));
  return c;
}

// Exhaustive search over all 2^n - 1 supports.
template <typename Scalar>
ProjectionCandidate<Scalar> ProjectBruteforce(const DualVector<Scalar>& y) {
  const int n = static_cast<int>(y.size());
  if (n < 1) Fail(ErrorCode::kDimensionMismatch, "empty dual vector");
  if (n > kBruteforceMaxDimension) {
    Fail(ErrorCode::kDimensionTooLarge,
         "n = " + std::to_string(n) + " exceeds " + std::to_string(kBruteforceMaxDimension));
  }
  std::optional<ProjectionCandidate<Scalar>> best;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    SupportSet s;
    for (int i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) s.indices.push_back(i);
    }
    ProjectionCandidate<Scalar> c = FaceCandidate(y, s);
    if (!c.point) continue;
    if (!best || c.objective > best->objective) best = std::move(c);
  }
  return *best;  // singletons are always feasible
}

// 2 max_i sum_t (A x^t)_i, straight from the iterates.
template <typename Scalar>
Scalar RegretDirect(const Trajectory<Scalar>& traj) {
  std::vector<Scalar> total(traj.n(), Scalar(0));
  for (const auto& x : traj.xs) {
    std::vector<Scalar> ax = traj.matrix.Apply(x);
    for (int i = 0; i < traj.n(); ++i) total[i] += ax[i];
  }
  return Scalar(2) * *std::max_element(total.begin(), total.end());
}

inline constexpr double kDefaultFdStep = 1e-6;

// Central differences of the GD energy. Requires y to sit more than 10h from
// any change of support.
inline std::vector<double> GradFd(const DualVector<double>& y, double h = kDefaultFdStep) {
  RegionTag tag = ClassifyRegion(y);
  if (tag.margin <= 10.0 * h) {
    Fail(ErrorCode::kTooCloseToBoundary,
         "margin " + ScalarTraits<double>::Format(tag.margin) + " <= 10h");
  }
  std::vector<double> grad(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    DualVector<double> up = y, down = y;
    up[i] += h;
    down[i] -= h;
    grad[i] = (EnergyGd(up) - EnergyGd(down)) / (2.0 * h);
  }
  return grad;
}

}  // namespace rpsdyn

#endif  // RPSDYN_ORACLE_HPP_

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

#ifndef RPSDYN_DYNAMICS_HPP_
#define RPSDYN_DYNAMICS_HPP_

// Primal-dual iterations of Fictitious Play (FP) and Euclidean online Gradient
// Descent (GD) under symmetric learning:
//
//   y^0 = 0,   y^{t+1} = y^t + eta * A x^t,
//   FP: x^{t+1} = e_i with i a (tie-broken) argmax of y^{t+1}, eta = 1,
//   GD: x^{t+1} = argmax_{x in simplex} <x, y^{t+1}> - |x|^2 / 2.
//
// The energies are Psi(y) = max_i y_i for FP and the conjugate phi*(y) of
// |x|^2/2 restricted to the simplex for GD.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpsdyn/error.hpp"
#include "rpsdyn/game.hpp"
#include "rpsdyn/scalar.hpp"

namespace rpsdyn {

enum class Algorithm { kFictitiousPlay, kGradientDescent };

enum class TiebreakKind {
  kLexicographic,
  kTournament,
  kRandomSeeded,
  kPreferIncumbent,
  kPreferSwitch,
};

struct TiebreakRule {
  TiebreakKind kind = TiebreakKind::kLexicographic;
  std::uint64_t seed = 0;  // kRandomSeeded only

  static TiebreakRule Lexicographic() { return {TiebreakKind::kLexicographic, 0}; }
  static TiebreakRule Tournament() { return {TiebreakKind::kTournament, 0}; }
  static TiebreakRule RandomSeeded(std::uint64_t seed) {
    return {TiebreakKind::kRandomSeeded, seed};
  }
  static TiebreakRule PreferIncumbent() { return {TiebreakKind::kPreferIncumbent, 0}; }
  static TiebreakRule PreferSwitch() { return {TiebreakKind::kPreferSwitch, 0}; }
};

// GD only. kInverseSqrtTime runs FTRL with eta_t = eta / sqrt(t), keeping the
// stored dual iterate scaled as y^t = eta_t * sum_{k<t} A x^k.
enum class StepsizeSchedule { kConstant, kInverseSqrtTime };

inline constexpr double kDefaultTieTolerance = 1e-9;
inline constexpr unsigned kDefaultBitBudget = 4096;

template <typename Scalar>
struct LearnerConfig {
  Algorithm algorithm = Algorithm::kFictitiousPlay;
  Scalar eta = Scalar(1);
  StepsizeSchedule schedule = StepsizeSchedule::kConstant;
  std::int64_t horizon = 0;
  SimplexPoint<Scalar> x0;
  TiebreakRule tiebreak;
  double tie_tolerance = kDefaultTieTolerance;  // float mode only
  unsigned bit_budget = kDefaultBitBudget;      // rational mode only

  static constexpr Arithmetic arithmetic() { return ScalarTraits<Scalar>::kArithmetic; }

  void Validate(int n) const {
    auto invalid = [](const std::string& why) { Fail(ErrorCode::kConfigInvalid, why); };
    if (!(eta > Scalar(0))) invalid("eta must be positive");
    if (algorithm == Algorithm::kFictitiousPlay && eta != Scalar(1)) {
      invalid("fictitious play runs with eta = 1");
    }
    if (horizon < 0) invalid("horizon must be nonnegative");
    if (x0.size() != n) invalid("x0 has " + std::to_string(x0.size()) +
                                " coordinates, matrix has n = " + std::to_string(n));
    // Re-validate x0 in case it was built with Trusted().
    try {
      SimplexPoint<Scalar> check(x0.coords());
    } catch (const Error& e) {
      invalid(std::string("x0 is not on the simplex: ") + e.what());
    }
    if (!(tie_tolerance >= 0.0)) invalid("tie_tolerance must be nonnegative");
    if (schedule == StepsizeSchedule::kInverseSqrtTime) {
      if (algorithm != Algorithm::kGradientDescent) {
        invalid("stepsize schedules apply to gradient descent only");
      }
      if constexpr (ScalarTraits<Scalar>::kExact) {
        invalid("eta / sqrt(t) is not representable in rational mode");
      }
    }
    if (bit_budget < 64) invalid("bit_budget must be at least 64");
  }
};

template <typename Scalar>
struct Trajectory {
  LearnerConfig<Scalar> config;
  RpsMatrix<Scalar> matrix;
  std::vector<SimplexPoint<Scalar>> xs;  // t = 0..T
  std::vector<DualVector<Scalar>> ys;    // t = 0..T+1, ys[0] = 0
  std::vector<Scalar> energies;          // H(y^t), t = 0..T+1
  std::vector<SupportSet> supports;      // supp(x^t), t = 0..T

  std::int64_t horizon() const { return static_cast<std::int64_t>(xs.size()) - 1; }
  int n() const { return matrix.n(); }

  // Stepsize that scales ys[t]. For the constant schedule this is eta.
  Scalar EtaAt(std::int64_t t) const {
    if (config.schedule == StepsizeSchedule::kConstant) return config.eta;
    if constexpr (ScalarTraits<Scalar>::kExact) {
      return config.eta;
    } else {
      return config.eta / std::sqrt(static_cast<double>(std::max<std::int64_t>(t, 1)));
    }
  }
};

template <typename Scalar>
DualVector<Scalar> DualStep(const DualVector<Scalar>& y, const SimplexPoint<Scalar>& x,
                            const RpsMatrix<Scalar>& a, const Scalar& eta) {
  if (static_cast<int>(y.size()) != a.n() || x.size() != a.n()) {
    Fail(ErrorCode::kDimensionMismatch, "dual step operands disagree with n");
  }
  std::vector<Scalar> ax = a.Apply(x);
  DualVector<Scalar> out(y.size());
  for (int i = 0; i < a.n(); ++i) out[i] = y[i] + eta * ax[i];
  return out;
}

namespace internal {

inline std::uint64_t SplitMix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace internal

// Tie-broken argmax of y. Coordinates within `tol` of the maximum count as
// tied in float mode; rational mode compares exactly and ignores `tol`.
template <typename Scalar>
int FpPrimal(const DualVector<Scalar>& y, const TiebreakRule& rule,
             std::optional<int> incumbent, double tol = kDefaultTieTolerance,
             std::int64_t step = 0) {
  const int n = static_cast<int>(y.size());
  const Scalar top = *std::max_element(y.begin(), y.end());
  std::vector<bool> tied(n, false);
  std::vector<int> members;
  for (int i = 0; i < n; ++i) {
    bool is_tied;
    if constexpr (ScalarTraits<Scalar>::kExact) {
      is_tied = y[i] == top;
    } else {
      is_tied = y[i] >= top - tol;
    }
    if (is_tied) {
      tied[i] = true;
      members.push_back(i);
    }
  }
  if (members.size() == 1) return members.front();

  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  auto in = [&](int i) { return tied[wrap(i)]; };
  const bool incumbent_tied = incumbent && *incumbent >= 0 && *incumbent < n &&
                              tied[*incumbent];

  switch (rule.kind) {
    case TiebreakKind::kLexicographic:
      return members.front();
    case TiebreakKind::kPreferIncumbent:
      return incumbent_tied ? *incumbent : members.front();
    case TiebreakKind::kPreferSwitch:
      for (int m : members) {
        if (!incumbent || m != *incumbent) return m;
      }
      return members.front();
    case TiebreakKind::kRandomSeeded: {
      std::uint64_t h = internal::SplitMix64(
          rule.seed ^ internal::SplitMix64(static_cast<std::uint64_t>(step)));
      return members[h % members.size()];
    }
    case TiebreakKind::kTournament: {
      // i+1 beats i among tied neighbours; follow the chain of successors.
      if (incumbent_tied) {
        int j = *incumbent;
        for (int s = 0; s < n - 1 && in(j + 1); ++s) j = wrap(j + 1);
        return j;
      }
      for (int i = 0; i < n; ++i) {
        if (in(i) && !in(i + 1)) return i;
      }
      return members.front();
    }
  }
  return members.front();
}

namespace internal {

// y_i - mean_S(y) + 1/|S|: the coordinate of the projection on support S.
// FindSupport and GdPrimal share this expression so that kept coordinates are
// never negative after rounding.
template <typename Scalar>
Scalar SupportShift(const Scalar& yi, const Scalar& sum, int m) {
  return yi - sum / Scalar(m) + Scalar(1) / Scalar(m);
}

}  // namespace internal

// Active support of the Euclidean projection of y onto the simplex: drop the
// smallest remaining coordinate while its shifted value is negative. Ties in
// the argmin drop the lowest index.
template <typename Scalar>
SupportSet FindSupport(const DualVector<Scalar>& y) {
  const int n = static_cast<int>(y.size());
  std::vector<bool> active(n, true);
  int m = n;
  Scalar sum(0);
  for (const Scalar& v : y) sum += v;
  while (m > 1) {
    int argmin = -1;
    for (int j = 0; j < n; ++j) {
      if (active[j] && (argmin < 0 || y[j] < y[argmin])) argmin = j;
    }
    if (internal::SupportShift(y[argmin], sum, m) < Scalar(0)) {
      active[argmin] = false;
      sum -= y[argmin];
      --m;
    } else {
      break;
    }
  }
  SupportSet s;
  for (int j = 0; j < n; ++j) {
    if (active[j]) s.indices.push_back(j);
  }
  return s;
}

template <typename Scalar>
Scalar SupportSum(const DualVector<Scalar>& y, const SupportSet& s) {
  // Same accumulation order as FindSupport: total minus removed coordinates.
  Scalar sum(0);
  for (const Scalar& v : y) sum += v;
  std::vector<int> removed;
  for (int j = 0; j < static_cast<int>(y.size()); ++j) {
    if (!s.Contains(j)) removed.push_back(j);
  }
  std::sort(removed.begin(), removed.end(),
            [&](int a, int b) { return y[a] < y[b] || (y[a] == y[b] && a < b); });
  for (int j : removed) sum -= y[j];
  return sum;
}

// GD primal map Q(y) = grad phi*(y).
template <typename Scalar>
SimplexPoint<Scalar> GdPrimal(const DualVector<Scalar>& y) {
  SupportSet s = FindSupport(y);
  Scalar sum = SupportSum(y, s);
  std::vector<Scalar> x(y.size(), Scalar(0));
  for (int i : s.indices) x[i] = internal::SupportShift(y[i], sum, s.size());
  return SimplexPoint<Scalar>::Trusted(std::move(x));
}

template <typename Scalar>
Scalar EnergyFp(const DualVector<Scalar>& y) {
  return *std::max_element(y.begin(), y.end());
}

// phi*(y) on S = FindSupport(y), |S| = m, mean mu:
//   (1/2) sum_S y^2 + mu - (1/2m)(sum_S y)^2 - 1/(2m)
//     = (1/2) sum_S (y - mu)^2 + mu - 1/(2m).
// The centred form avoids cancellation for large |y|.
template <typename Scalar>
Scalar EnergyGd(const DualVector<Scalar>& y) {
  SupportSet s = FindSupport(y);
  const int m = s.size();
  Scalar sum = SupportSum(y, s);
  Scalar mu = sum / Scalar(m);
  Scalar spread(0);
  for (int i : s.indices) {
    Scalar d = y[i] - mu;
    spread += d * d;
  }
  return spread / Scalar(2) + mu - Scalar(1) / Scalar(2 * m);
}

template <typename Scalar>
Scalar Energy(Algorithm algorithm, const DualVector<Scalar>& y) {
  return algorithm == Algorithm::kFictitiousPlay ? EnergyFp(y) : EnergyGd(y);
}

namespace internal {

template <typename Scalar>
void CheckBitBudget(const std::vector<Scalar>& values, unsigned budget, std::int64_t t) {
  if constexpr (ScalarTraits<Scalar>::kExact) {
    for (const Scalar& v : values) {
      unsigned bits = ScalarTraits<Scalar>::BitLength(v);
      if (bits > budget) {
        Fail(ErrorCode::kArithmeticOverflow,
             "rational of " + std::to_string(bits) + " bits exceeds the budget of " +
                 std::to_string(budget) + " at t = " + std::to_string(t));
      }
    }
  }
}

}  // namespace internal

// Runs the configured learner for T = config.horizon rounds. Deterministic in
// (config, matrix).
template <typename Scalar>
Trajectory<Scalar> Run(const LearnerConfig<Scalar>& config, const RpsMatrix<Scalar>& a) {
  config.Validate(a.n());
  const int n = a.n();
  const std::int64_t horizon = config.horizon;
  const bool fp = config.algorithm == Algorithm::kFictitiousPlay;
  const bool scheduled = config.schedule != StepsizeSchedule::kConstant;

  Trajectory<Scalar> traj;
  traj.config = config;
  traj.matrix = a;
  traj.xs.reserve(horizon + 1);
  traj.ys.reserve(horizon + 2);
  traj.energies.reserve(horizon + 2);
  traj.supports.reserve(horizon + 1);

  traj.xs.push_back(config.x0);
  traj.supports.push_back(config.x0.Support());
  traj.ys.push_back(DualVector<Scalar>(n, Scalar(0)));
  traj.energies.push_back(Energy(config.algorithm, traj.ys.back()));
  internal::CheckBitBudget(config.x0.coords(), config.bit_budget, 0);

  // Unscaled cumulative payoff, used only by the decreasing schedule.
  std::vector<Scalar> cumulative(n, Scalar(0));

  for (std::int64_t t = 0; t <= horizon; ++t) {
    const SimplexPoint<Scalar>& x = traj.xs.back();
    DualVector<Scalar> next;
    if (scheduled) {
      std::vector<Scalar> ax = a.Apply(x);
      for (int i = 0; i < n; ++i) cumulative[i] += ax[i];
      Scalar eta_next = traj.EtaAt(t + 1);
      next.resize(n);
      for (int i = 0; i < n; ++i) next[i] = eta_next * cumulative[i];
    } else {
      next = DualStep(traj.ys.back(), x, a, config.eta);
    }
    internal::CheckBitBudget(next, config.bit_budget, t + 1);
    traj.energies.push_back(Energy(config.algorithm, next));
    traj.ys.push_back(std::move(next));
    if (t == horizon) break;

    const DualVector<Scalar>& y = traj.ys.back();
    if (fp) {
      std::optional<int> incumbent = x.VertexIndex();
      int i = FpPrimal(y, config.tiebreak, incumbent, config.tie_tolerance, t + 1);
      traj.xs.push_back(SimplexPoint<Scalar>::Vertex(n, i));
      traj.supports.push_back(SupportSet{{i}});
    } else {
      SimplexPoint<Scalar> xn = GdPrimal(y);
      internal::CheckBitBudget(xn.coords(), config.bit_budget, t + 1);
      traj.supports.push_back(xn.Support());
      traj.xs.push_back(std::move(xn));
    }
  }
  return traj;
}

}  // namespace rpsdyn

#endif  // RPSDYN_DYNAMICS_HPP_

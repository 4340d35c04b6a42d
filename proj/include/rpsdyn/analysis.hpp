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

#ifndef RPSDYN_ANALYSIS_HPP_
#define RPSDYN_ANALYSIS_HPP_

// Measurements on trajectories: regret, dual-space regions, phase structure,
// per-step energy growth against the case bounds, and the small- and
// large-stepsize properties of GD.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpsdyn/dynamics.hpp"
#include "rpsdyn/error.hpp"
#include "rpsdyn/game.hpp"
#include "rpsdyn/scalar.hpp"

namespace rpsdyn {

inline constexpr double kBoundaryAmbiguity = 1e-9;
inline constexpr double kBoundTolerance = 1e-9;

// Relative "strict increase" threshold for energies in float mode.
template <typename Scalar>
bool StrictlyGreater(const Scalar& later, const Scalar& earlier) {
  if constexpr (ScalarTraits<Scalar>::kExact) {
    return later > earlier;
  } else {
    return later - earlier > 1e-9 * std::max(1.0, std::abs(earlier));
  }
}

// ---------------------------------------------------------------------------
// Regions of the dual space.

enum class RegionKind { kVertex, kEdge, kInterior, kOtherBoundary };

// kVertex(i):  y_i - y_j > 1 for all j != i              (GD maps y to e_i)
// kEdge(i):    |y_i - y_{i+1}| <= 1 and
//              (y_i + y_{i+1})/2 - y_j > 1/2 for other j  (supp = {i, i+1})
// kInterior:   FindSupport(y) = [n]
// `margin` is min_i |y_i - lambda| with lambda the projection threshold, i.e.
// the distance (in the max norm, up to a factor) to a change of support.
struct RegionTag {
  RegionKind kind = RegionKind::kOtherBoundary;
  int index = -1;
  double margin = 0.0;
  bool ambiguous = false;

  bool operator==(const RegionTag& o) const { return kind == o.kind && index == o.index; }
};

inline std::string RegionName(const RegionTag& tag) {
  switch (tag.kind) {
    case RegionKind::kVertex: return "P" + std::to_string(tag.index + 1);
    case RegionKind::kEdge: return "P" + std::to_string(tag.index + 1) + "~";
    case RegionKind::kInterior: return "interior";
    case RegionKind::kOtherBoundary: return "boundary";
  }
  return "?";
}

template <typename Scalar>
RegionTag ClassifyRegion(const DualVector<Scalar>& y, double ambiguity = kBoundaryAmbiguity) {
  const int n = static_cast<int>(y.size());
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  RegionTag tag;

  SupportSet s = FindSupport(y);
  Scalar sum = SupportSum(y, s);
  Scalar lambda = sum / Scalar(s.size()) - Scalar(1) / Scalar(s.size());
  double margin = std::numeric_limits<double>::infinity();
  for (const Scalar& v : y) margin = std::min(margin, std::abs(ToDouble(Scalar(v - lambda))));
  tag.margin = margin;
  tag.ambiguous = !ScalarTraits<Scalar>::kExact && margin <= ambiguity;

  for (int i = 0; i < n; ++i) {
    bool vertex = true;
    for (int j = 0; j < n && vertex; ++j) {
      if (j != i && !(y[i] - y[j] > Scalar(1))) vertex = false;
    }
    if (vertex) {
      tag.kind = RegionKind::kVertex;
      tag.index = i;
      return tag;
    }
  }
  const Scalar half = ScalarTraits<Scalar>::FromRatio(1, 2);
  for (int i = 0; i < n; ++i) {
    const Scalar& yi = y[i];
    const Scalar& yn = y[wrap(i + 1)];
    if (!(Abs(Scalar(yi - yn)) <= Scalar(1))) continue;
    Scalar mid = (yi + yn) / Scalar(2);
    bool edge = true;
    for (int j = 0; j < n && edge; ++j) {
      if (j == i || j == wrap(i + 1)) continue;
      if (!(mid - y[j] > half)) edge = false;
    }
    if (edge) {
      tag.kind = RegionKind::kEdge;
      tag.index = i;
      return tag;
    }
  }
  tag.kind = s.size() == n ? RegionKind::kInterior : RegionKind::kOtherBoundary;
  return tag;
}

// ---------------------------------------------------------------------------
// Regret.

template <typename Scalar>
struct RegretReport {
  Scalar regret_total{};       // (2/eta) max_i y^{T+1}_i
  Scalar regret_by_energy{};   // FP: 2 Psi(y^{T+1}); GD: (2 phi*(y^{T+1}) + 2M)/eta
  std::optional<Scalar> regret_upper_ftrl;  // GD, constant stepsize
  Scalar duality_gap_avg{};    // DG at sum_t x^t / T
  std::vector<std::pair<std::int64_t, double>> per_T_curve;
};

// Roughly 8 points per decade plus the final horizon.
inline std::vector<std::int64_t> LogSpacedHorizons(std::int64_t horizon) {
  std::vector<std::int64_t> out;
  if (horizon < 1) return out;
  for (int k = 0;; ++k) {
    auto t = static_cast<std::int64_t>(std::llround(std::pow(10.0, k / 8.0)));
    if (t > horizon) break;
    if (out.empty() || out.back() != t) out.push_back(t);
  }
  if (out.back() != horizon) out.push_back(horizon);
  return out;
}

template <typename Scalar>
Scalar RegretAt(const Trajectory<Scalar>& traj, std::int64_t t) {
  const DualVector<Scalar>& y = traj.ys.at(t + 1);
  return Scalar(2) * EnergyFp(y) / traj.EtaAt(t + 1);
}

template <typename Scalar>
RegretReport<Scalar> Regret(const Trajectory<Scalar>& traj) {
  if (traj.xs.empty() || traj.ys.size() != traj.xs.size() + 1) {
    Fail(ErrorCode::kEmptyTrajectory, "trajectory has no iterates");
  }
  const std::int64_t horizon = traj.horizon();
  const Scalar eta = traj.EtaAt(horizon + 1);
  const DualVector<Scalar>& last = traj.ys.back();

  RegretReport<Scalar> report;
  report.regret_total = RegretAt(traj, horizon);
  if (traj.config.algorithm == Algorithm::kFictitiousPlay) {
    report.regret_by_energy = Scalar(2) * EnergyFp(last);
  } else if (traj.config.schedule == StepsizeSchedule::kConstant) {
    // M = max over the simplex of |x|^2/2, attained at the vertices.
    Scalar max_reg(0);
    for (int i = 0; i < traj.n(); ++i) {
      auto e = SimplexPoint<Scalar>::Vertex(traj.n(), i);
      Scalar sq(0);
      for (const Scalar& c : e.coords()) sq += c * c;
      max_reg = std::max(max_reg, Scalar(sq / Scalar(2)));
    }
    report.regret_upper_ftrl =
        (Scalar(2) * EnergyGd(last) + Scalar(2) * max_reg) / eta;
    report.regret_by_energy = *report.regret_upper_ftrl;
  } else {
    report.regret_by_energy = report.regret_total;
  }

  std::vector<Scalar> total(traj.n(), Scalar(0));
  for (const auto& x : traj.xs) {
    for (int i = 0; i < traj.n(); ++i) total[i] += x[i];
  }
  if (horizon >= 1) {
    for (auto& v : total) v /= Scalar(horizon);
    report.duality_gap_avg = internal::GapAtVector(traj.matrix, total);
  } else {
    report.duality_gap_avg = DualityGap(traj.matrix, traj.xs.front());
  }

  for (std::int64_t t : LogSpacedHorizons(horizon)) {
    report.per_T_curve.emplace_back(t, ToDouble(RegretAt(traj, t)));
  }
  return report;
}

// Reg_1 + Reg_2 from the two players' definitions, including the realized
// payoffs <x^t, A x^t> (zero by skew-symmetry, summed anyway).
template <typename Scalar>
Scalar RegretSummedPayoff(const Trajectory<Scalar>& traj) {
  const int n = traj.n();
  const auto& a = traj.matrix;
  std::vector<Scalar> row_payoff(n, Scalar(0));
  std::vector<Scalar> column_payoff(n, Scalar(0));
  Scalar realized(0);
  std::vector<std::vector<Scalar>> columns;
  for (int j = 0; j < n; ++j) columns.push_back(a.Column(j));
  for (const auto& x : traj.xs) {
    std::vector<Scalar> ax = a.Apply(x);
    for (int i = 0; i < n; ++i) {
      row_payoff[i] += ax[i];
      realized += x[i] * ax[i];
    }
    for (int j = 0; j < n; ++j) {
      Scalar v(0);
      for (int i = 0; i < n; ++i) v += x[i] * columns[j][i];
      column_payoff[j] += v;
    }
  }
  Scalar best = *std::max_element(row_payoff.begin(), row_payoff.end());
  Scalar worst = *std::min_element(column_payoff.begin(), column_payoff.end());
  return (best - realized) + (realized - worst);
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of log(regret) on log(T).
inline SlopeFit FitRegretSlope(const std::vector<std::pair<std::int64_t, double>>& curve) {
  if (curve.size() < 3) {
    Fail(ErrorCode::kConfigInvalid, "slope fit needs at least 3 points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [t, reg] : curve) {
    if (!(reg > 0.0) || t <= 0) {
      Fail(ErrorCode::kNonpositiveRegret,
           "regret " + std::to_string(reg) + " at T = " + std::to_string(t));
    }
    double lx = std::log(static_cast<double>(t));
    double ly = std::log(reg);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(curve.size());
  const double denom = m * sxx - sx * sx;
  if (denom <= 0.0) Fail(ErrorCode::kConfigInvalid, "slope fit needs distinct T values");
  SlopeFit fit;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

// ---------------------------------------------------------------------------
// Phases.

enum class StartRule {
  kFirstVertex,     // first t >= 1 with x^t a vertex
  kEnergyIncrease,  // first t > 0 with H(y^t) > H(y^1), then the next vertex
};

template <typename Scalar>
struct Phase {
  int k = 0;
  std::int64_t start = 0;   // t_k
  std::int64_t length = 0;  // tau_k
  int vertex = 0;
  Scalar start_energy{};    // gamma_k = H(y^{t_k})
  bool energy_increased = false;  // c_k
};

template <typename Scalar>
struct PhaseSummary {
  std::vector<Phase<Scalar>> phases;
  std::int64_t t0 = 0;
  std::int64_t horizon = 0;
  int n = 0;
  StartRule rule = StartRule::kFirstVertex;

  int K() const { return static_cast<int>(phases.size()); }
  std::vector<int> Vertices() const {
    std::vector<int> v;
    for (const auto& p : phases) v.push_back(p.vertex);
    return v;
  }
};

// A phase runs from one vertex iterate until the next iterate at a different
// vertex. Non-vertex iterates (GD edge visits) stay in the current phase. The
// last phase is cut at T and may be partial.
template <typename Scalar>
PhaseSummary<Scalar> DetectPhases(const Trajectory<Scalar>& traj,
                                  StartRule rule = StartRule::kFirstVertex) {
  if (traj.xs.empty()) Fail(ErrorCode::kEmptyTrajectory, "trajectory has no iterates");
  PhaseSummary<Scalar> summary;
  summary.horizon = traj.horizon();
  summary.n = traj.n();
  summary.rule = rule;
  const std::int64_t horizon = traj.horizon();

  std::int64_t from = 1;
  if (rule == StartRule::kEnergyIncrease) {
    std::optional<std::int64_t> first_increase;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      if (StrictlyGreater(traj.energies[t], traj.energies[1])) {
        first_increase = t;
        break;
      }
    }
    if (!first_increase) {
      summary.t0 = horizon + 1;
      return summary;
    }
    from = *first_increase;
  }
  std::optional<std::int64_t> t0;
  for (std::int64_t t = from; t <= horizon; ++t) {
    if (traj.xs[t].IsVertex()) {
      t0 = t;
      break;
    }
  }
  if (!t0) {
    Fail(ErrorCode::kNoVertexReached,
         "no vertex iterate in t = " + std::to_string(from) + ".." + std::to_string(horizon));
  }
  summary.t0 = *t0;

  auto open = [&](std::int64_t t, int vertex) {
    Phase<Scalar> p;
    p.k = summary.K();
    p.start = t;
    p.vertex = vertex;
    p.start_energy = traj.energies[t];
    if (!summary.phases.empty()) {
      p.energy_increased =
          StrictlyGreater(p.start_energy, summary.phases.back().start_energy);
    }
    summary.phases.push_back(p);
  };
  open(*t0, *traj.xs[*t0].VertexIndex());
  for (std::int64_t t = *t0 + 1; t <= horizon; ++t) {
    std::optional<int> v = traj.xs[t].VertexIndex();
    if (v && *v != summary.phases.back().vertex) {
      summary.phases.back().length = t - summary.phases.back().start;
      open(t, *v);
    }
  }
  summary.phases.back().length = horizon + 1 - summary.phases.back().start;
  return summary;
}

struct CyclingVerdict {
  bool pass = true;
  std::optional<int> first_violation;  // phase index k whose vertex != prev+1
};

inline CyclingVerdict VerifyCycling(const std::vector<int>& vertices, int n) {
  CyclingVerdict verdict;
  for (std::size_t k = 1; k < vertices.size(); ++k) {
    if (vertices[k] != (vertices[k - 1] + 1) % n) {
      verdict.pass = false;
      verdict.first_violation = static_cast<int>(k);
      break;
    }
  }
  return verdict;
}

template <typename Scalar>
CyclingVerdict VerifyCycling(const PhaseSummary<Scalar>& phases, int n) {
  return VerifyCycling(phases.Vertices(), n);
}

// ---------------------------------------------------------------------------
// Per-step energy growth against the case analysis.

enum class TransitionClass {
  kFpStay,         // x^t = x^{t+1}: dH = 0
  kFpSwitch,       // x^t != x^{t+1}: 0 <= dH <= a_max
  kGdVertexStay,   // (i)   P_i -> P_i: dH = 0
  kGdVertexNext,   // (ii)  P_i -> P_{i+1}: 1 < dH < eta a_max
  kGdVertexEdge,   // (iii) P_i -> P_{i~i+1}: 0 <= dH <= 1
  kGdEdgeVertex,   // (iv)  P_{i~i+1} -> P_{i+1} or P_{i+2}: 0 <= dH <= (eta a_max)^2/4
  kGdEdgeEdge,     // (v)   P_{i~i+1} -> P_{i+1~i+2}: 0 <= dH <= eta a_max + 5/4
  kUnclassified,
};

inline std::string TransitionName(TransitionClass c) {
  switch (c) {
    case TransitionClass::kFpStay: return "fp_stay";
    case TransitionClass::kFpSwitch: return "fp_switch";
    case TransitionClass::kGdVertexStay: return "gd_i_vertex_stay";
    case TransitionClass::kGdVertexNext: return "gd_ii_vertex_next";
    case TransitionClass::kGdVertexEdge: return "gd_iii_vertex_edge";
    case TransitionClass::kGdEdgeVertex: return "gd_iv_edge_vertex";
    case TransitionClass::kGdEdgeEdge: return "gd_v_edge_edge";
    case TransitionClass::kUnclassified: return "unclassified";
  }
  return "?";
}

struct LedgerEntry {
  std::int64_t t = 0;
  double delta = 0.0;
  TransitionClass transition = TransitionClass::kUnclassified;
  double bound_lo = 0.0;
  double bound_hi = 0.0;
  bool ambiguous = false;  // float mode: y^t or y^{t+1} within 1e-9 of a region boundary
  bool within_bound = false;

  bool classified() const { return transition != TransitionClass::kUnclassified; }
};

struct LedgerTally {
  std::int64_t steps = 0;
  std::int64_t classified = 0;
  std::int64_t unclassified = 0;
  std::int64_t ambiguous = 0;
  std::int64_t violations = 0;  // unambiguous, classified, outside the bound
};

// One entry per step t = 1..T (FP: 1..T-1, since the class needs x^{t+1}).
template <typename Scalar>
std::vector<LedgerEntry> EnergyGrowthLedger(const Trajectory<Scalar>& traj) {
  std::vector<LedgerEntry> ledger;
  const std::int64_t horizon = traj.horizon();
  const int n = traj.n();
  const double a_max = ToDouble(traj.matrix.a_max());
  const double eta = ToDouble(traj.config.eta);
  const bool fp = traj.config.algorithm == Algorithm::kFictitiousPlay;
  auto wrap = [n](int i) { return ((i % n) + n) % n; };

  std::optional<RegionTag> next_tag;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    LedgerEntry e;
    e.t = t;
    e.delta = ToDouble(Scalar(traj.energies[t + 1] - traj.energies[t]));
    if (fp) {
      if (t + 1 > horizon) break;
      if (traj.xs[t] == traj.xs[t + 1]) {
        e.transition = TransitionClass::kFpStay;
        e.bound_lo = e.bound_hi = 0.0;
      } else {
        e.transition = TransitionClass::kFpSwitch;
        e.bound_lo = 0.0;
        e.bound_hi = a_max;
      }
    } else {
      RegionTag from = next_tag ? *next_tag : ClassifyRegion(traj.ys[t]);
      RegionTag to = ClassifyRegion(traj.ys[t + 1]);
      next_tag = to;
      e.ambiguous = from.ambiguous || to.ambiguous;
      const int i = from.index;
      using K = RegionKind;
      if (from.kind == K::kVertex && to.kind == K::kVertex && to.index == i) {
        e.transition = TransitionClass::kGdVertexStay;
        e.bound_lo = e.bound_hi = 0.0;
      } else if (from.kind == K::kVertex && to.kind == K::kVertex &&
                 to.index == wrap(i + 1)) {
        e.transition = TransitionClass::kGdVertexNext;
        e.bound_lo = 1.0;
        e.bound_hi = eta * a_max;
      } else if (from.kind == K::kVertex && to.kind == K::kEdge && to.index == i) {
        e.transition = TransitionClass::kGdVertexEdge;
        e.bound_lo = 0.0;
        e.bound_hi = 1.0;
      } else if (from.kind == K::kEdge && to.kind == K::kVertex &&
                 (to.index == wrap(i + 1) || to.index == wrap(i + 2))) {
        e.transition = TransitionClass::kGdEdgeVertex;
        e.bound_lo = 0.0;
        e.bound_hi = (eta * a_max) * (eta * a_max) / 4.0;
      } else if (from.kind == K::kEdge && to.kind == K::kEdge && to.index == wrap(i + 1)) {
        e.transition = TransitionClass::kGdEdgeEdge;
        e.bound_lo = 0.0;
        e.bound_hi = eta * a_max + 1.25;
      }
    }
    e.within_bound = e.classified() && e.delta >= e.bound_lo - kBoundTolerance &&
                     e.delta <= e.bound_hi + kBoundTolerance;
    ledger.push_back(e);
  }
  return ledger;
}

inline LedgerTally TallyLedger(const std::vector<LedgerEntry>& ledger) {
  LedgerTally tally;
  for (const auto& e : ledger) {
    ++tally.steps;
    if (e.ambiguous) {
      ++tally.ambiguous;
      continue;
    }
    if (!e.classified()) {
      ++tally.unclassified;
      continue;
    }
    ++tally.classified;
    if (!e.within_bound) ++tally.violations;
  }
  return tally;
}

// ---------------------------------------------------------------------------
// Phase length versus starting energy.

struct PhaseLengthFit {
  double alpha = 0.0;  // slope of the support line
  double beta = 0.0;   // smallest beta >= 0 with tau_k >= alpha gamma_k - beta
  double min_residual = 0.0;
  bool degenerate = false;  // all gamma_k equal: alpha unconstrained
  bool positive = false;    // alpha > 0 (or degenerate)
  int phases_used = 0;
};

// Fits tau_k >= alpha * gamma_k - beta over the complete phases (the final,
// truncated phase is excluded). alpha is the least-squares slope of tau on
// gamma; beta is then the smallest offset that makes the line a lower bound.
template <typename Scalar>
PhaseLengthFit PhaseLengthCheck(const PhaseSummary<Scalar>& summary) {
  if (summary.K() < 2 * summary.n) {
    Fail(ErrorCode::kTooFewPhases, std::to_string(summary.K()) + " phases, need " +
                                       std::to_string(2 * summary.n));
  }
  std::vector<double> gamma, tau;
  for (int k = 0; k + 1 < summary.K(); ++k) {
    gamma.push_back(ToDouble(summary.phases[k].start_energy));
    tau.push_back(static_cast<double>(summary.phases[k].length));
  }
  PhaseLengthFit fit;
  fit.phases_used = static_cast<int>(gamma.size());
  const double m = static_cast<double>(gamma.size());
  double mean_g = 0, mean_t = 0;
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    mean_g += gamma[k] / m;
    mean_t += tau[k] / m;
  }
  double sgg = 0, sgt = 0;
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    sgg += (gamma[k] - mean_g) * (gamma[k] - mean_g);
    sgt += (gamma[k] - mean_g) * (tau[k] - mean_t);
  }
  const double spread = *std::max_element(gamma.begin(), gamma.end()) -
                        *std::min_element(gamma.begin(), gamma.end());
  if (spread <= 1e-12 * std::max(1.0, std::abs(mean_g))) {
    fit.degenerate = true;
    fit.positive = true;
    fit.alpha = std::numeric_limits<double>::infinity();
    fit.beta = std::numeric_limits<double>::infinity();
    fit.min_residual = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  fit.alpha = sgt / sgg;
  fit.positive = fit.alpha > 0.0;
  fit.beta = 0.0;
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    fit.beta = std::max(fit.beta, fit.alpha * gamma[k] - tau[k]);
  }
  fit.min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    fit.min_residual = std::min(fit.min_residual, tau[k] - fit.alpha * gamma[k] + fit.beta);
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Small-stepsize and boundary properties of GD.

// max_t |<x*, y^t>|. Zero in exact arithmetic since <x*, A x> = 0 for all x.
template <typename Scalar>
Scalar CheckDualSubspace(const Trajectory<Scalar>& traj, const SimplexPoint<Scalar>& xstar) {
  if (xstar.size() != traj.n()) Fail(ErrorCode::kDimensionMismatch, "x* size != n");
  Scalar worst(0);
  for (const auto& y : traj.ys) {
    Scalar dot(0);
    for (int i = 0; i < traj.n(); ++i) dot += xstar[i] * y[i];
    worst = std::max(worst, Abs(dot));
  }
  return worst;
}

template <typename Scalar>
struct BoundaryReport {
  std::optional<std::int64_t> first_boundary_t;
  bool ever_returns_interior = false;
  std::optional<Scalar> energy_at_first_boundary;
  // Largest energy seen at an interior iterate (t >= 1); the empirical stand-in
  // for the invariance threshold.
  std::optional<Scalar> interior_energy_max;
  // First t >= 1 with a non-interior iterate whose energy exceeds that maximum.
  std::optional<std::int64_t> threshold_t;
  bool threshold_property_holds = true;
};

template <typename Scalar>
BoundaryReport<Scalar> BoundaryInvarianceCheck(const Trajectory<Scalar>& traj) {
  BoundaryReport<Scalar> report;
  const std::int64_t horizon = traj.horizon();
  for (std::int64_t t = 0; t <= horizon; ++t) {
    const bool interior = traj.supports[t].size() == traj.n();
    if (!interior && !report.first_boundary_t) {
      report.first_boundary_t = t;
      report.energy_at_first_boundary = traj.energies[t];
    } else if (interior && report.first_boundary_t) {
      report.ever_returns_interior = true;
    }
    if (interior && t >= 1) {
      if (!report.interior_energy_max || traj.energies[t] > *report.interior_energy_max) {
        report.interior_energy_max = traj.energies[t];
      }
    }
  }
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const bool interior = traj.supports[t].size() == traj.n();
    if (!report.threshold_t) {
      if (!interior && (!report.interior_energy_max ||
                        traj.energies[t] > *report.interior_energy_max)) {
        report.threshold_t = t;
      }
    } else if (interior) {
      report.threshold_property_holds = false;
      break;
    }
  }
  return report;
}

enum class CheckStatus { kPass, kFail, kNotApplicable };

inline std::string CheckStatusName(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kNotApplicable: return "not_applicable";
  }
  return "?";
}

struct SmallStepReport {
  CheckStatus status = CheckStatus::kNotApplicable;
  double final_energy = 0.0;
  double energy_bound = 0.0;  // n a_max^2 / 2
  double regret = 0.0;
  double regret_bound = 0.0;  // sqrt(T) (n a_max^2/2 + 1)
};

// If every iterate is interior, phi*(y^{T+1}) <= n a_max^2/2 and
// Reg(T) <= sqrt(T)(n a_max^2/2 + 1). Meant for eta = 1/sqrt(T).
template <typename Scalar>
SmallStepReport SmallStepsizeEnergyCheck(const Trajectory<Scalar>& traj) {
  SmallStepReport report;
  const double n = traj.n();
  const double a_max = ToDouble(traj.matrix.a_max());
  report.energy_bound = n * a_max * a_max / 2.0;
  report.final_energy = ToDouble(EnergyGd(traj.ys.back()));
  report.regret = ToDouble(RegretAt(traj, traj.horizon()));
  const double root_t = std::sqrt(static_cast<double>(std::max<std::int64_t>(traj.horizon(), 1)));
  report.regret_bound = root_t * (report.energy_bound + 1.0);
  for (const auto& s : traj.supports) {
    if (s.size() != traj.n()) return report;
  }
  const bool ok = report.final_energy <= report.energy_bound + 1e-9 &&
                  report.regret <= report.regret_bound + 1e-6;
  report.status = ok ? CheckStatus::kPass : CheckStatus::kFail;
  return report;
}

// ---------------------------------------------------------------------------
// Whole-trajectory invariants.

// max_t |y^{t+1} - y^t - eta A x^t|_inf (constant stepsize).
template <typename Scalar>
Scalar DualConsistencyResidual(const Trajectory<Scalar>& traj) {
  Scalar worst(0);
  for (std::int64_t t = 0; t + 1 < static_cast<std::int64_t>(traj.ys.size()); ++t) {
    std::vector<Scalar> ax = traj.matrix.Apply(traj.xs[t]);
    for (int i = 0; i < traj.n(); ++i) {
      Scalar r = traj.ys[t + 1][i] - traj.ys[t][i] - traj.config.eta * ax[i];
      worst = std::max(worst, Abs(r));
    }
  }
  return worst;
}

// Smallest relative energy step over t >= 1 (negative means a decrease).
template <typename Scalar>
std::optional<std::int64_t> FirstEnergyDecrease(const Trajectory<Scalar>& traj,
                                                double rel_tol = 1e-9) {
  for (std::size_t t = 1; t + 1 < traj.energies.size(); ++t) {
    const Scalar& h0 = traj.energies[t];
    const Scalar& h1 = traj.energies[t + 1];
    if constexpr (ScalarTraits<Scalar>::kExact) {
      if (h1 < h0) return static_cast<std::int64_t>(t);
    } else {
      if (h1 - h0 < -rel_tol * std::max(1.0, std::abs(h0))) {
        return static_cast<std::int64_t>(t);
      }
    }
  }
  return std::nullopt;
}

}  // namespace rpsdyn

#endif  // RPSDYN_ANALYSIS_HPP_

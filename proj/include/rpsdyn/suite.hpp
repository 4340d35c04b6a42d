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

#ifndef RPSDYN_SUITE_HPP_
#define RPSDYN_SUITE_HPP_

// The acceptance suite: one check per criterion, each isolated so that an
// exception aborts only that check. Shared by `rpsdyn verify` and the
// acceptance test binary.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "rpsdyn/analysis.hpp"
#include "rpsdyn/dynamics.hpp"
#include "rpsdyn/error.hpp"
#include "rpsdyn/game.hpp"
#include "rpsdyn/io.hpp"
#include "rpsdyn/oracle.hpp"
#include "rpsdyn/scalar.hpp"

namespace rpsdyn {

enum class VerifyLevel { kQuick, kFull };

struct SuiteOptions {
  VerifyLevel level = VerifyLevel::kFull;
  // "eta0": run the large-stepsize vertex check with eta = 0.
  std::optional<std::string> inject_fault;
  std::uint64_t seed = 20260101;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
  double seconds = 0.0;
  std::optional<double> limit_seconds;
  std::optional<std::string> error;

  std::string Line() const {
    std::ostringstream out;
    char id_text[8];
    std::snprintf(id_text, sizeof(id_text), "%02d", id);
    char time_text[32];
    std::snprintf(time_text, sizeof(time_text), "%.3f", seconds);
    out << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << id_text << ' ' << name << ": "
        << measured;
    if (error) out << (measured.empty() ? "" : "; ") << "error: " << *error;
    out << " (" << time_text << " s";
    if (limit_seconds) out << ", limit " << *limit_seconds << " s";
    out << ')';
    return out.str();
  }

  Json ToJson() const {
    return {{"id", id},
            {"name", name},
            {"pass", pass},
            {"measured", measured},
            {"seconds", seconds},
            {"limit_seconds", limit_seconds ? Json(*limit_seconds) : Json(nullptr)},
            {"error", error ? Json(*error) : Json(nullptr)}};
  }
};

class AcceptanceSuite {
 public:
  explicit AcceptanceSuite(SuiteOptions options) : options_(std::move(options)) {}

  std::int64_t Cap(std::int64_t full) const {
    return options_.level == VerifyLevel::kQuick ? std::min<std::int64_t>(full, 1000) : full;
  }

  std::vector<std::int64_t> HorizonSweep() const {
    if (options_.level == VerifyLevel::kQuick) return {10, 100, 1000};
    return {100, 1000, 10000, 100000};
  }

  std::vector<CriterionResult> RunAll() {
    std::vector<CriterionResult> out;
    out.push_back(Guard(1, "fp_sqrt_regret", 5.0, [this](auto& r) { FpSqrtRegret(r); }));
    out.push_back(Guard(2, "fp_tournament_constant_regret", 10.0,
                        [this](auto& r) { TournamentConstantRegret(r); }));
    out.push_back(Guard(3, "gd_large_step_vertex", 1.0, [this](auto& r) { GdFirstVertex(r); }));
    out.push_back(Guard(4, "gd_cycling_edge_visits", 2.0, [this](auto& r) { GdCycling(r); }));
    out.push_back(Guard(5, "gd_sqrt_regret", 10.0, [this](auto& r) { GdSqrtRegret(r); }));
    out.push_back(Guard(8, "small_stepsize_bound", 2.0, [this](auto& r) { SmallStepsize(r); }));
    out.push_back(Guard(9, "projection_oracle", 5.0, [this](auto& r) { ProjectionOracle(r); }));
    out.push_back(Guard(10, "conjugate_gradient", 1.0, [this](auto& r) { ConjugateGradient(r); }));
    out.push_back(Guard(11, "dual_subspace", 5.0, [this](auto& r) { DualSubspace(r); }));
    out.push_back(Guard(13, "boundary_invariance", 2.0, [this](auto& r) { BoundaryInvariance(r); }));
    out.push_back(Guard(14, "nash_solver", 1.0, [this](auto& r) { NashSolver(r); }));
    // Aggregates over everything recorded above.
    out.push_back(Guard(6, "energy_monotonicity", std::nullopt,
                        [this](auto& r) { EnergyMonotonicity(r); }));
    out.push_back(Guard(7, "energy_case_bounds", std::nullopt,
                        [this](auto& r) { EnergyCaseBounds(r); }));
    out.push_back(Guard(12, "regret_identities", std::nullopt,
                        [this](auto& r) { RegretIdentities(r); }));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
  }

  CriterionResult RunOne(int id) {
    for (const auto& r : RunAll()) {
      if (r.id == id) return r;
    }
    Fail(ErrorCode::kConfigInvalid, "no criterion " + std::to_string(id));
  }

 private:
  struct Audit {
    std::string label;
    std::optional<std::int64_t> first_decrease;
    bool identities_ok = true;
    double worst_relative_error = 0.0;
    std::optional<bool> prop5_ok;
  };

  struct LedgerRecord {
    std::string label;
    LedgerTally tally;
  };

  using Check = std::function<void(CriterionResult&)>;

  CriterionResult Guard(int id, std::string name, std::optional<double> limit, const Check& check) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.limit_seconds = limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      check(r);
    } catch (const Error& e) {
      r.pass = false;
      r.error = e.what();
    } catch (const std::exception& e) {
      r.pass = false;
      r.error = std::string("unexpected: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() -
                excluded_seconds_;
    excluded_seconds_ = 0.0;
    if (limit && r.seconds > *limit) {
      r.pass = false;
      r.measured += (r.measured.empty() ? "" : "; ") + std::string("over the time limit");
    }
    return r;
  }

  // Time spent on bookkeeping for the aggregate criteria is not charged to the
  // check that produced the trajectory.
  template <typename F>
  void Untimed(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    excluded_seconds_ +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  template <typename Scalar>
  void Observe(const std::string& label, const Trajectory<Scalar>& traj) {
    Untimed([&] {
      Audit a;
      a.label = label;
      a.first_decrease = FirstEnergyDecrease(traj);
      RegretReport<Scalar> report = Regret(traj);
      std::vector<Scalar> others = {RegretDirect(traj), RegretSummedPayoff(traj)};
      if (traj.config.algorithm == Algorithm::kFictitiousPlay) {
        others.push_back(report.regret_by_energy);
      }
      for (const Scalar& v : others) {
        if constexpr (ScalarTraits<Scalar>::kExact) {
          if (v != report.regret_total) {
            a.identities_ok = false;
            a.worst_relative_error = std::numeric_limits<double>::infinity();
          }
        } else {
          double scale = std::max({1.0, std::abs(v), std::abs(report.regret_total)});
          double err = std::abs(v - report.regret_total) / scale;
          a.worst_relative_error = std::max(a.worst_relative_error, err);
          if (err > 1e-9) a.identities_ok = false;
        }
      }
      if (report.regret_upper_ftrl) {
        if constexpr (ScalarTraits<Scalar>::kExact) {
          a.prop5_ok = report.regret_total <= *report.regret_upper_ftrl;
        } else {
          a.prop5_ok = report.regret_total <= *report.regret_upper_ftrl + 1e-9;
        }
      }
      audits_.push_back(std::move(a));
    });
  }

  template <typename Scalar>
  void RecordLedger(const std::string& label, const Trajectory<Scalar>& traj) {
    Untimed([&] { ledgers_.push_back({label, TallyLedger(EnergyGrowthLedger(traj))}); });
  }

  static std::string Fmt(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4g", v);
    return buffer;
  }

  // Shared config for the large-stepsize GD checks.
  struct LargeStepSetup {
    RpsMatrix<double> a = MakeUnweightedRps<double>(4);
    SimplexPoint<double> x0{std::vector<double>{0.05, 0.35, 0.39, 0.21}};
    double gamma = 0.0;
    double eta = 0.0;
  };

  static LargeStepSetup LargeStep() {
    LargeStepSetup s;
    s.gamma = Gamma(s.a, s.x0);
    s.eta = std::max(2.0 / s.a.a_min(), 1.0 / s.gamma) + 1.0;
    return s;
  }

  static LearnerConfig<double> GdConfig(double eta, std::int64_t horizon,
                                        const SimplexPoint<double>& x0) {
    LearnerConfig<double> c;
    c.algorithm = Algorithm::kGradientDescent;
    c.eta = eta;
    c.horizon = horizon;
    c.x0 = x0;
    return c;
  }

  // Slope of log Reg(T) over the horizon sweep, from prefixes of one run.
  template <typename Scalar>
  std::pair<double, double> SweepFit(const Trajectory<Scalar>& traj, std::string& detail) {
    std::vector<std::pair<std::int64_t, double>> curve;
    double worst_ratio = 0.0;
    for (std::int64_t t : HorizonSweep()) {
      double reg = ToDouble(RegretAt(traj, t));
      curve.emplace_back(t, reg);
      worst_ratio = std::max(worst_ratio, reg / std::sqrt(static_cast<double>(t)));
    }
    double slope = FitRegretSlope(curve).slope;
    detail = "slope " + Fmt(slope) + ", max Reg/sqrtT " + Fmt(worst_ratio);
    return {slope, worst_ratio};
  }

  // 1. FP regret grows like sqrt(T) under several tiebreak rules.
  void FpSqrtRegret(CriterionResult& r) {
    const std::int64_t horizon = HorizonSweep().back();
    bool pass = true;
    std::vector<std::pair<std::string, TiebreakRule>> rules = {
        {"lexicographic", TiebreakRule::Lexicographic()},
        {"random_seeded", TiebreakRule::RandomSeeded(options_.seed)},
        {"prefer_switch", TiebreakRule::PreferSwitch()}};
    for (int n : {3, 4}) {
      for (const auto& [rule_name, rule] : rules) {
        LearnerConfig<double> c;
        c.algorithm = Algorithm::kFictitiousPlay;
        c.horizon = horizon;
        c.x0 = SimplexPoint<double>::Vertex(n, 0);
        c.tiebreak = rule;
        Trajectory<double> traj = Run(c, MakeUnweightedRps<double>(n));
        std::string detail;
        auto [slope, ratio] = SweepFit(traj, detail);
        const bool ok = slope >= 0.0 && slope <= 0.6 && ratio <= 10.0;
        pass = pass && ok;
        r.measured += (r.measured.empty() ? "" : "; ") + std::string("n=") +
                      std::to_string(n) + " " + rule_name + " " + detail;
        const std::string label = "fp n=" + std::to_string(n) + " " + rule_name;
        Observe(label, traj);
        RecordLedger(label, traj);
      }
    }
    r.pass = pass;
  }

  // 2. Tournament tiebreaking keeps the FP energy constant (exact arithmetic).
  void TournamentConstantRegret(CriterionResult& r) {
    bool pass = true;
    for (int n : {3, 4, 5}) {
      LearnerConfig<Rational> c;
      c.algorithm = Algorithm::kFictitiousPlay;
      c.horizon = Cap(10000);
      c.x0 = SimplexPoint<Rational>::Vertex(n, 0);
      c.tiebreak = TiebreakRule::Tournament();
      Trajectory<Rational> traj = Run(c, MakeUnweightedRps<Rational>(n));
      const Rational& psi1 = traj.energies[1];
      std::optional<std::int64_t> changed;
      for (std::size_t t = 1; t < traj.energies.size(); ++t) {
        if (traj.energies[t] != psi1) {
          changed = static_cast<std::int64_t>(t);
          break;
        }
      }
      RegretReport<Rational> reg = Regret(traj);
      const bool ok = !changed && reg.regret_total == Rational(2) * psi1;
      pass = pass && ok;
      r.measured += (r.measured.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) +
                    " Psi(y^1)=" + FormatScalar(psi1) +
                    " Reg=" + FormatScalar(reg.regret_total) +
                    (changed ? " energy changes at t=" + std::to_string(*changed) : "");
      Observe("fp tournament n=" + std::to_string(n), traj);
    }
    r.pass = pass;
  }

  // 3. Above the large-stepsize threshold, x^1 is a vertex.
  void GdFirstVertex(CriterionResult& r) {
    LargeStepSetup s = LargeStep();
    std::vector<double> etas = {s.eta, 10.0};
    if (options_.inject_fault == "eta0") etas = {0.0};
    bool pass = true;
    for (double eta : etas) {
      Trajectory<double> traj = Run(GdConfig(eta, 1, s.x0), s.a);
      const bool ok = traj.supports[1].size() == 1;
      pass = pass && ok;
      r.measured += (r.measured.empty() ? "" : "; ") + std::string("eta=") + Fmt(eta) +
                    " |supp(x^1)|=" + std::to_string(traj.supports[1].size());
      Observe("gd vertex eta=" + Fmt(eta), traj);
    }
    r.measured = "gamma(x0)=" + Fmt(s.gamma) + "; " + r.measured;
    r.pass = pass;
  }

  // 4. After t0 the phase vertices advance by one and no edge region is
  // occupied on two consecutive steps.
  void GdCycling(CriterionResult& r) {
    LargeStepSetup s = LargeStep();
    Trajectory<double> traj = Run(GdConfig(s.eta, Cap(10000), s.x0), s.a);
    PhaseSummary<double> phases = DetectPhases(traj, StartRule::kFirstVertex);
    CyclingVerdict cycling = VerifyCycling(phases, traj.n());
    std::optional<std::int64_t> repeated_edge;
    std::optional<RegionTag> previous;
    for (std::int64_t t = phases.t0; t <= traj.horizon(); ++t) {
      RegionTag tag = ClassifyRegion(traj.ys[t]);
      if (previous && tag.kind == RegionKind::kEdge && previous->kind == RegionKind::kEdge &&
          tag.index == previous->index) {
        repeated_edge = t;
        break;
      }
      previous = tag;
    }
    r.pass = cycling.pass && !repeated_edge && phases.K() >= 2;
    r.measured = "eta=" + Fmt(s.eta) + " t0=" + std::to_string(phases.t0) +
                 " phases=" + std::to_string(phases.K()) +
                 (cycling.first_violation
                      ? " cycling violated at k=" + std::to_string(*cycling.first_violation)
                      : " cycling ok") +
                 (repeated_edge ? " repeated edge at t=" + std::to_string(*repeated_edge)
                                : " no repeated edge");
    Observe("gd cycling", traj);
    RecordLedger("gd cycling", traj);
  }

  // 5. Large-stepsize GD regret grows like sqrt(T).
  void GdSqrtRegret(CriterionResult& r) {
    LargeStepSetup s = LargeStep();
    Trajectory<double> traj = Run(GdConfig(s.eta, HorizonSweep().back(), s.x0), s.a);
    std::string detail;
    auto [slope, ratio] = SweepFit(traj, detail);
    r.pass = slope <= 0.6 && ratio <= 10.0;
    r.measured = "eta=" + Fmt(s.eta) + " " + detail;
    Observe("gd sqrt regret", traj);
  }

  // 8. With eta = 1/sqrt(T) and interior iterates the energy stays bounded.
  void SmallStepsize(CriterionResult& r) {
    const std::int64_t horizon = Cap(10000);
    auto a = MakeUnweightedRps<double>(3);
    SimplexPoint<double> x0(std::vector<double>{0.3, 0.4, 0.3});
    Trajectory<double> traj =
        Run(GdConfig(1.0 / std::sqrt(static_cast<double>(horizon)), horizon, x0), a);
    SmallStepReport rep = SmallStepsizeEnergyCheck(traj);
    r.pass = rep.status != CheckStatus::kFail;
    r.measured = CheckStatusName(rep.status) + " phi*=" + Fmt(rep.final_energy) + " (bound " +
                 Fmt(rep.energy_bound) + ") Reg=" + Fmt(rep.regret) + " (bound " +
                 Fmt(rep.regret_bound) + ")";
    Observe("gd small step", traj);
  }

  // 9. FindSupport / projection / energy against brute-force enumeration.
  void ProjectionOracle(CriterionResult& r) {
    std::mt19937_64 rng(options_.seed);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    int support_mismatch = 0;
    double worst_x = 0.0, worst_energy = 0.0;
    for (int n : {3, 4, 5}) {
      for (int trial = 0; trial < 1000; ++trial) {
        DualVector<double> y(n);
        for (auto& v : y) v = unif(rng);
        ProjectionCandidate<double> brute = ProjectBruteforce(y);
        if (!(FindSupport(y) == brute.support)) ++support_mismatch;
        SimplexPoint<double> x = GdPrimal(y);
        for (int i = 0; i < n; ++i) worst_x = std::max(worst_x, std::abs(x[i] - (*brute.point)[i]));
        worst_energy = std::max(worst_energy, std::abs(EnergyGd(y) - brute.objective));
      }
    }
    r.pass = support_mismatch == 0 && worst_x <= 1e-10 && worst_energy <= 1e-10;
    r.measured = "3000 trials, seed " + std::to_string(options_.seed) +
                 ", support mismatches " + std::to_string(support_mismatch) +
                 ", max |dx| " + Fmt(worst_x) + ", max |dE| " + Fmt(worst_energy);
  }

  // 10. Finite-difference gradient of the GD energy equals the primal map.
  void ConjugateGradient(CriterionResult& r) {
    std::mt19937_64 rng(options_.seed + 1);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    double worst = 0.0;
    int rejected = 0;
    for (int n : {3, 4}) {
      int accepted = 0;
      while (accepted < 100) {
        DualVector<double> y(n);
        for (auto& v : y) v = unif(rng);
        if (ClassifyRegion(y).margin <= 10.0 * kDefaultFdStep) {
          ++rejected;
          continue;
        }
        std::vector<double> g = GradFd(y);
        SimplexPoint<double> x = GdPrimal(y);
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(g[i] - x[i]));
        ++accepted;
      }
    }
    r.pass = worst <= 1e-5;
    r.measured = "200 points (" + std::to_string(rejected) + " rejected near boundaries), max |grad - Q| " +
                 Fmt(worst);
  }

  // 11. <x*, y^t> = 0 along the dynamics.
  void DualSubspace(CriterionResult& r) {
    {
      auto a = MakeRps<Rational>({Rational(1), Rational(2), Rational(3)});
      NashResult<Rational> nash = InteriorNash(a);
      LearnerConfig<Rational> c;
      c.algorithm = Algorithm::kGradientDescent;
      c.eta = Rational(10);
      c.horizon = Cap(1000);
      c.x0 = SimplexPoint<Rational>(
          std::vector<Rational>{Rational(3, 10), Rational(2, 5), Rational(3, 10)});
      Trajectory<Rational> traj = Run(c, a);
      Rational worst = CheckDualSubspace(traj, nash.point);
      r.pass = worst == Rational(0);
      r.measured = "rational T=" + std::to_string(c.horizon) + " max|<x*,y>|=" + FormatScalar(worst);
      Observe("dual subspace rational", traj);
    }
    {
      auto a = MakeRps<double>({1.0, 2.0, 3.0});
      NashResult<double> nash = InteriorNash(a);
      const std::int64_t horizon = Cap(10000);
      SimplexPoint<double> x0(std::vector<double>{0.3, 0.4, 0.3});
      Trajectory<double> traj =
          Run(GdConfig(1.0 / std::sqrt(static_cast<double>(horizon)), horizon, x0), a);
      double worst = CheckDualSubspace(traj, nash.point);
      const double bound = 1e-8 * static_cast<double>(horizon);
      r.pass = r.pass && worst <= bound;
      r.measured += "; float T=" + std::to_string(horizon) + " max|<x*,y>|=" + Fmt(worst) +
                    " (bound " + Fmt(bound) + ")";
      Observe("dual subspace float", traj);
    }
  }

  // 13. Once a boundary iterate exceeds every interior energy seen, the
  // iterates never return to the interior.
  void BoundaryInvariance(CriterionResult& r) {
    const std::int64_t horizon = Cap(10000);
    bool pass = true;
    std::vector<std::pair<int, std::vector<double>>> setups = {
        {3, {0.3, 0.4, 0.3}}, {4, {0.2, 0.2, 0.25, 0.35}}};
    for (const auto& [n, coords] : setups) {
      Trajectory<double> traj = Run(GdConfig(0.3, horizon, SimplexPoint<double>(coords)),
                                    MakeUnweightedRps<double>(n));
      BoundaryReport<double> b = BoundaryInvarianceCheck(traj);
      pass = pass && b.threshold_property_holds;
      r.measured += (r.measured.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) +
                    " first boundary t=" +
                    (b.first_boundary_t ? std::to_string(*b.first_boundary_t) : "none") +
                    " threshold t=" + (b.threshold_t ? std::to_string(*b.threshold_t) : "none") +
                    " D^=" + (b.interior_energy_max ? Fmt(*b.interior_energy_max) : "none") +
                    (b.threshold_property_holds ? " holds" : " violated");
      Observe("boundary n=" + std::to_string(n), traj);
    }
    r.pass = pass;
  }

  // 14. Interior Nash equilibria for random weights.
  void NashSolver(CriterionResult& r) {
    std::mt19937_64 rng(options_.seed + 2);
    std::uniform_int_distribution<int> dim(3, 8);
    std::uniform_real_distribution<double> weight(0.5, 5.0);
    std::map<int, std::pair<int, int>> per_n;  // n -> (ok, total)
    double worst_residual = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = dim(rng);
      std::vector<double> w(n);
      for (auto& v : w) v = weight(rng);
      auto& [ok, total] = per_n[n];
      ++total;
      try {
        NashResult<double> nash = InteriorNash(MakeRps(w));
        double min_coord = *std::min_element(nash.point.coords().begin(), nash.point.coords().end());
        worst_residual = std::max(worst_residual, nash.residual);
        if (nash.residual <= 1e-12 && min_coord > 0.0) ++ok;
      } catch (const Error&) {
      }
    }
    NashResult<double> known = InteriorNash(MakeRps<double>({1.0, 2.0, 3.0}));
    const std::vector<double> expected = {1.0 / 3.0, 0.5, 1.0 / 6.0};
    double known_err = 0.0;
    for (int i = 0; i < 3; ++i) known_err = std::max(known_err, std::abs(known.point[i] - expected[i]));
    bool all = known_err <= 1e-12;
    std::string breakdown;
    for (const auto& [n, counts] : per_n) {
      all = all && counts.first == counts.second;
      breakdown += (breakdown.empty() ? "" : " ") + std::string("n=") + std::to_string(n) + ":" +
                   std::to_string(counts.first) + "/" + std::to_string(counts.second);
    }
    r.pass = all;
    r.measured = "solved " + breakdown + ", max residual " + Fmt(worst_residual) +
                 ", weights (1,2,3) error " + Fmt(known_err);
  }

  // 6. Energy never decreases along any recorded trajectory.
  void EnergyMonotonicity(CriterionResult& r) {
    int bad = 0;
    std::string first_bad;
    for (const auto& a : audits_) {
      if (a.first_decrease) {
        if (bad++ == 0) first_bad = a.label + " at t=" + std::to_string(*a.first_decrease);
      }
    }
    r.pass = !audits_.empty() && bad == 0;
    r.measured = std::to_string(audits_.size()) + " trajectories, " + std::to_string(bad) +
                 " with a decrease" + (first_bad.empty() ? "" : " (first: " + first_bad + ")");
  }

  // 7. Per-step energy growth within the case bounds.
  void EnergyCaseBounds(CriterionResult& r) {
    LedgerTally total;
    for (const auto& l : ledgers_) {
      total.steps += l.tally.steps;
      total.classified += l.tally.classified;
      total.unclassified += l.tally.unclassified;
      total.ambiguous += l.tally.ambiguous;
      total.violations += l.tally.violations;
    }
    const double ambiguous_share =
        total.steps ? static_cast<double>(total.ambiguous) / static_cast<double>(total.steps) : 0.0;
    r.pass = ledgers_.size() == 7 && total.violations == 0 && total.unclassified == 0 &&
             ambiguous_share < 1e-3;
    r.measured = std::to_string(ledgers_.size()) + " trajectories, " +
                 std::to_string(total.steps) + " steps, " + std::to_string(total.classified) +
                 " classified, " + std::to_string(total.violations) + " outside bounds, " +
                 std::to_string(total.unclassified) + " unclassified, " +
                 std::to_string(total.ambiguous) + " boundary-ambiguous (" +
                 Fmt(100.0 * ambiguous_share) + "%)";
  }

  // 12. Regret identities and the FTRL bound.
  void RegretIdentities(CriterionResult& r) {
    int bad = 0, bound_checked = 0, bound_bad = 0;
    double worst = 0.0;
    std::string first_bad;
    for (const auto& a : audits_) {
      worst = std::max(worst, a.worst_relative_error);
      if (!a.identities_ok && bad++ == 0) first_bad = a.label;
      if (a.prop5_ok) {
        ++bound_checked;
        if (!*a.prop5_ok) {
          ++bound_bad;
          if (first_bad.empty()) first_bad = a.label;
        }
      }
    }
    r.pass = !audits_.empty() && bad == 0 && bound_bad == 0;
    r.measured = std::to_string(audits_.size()) + " trajectories, max relative disagreement " +
                 Fmt(worst) + ", FTRL bound checked on " + std::to_string(bound_checked) +
                 " (" + std::to_string(bound_bad) + " violated)" +
                 (first_bad.empty() ? "" : ", first failure: " + first_bad);
  }

  SuiteOptions options_;
  std::vector<Audit> audits_;
  std::vector<LedgerRecord> ledgers_;
  double excluded_seconds_ = 0.0;
};

}  // namespace rpsdyn

#endif  // RPSDYN_SUITE_HPP_

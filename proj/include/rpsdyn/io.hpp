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

#ifndef RPSDYN_IO_HPP_
#define RPSDYN_IO_HPP_

// Names, CSV and JSON serialization of configs, trajectories, phases, ledgers
// and verdicts. Floats are written with 17 significant digits, rationals as
// exact "p/q".

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rpsdyn/analysis.hpp"
#include "rpsdyn/dynamics.hpp"
#include "rpsdyn/error.hpp"
#include "rpsdyn/game.hpp"
#include "rpsdyn/scalar.hpp"

namespace rpsdyn {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Enum names.

inline std::string AlgorithmName(Algorithm a) {
  return a == Algorithm::kFictitiousPlay ? "fp" : "gd";
}

inline Algorithm ParseAlgorithm(std::string_view s) {
  if (s == "fp" || s == "fictitious_play") return Algorithm::kFictitiousPlay;
  if (s == "gd" || s == "gradient_descent") return Algorithm::kGradientDescent;
  Fail(ErrorCode::kConfigInvalid, "unknown algorithm '" + std::string(s) + "'");
}

inline std::string TiebreakName(TiebreakKind k) {
  switch (k) {
    case TiebreakKind::kLexicographic: return "lexicographic";
    case TiebreakKind::kTournament: return "tournament";
    case TiebreakKind::kRandomSeeded: return "random_seeded";
    case TiebreakKind::kPreferIncumbent: return "prefer_incumbent";
    case TiebreakKind::kPreferSwitch: return "prefer_switch";
  }
  return "?";
}

inline TiebreakKind ParseTiebreak(std::string_view s) {
  for (TiebreakKind k : {TiebreakKind::kLexicographic, TiebreakKind::kTournament,
                         TiebreakKind::kRandomSeeded, TiebreakKind::kPreferIncumbent,
                         TiebreakKind::kPreferSwitch}) {
    if (s == TiebreakName(k)) return k;
  }
  Fail(ErrorCode::kConfigInvalid, "unknown tiebreak '" + std::string(s) + "'");
}

inline std::string ScheduleName(StepsizeSchedule s) {
  return s == StepsizeSchedule::kConstant ? "constant" : "inverse_sqrt_t";
}

inline StepsizeSchedule ParseSchedule(std::string_view s) {
  if (s == "constant") return StepsizeSchedule::kConstant;
  if (s == "inverse_sqrt_t") return StepsizeSchedule::kInverseSqrtTime;
  Fail(ErrorCode::kConfigInvalid, "unknown schedule '" + std::string(s) + "'");
}

inline std::string ArithmeticName(Arithmetic a) {
  return a == Arithmetic::kFloat64 ? "float" : "rational";
}

inline Arithmetic ParseArithmetic(std::string_view s) {
  if (s == "float") return Arithmetic::kFloat64;
  if (s == "rational") return Arithmetic::kExactRational;
  Fail(ErrorCode::kConfigInvalid, "unknown arithmetic '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Scalars.

template <typename Scalar>
std::string FormatScalar(const Scalar& v) {
  return ScalarTraits<Scalar>::Format(v);
}

inline std::string FormatDouble(double v) { return ScalarTraits<double>::Format(v); }

template <typename Scalar>
Json ScalarToJson(const Scalar& v) {
  if constexpr (ScalarTraits<Scalar>::kExact) {
    return FormatScalar(v);
  } else {
    return v;
  }
}

template <typename Scalar>
Json VectorToJson(const std::vector<Scalar>& v) {
  Json out = Json::array();
  for (const Scalar& s : v) out.push_back(ScalarToJson(s));
  return out;
}

// 64-bit FNV-1a, as 16 hex digits.
inline std::string Fnv1aHex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

// ---------------------------------------------------------------------------
// Configs and trajectories.

template <typename Scalar>
Json ConfigToJson(const LearnerConfig<Scalar>& c) {
  Json j;
  j["algorithm"] = AlgorithmName(c.algorithm);
  j["eta"] = ScalarToJson(c.eta);
  j["schedule"] = ScheduleName(c.schedule);
  j["horizon"] = c.horizon;
  j["x0"] = VectorToJson(c.x0.coords());
  j["tiebreak"] = {{"kind", TiebreakName(c.tiebreak.kind)}, {"seed", c.tiebreak.seed}};
  j["arithmetic"] = ArithmeticName(ScalarTraits<Scalar>::kArithmetic);
  j["tie_tolerance"] = c.tie_tolerance;
  j["bit_budget"] = c.bit_budget;
  return j;
}

template <typename Scalar>
std::string ConfigHash(const LearnerConfig<Scalar>& c, const RpsMatrix<Scalar>& a) {
  Json j = {{"learner", ConfigToJson(c)}, {"matrix", MatrixToJson(a)}};
  return Fnv1aHex(j.dump());
}

// Columns: t, x_1..x_n, y_1..y_n, energy, support (bitmask, bit i-1 for
// strategy i). Rows t = 0..T+1; the last row has only y and energy.
template <typename Scalar>
std::string TrajectoryCsv(const Trajectory<Scalar>& traj) {
  const int n = traj.n();
  std::ostringstream out;
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x_" << i;
  for (int i = 1; i <= n; ++i) out << ",y_" << i;
  out << ",energy,support\n";
  for (std::size_t t = 0; t < traj.ys.size(); ++t) {
    out << t;
    const bool has_x = t < traj.xs.size();
    for (int i = 0; i < n; ++i) {
      out << ',';
      if (has_x) out << FormatScalar(traj.xs[t][i]);
    }
    for (int i = 0; i < n; ++i) out << ',' << FormatScalar(traj.ys[t][i]);
    out << ',' << FormatScalar(traj.energies[t]) << ',';
    if (has_x) out << traj.supports[t].Bitmask();
    out << '\n';
  }
  return out.str();
}

template <typename Scalar>
Json TrajectoryToJson(const Trajectory<Scalar>& traj) {
  Json j;
  j["config"] = ConfigToJson(traj.config);
  j["matrix"] = MatrixToJson(traj.matrix);
  Json xs = Json::array(), ys = Json::array(), supports = Json::array();
  for (const auto& x : traj.xs) xs.push_back(VectorToJson(x.coords()));
  for (const auto& y : traj.ys) ys.push_back(VectorToJson(y));
  for (const auto& s : traj.supports) supports.push_back(s.Bitmask());
  j["x"] = std::move(xs);
  j["y"] = std::move(ys);
  j["energy"] = VectorToJson(traj.energies);
  j["support"] = std::move(supports);
  return j;
}

// Vertices are 1-based in files.
template <typename Scalar>
std::string PhasesCsv(const PhaseSummary<Scalar>& summary) {
  std::ostringstream out;
  out << "k,start,length,vertex,start_energy,energy_increased\n";
  for (const auto& p : summary.phases) {
    out << p.k << ',' << p.start << ',' << p.length << ',' << p.vertex + 1 << ','
        << FormatScalar(p.start_energy) << ',' << (p.energy_increased ? 1 : 0) << '\n';
  }
  return out.str();
}

inline std::string LedgerCsv(const std::vector<LedgerEntry>& ledger) {
  std::ostringstream out;
  out << "t,class,delta,bound_lo,bound_hi,ok,ambiguous\n";
  for (const auto& e : ledger) {
    out << e.t << ',' << TransitionName(e.transition) << ',' << FormatDouble(e.delta) << ','
        << FormatDouble(e.bound_lo) << ',' << FormatDouble(e.bound_hi) << ','
        << (e.within_bound ? 1 : 0) << ',' << (e.ambiguous ? 1 : 0) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Verdicts.

struct Verdict {
  std::string check;
  bool pass = false;
  Json details = Json::object();
  std::string config_hash;

  Json ToJson() const {
    return {{"check", check}, {"pass", pass}, {"details", details}, {"config_hash", config_hash}};
  }
};

// ---------------------------------------------------------------------------
// Files.

inline void WriteTextFile(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) Fail(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  file << content;
  file.close();
  if (!file) Fail(ErrorCode::kIoError, "failed writing " + path.string());
}

inline std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

}  // namespace rpsdyn

#endif  // RPSDYN_IO_HPP_

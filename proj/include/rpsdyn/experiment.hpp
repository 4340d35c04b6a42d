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

#ifndef RPSDYN_EXPERIMENT_HPP_
#define RPSDYN_EXPERIMENT_HPP_

// Experiment specs (JSON), figure presets, single runs and sweeps. Each run
// produces the trajectory/phase/ledger CSVs and a JSON report with verdicts.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
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

inline constexpr const char* kInverseSqrtHorizon = "1/sqrt(T)";

struct OutputPaths {
  std::optional<std::string> trajectory_csv;
  std::optional<std::string> phases_csv;
  std::optional<std::string> ledger_csv;
  std::optional<std::string> report_json;
};

struct SweepAxis {
  std::string field;
  std::vector<Json> values;
};

// Schema:
// {
//   "name": "run",
//   "matrix": {"n": 3} | {"n": 3, "weights": [1, 2, "3/2"]},
//   "learner": {
//     "algorithm": "fp" | "gd",
//     "eta": 0.5 | "0.5" | "1/2" | "1/sqrt(T)",
//     "schedule": "constant" | "inverse_sqrt_t",
//     "horizon": 1000,
//     "x0": [..] | "e1".."en" | "uniform",
//     "tiebreak": "lexicographic" | {"kind": "random_seeded", "seed": 7},
//     "arithmetic": "float" | "rational",
//     "tie_tolerance": 1e-9,
//     "bit_budget": 4096
//   },
//   "sweep": [{"field": "eta", "values": [..]}, ..],
//   "outputs": {"trajectory_csv": "a.csv", "phases_csv": ..., "ledger_csv": ...,
//               "report_json": ...},   // null disables a file
//   "seed": 0
// }
struct ExperimentSpec {
  std::string name = "run";
  Json matrix = {{"n", 3}};
  Json learner = Json::object();
  std::vector<SweepAxis> sweep;
  Json outputs = Json::object();
  std::uint64_t seed = 0;
  Json metadata = Json::object();

  static ExperimentSpec FromJson(const Json& j) {
    if (!j.is_object()) Fail(ErrorCode::kConfigInvalid, "spec must be a JSON object");
    static const std::set<std::string> known = {"name", "matrix", "learner", "sweep",
                                                "outputs", "seed", "metadata"};
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) Fail(ErrorCode::kConfigInvalid, "unknown spec field '" + key + "'");
    }
    ExperimentSpec s;
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    if (j.contains("matrix")) s.matrix = j.at("matrix");
    if (!j.contains("learner") || !j.at("learner").is_object()) {
      Fail(ErrorCode::kConfigInvalid, "spec needs a 'learner' object");
    }
    s.learner = j.at("learner");
    if (j.contains("sweep")) {
      if (!j.at("sweep").is_array()) Fail(ErrorCode::kConfigInvalid, "'sweep' must be a list");
      for (const auto& axis : j.at("sweep")) {
        if (!axis.contains("field") || !axis.contains("values") || !axis.at("values").is_array()) {
          Fail(ErrorCode::kConfigInvalid, "sweep entries need 'field' and 'values'");
        }
        SweepAxis a;
        a.field = axis.at("field").get<std::string>();
        for (const auto& v : axis.at("values")) a.values.push_back(v);
        s.sweep.push_back(std::move(a));
      }
    }
    if (j.contains("outputs")) s.outputs = j.at("outputs");
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("metadata")) s.metadata = j.at("metadata");
    s.Check();
    return s;
  }

  Json ToJson() const {
    Json j = {{"name", name}, {"matrix", matrix}, {"learner", learner}, {"seed", seed}};
    if (!sweep.empty()) {
      Json axes = Json::array();
      for (const auto& a : sweep) axes.push_back({{"field", a.field}, {"values", a.values}});
      j["sweep"] = axes;
    }
    if (!outputs.empty()) j["outputs"] = outputs;
    if (!metadata.empty()) j["metadata"] = metadata;
    return j;
  }

  void Check() const;
  OutputPaths Outputs() const;
};

namespace internal {

inline const std::set<std::string>& LearnerFields() {
  static const std::set<std::string> fields = {
      "algorithm", "eta",        "schedule",      "horizon",   "x0",
      "tiebreak",  "arithmetic", "tie_tolerance", "bit_budget"};
  return fields;
}

inline bool IsFractionString(const Json& v) {
  return v.is_string() && v.get<std::string>() != kInverseSqrtHorizon &&
         LooksLikeFraction(v.get<std::string>());
}

inline bool ContainsFraction(const Json& v) {
  if (IsFractionString(v)) return true;
  if (v.is_array() || v.is_object()) {
    for (const auto& item : v) {
      if (ContainsFraction(item)) return true;
    }
  }
  return false;
}

inline std::string SanitizeForName(std::string text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
      out += c;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "v" : out;
}

inline std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string JsonValueText(const Json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace internal

inline void ExperimentSpec::Check() const {
  if (name.empty()) Fail(ErrorCode::kConfigInvalid, "spec name is empty");
  if (!matrix.is_object()) Fail(ErrorCode::kConfigInvalid, "'matrix' must be an object");
  for (const auto& [key, value] : learner.items()) {
    if (!internal::LearnerFields().count(key)) {
      Fail(ErrorCode::kConfigInvalid, "unknown learner field '" + key + "'");
    }
  }
  for (const auto& axis : sweep) {
    if (axis.values.empty()) {
      Fail(ErrorCode::kConfigInvalid, "sweep over '" + axis.field + "' has no values");
    }
    const bool ok = internal::LearnerFields().count(axis.field) || axis.field == "learner" ||
                    axis.field == "weights" || axis.field == "n" || axis.field == "seed";
    if (!ok) Fail(ErrorCode::kConfigInvalid, "sweep field '" + axis.field + "' is not a config field");
  }
  if (!outputs.is_object()) Fail(ErrorCode::kConfigInvalid, "'outputs' must be an object");
  std::set<std::string> seen;
  for (const auto& [key, value] : outputs.items()) {
    static const std::set<std::string> kinds = {"trajectory_csv", "phases_csv", "ledger_csv",
                                                "report_json"};
    if (!kinds.count(key)) Fail(ErrorCode::kConfigInvalid, "unknown output '" + key + "'");
    if (value.is_null()) continue;
    if (!seen.insert(value.get<std::string>()).second) {
      Fail(ErrorCode::kConfigInvalid, "output path '" + value.get<std::string>() + "' repeated");
    }
  }
}

inline OutputPaths ExperimentSpec::Outputs() const {
  OutputPaths p;
  auto pick = [&](const char* key, const std::string& fallback) -> std::optional<std::string> {
    if (!outputs.contains(key)) return name + fallback;
    if (outputs.at(key).is_null()) return std::nullopt;
    return outputs.at(key).get<std::string>();
  };
  p.trajectory_csv = pick("trajectory_csv", "_trajectory.csv");
  p.phases_csv = pick("phases_csv", "_phases.csv");
  p.ledger_csv = pick("ledger_csv", "_ledger.csv");
  p.report_json = pick("report_json", "_report.json");
  return p;
}

// Explicit override > learner.arithmetic > "p/q" strings anywhere > float.
inline Arithmetic ResolveArithmetic(const ExperimentSpec& spec,
                                    std::optional<Arithmetic> override_mode = std::nullopt) {
  if (override_mode) return *override_mode;
  const bool fractions = internal::ContainsFraction(spec.matrix) ||
                         internal::ContainsFraction(spec.learner);
  if (spec.learner.contains("arithmetic")) {
    Arithmetic a = ParseArithmetic(spec.learner.at("arithmetic").get<std::string>());
    if (a == Arithmetic::kFloat64 && fractions) {
      Fail(ErrorCode::kConfigInvalid, "\"p/q\" values require rational arithmetic");
    }
    return a;
  }
  return fractions ? Arithmetic::kExactRational : Arithmetic::kFloat64;
}

template <typename Scalar>
RpsMatrix<Scalar> BuildMatrix(const Json& m) {
  if (m.contains("weights")) return MatrixFromJson<Scalar>(m);
  if (!m.contains("n")) Fail(ErrorCode::kConfigInvalid, "matrix needs 'n' or 'weights'");
  return MakeUnweightedRps<Scalar>(m.at("n").get<int>());
}

template <typename Scalar>
SimplexPoint<Scalar> BuildX0(const Json& v, int n) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "uniform") return SimplexPoint<Scalar>::Uniform(n);
    if (s.size() > 1 && s[0] == 'e') {
      int i = std::stoi(s.substr(1));
      if (i < 1 || i > n) Fail(ErrorCode::kConfigInvalid, "x0 vertex " + s + " out of range");
      return SimplexPoint<Scalar>::Vertex(n, i - 1);
    }
    Fail(ErrorCode::kConfigInvalid, "x0 must be a list, 'uniform' or 'e<i>'");
  }
  if (!v.is_array()) Fail(ErrorCode::kConfigInvalid, "x0 must be a list");
  std::vector<Scalar> coords;
  for (const auto& c : v) coords.push_back(ScalarFromJson<Scalar>(c));
  try {
    return SimplexPoint<Scalar>(std::move(coords));
  } catch (const Error& e) {
    Fail(ErrorCode::kConfigInvalid, std::string("x0: ") + e.what());
  }
}

template <typename Scalar>
LearnerConfig<Scalar> BuildLearner(const Json& l, int n, std::uint64_t seed) {
  LearnerConfig<Scalar> c;
  try {
    if (!l.contains("algorithm")) Fail(ErrorCode::kConfigInvalid, "learner needs 'algorithm'");
    c.algorithm = ParseAlgorithm(l.at("algorithm").get<std::string>());
    if (!l.contains("horizon")) Fail(ErrorCode::kConfigInvalid, "learner needs 'horizon'");
    c.horizon = l.at("horizon").get<std::int64_t>();
    if (l.contains("schedule")) c.schedule = ParseSchedule(l.at("schedule").get<std::string>());
    if (l.contains("eta")) {
      const Json& eta = l.at("eta");
      if (eta.is_string() && eta.get<std::string>() == kInverseSqrtHorizon) {
        if constexpr (ScalarTraits<Scalar>::kExact) {
          Fail(ErrorCode::kConfigInvalid, "eta = 1/sqrt(T) needs float arithmetic");
        } else {
          c.eta = 1.0 / std::sqrt(static_cast<double>(std::max<std::int64_t>(c.horizon, 1)));
        }
      } else {
        c.eta = ScalarFromJson<Scalar>(eta);
      }
    }
    c.x0 = BuildX0<Scalar>(l.contains("x0") ? l.at("x0") : Json("e1"), n);
    c.tiebreak.seed = seed;
    if (l.contains("tiebreak")) {
      const Json& tb = l.at("tiebreak");
      if (tb.is_string()) {
        c.tiebreak.kind = ParseTiebreak(tb.get<std::string>());
      } else {
        c.tiebreak.kind = ParseTiebreak(tb.at("kind").get<std::string>());
        if (tb.contains("seed")) c.tiebreak.seed = tb.at("seed").get<std::uint64_t>();
      }
    }
    if (l.contains("tie_tolerance")) c.tie_tolerance = l.at("tie_tolerance").get<double>();
    if (l.contains("bit_budget")) c.bit_budget = l.at("bit_budget").get<unsigned>();
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kConfigInvalid, std::string("learner: ") + e.what());
  }
  c.Validate(n);
  return c;
}

// ---------------------------------------------------------------------------
// Single runs.

struct RunResult {
  std::string name;
  std::string config_hash;
  Arithmetic arithmetic = Arithmetic::kFloat64;
  std::int64_t horizon = 0;
  double regret = 0.0;
  std::optional<double> slope;  // log-log fit of the run's own regret curve, T >= 10
  std::vector<Verdict> verdicts;
  Json report;
  std::string trajectory_csv;
  std::string phases_csv;
  std::string ledger_csv;

  bool AllPass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }
  std::vector<std::string> FailedChecks() const {
    std::vector<std::string> out;
    for (const auto& v : verdicts) {
      if (!v.pass) out.push_back(v.check);
    }
    return out;
  }
};

namespace internal {

template <typename Scalar>
bool RelativelyClose(const Scalar& a, const Scalar& b, double rel = 1e-9) {
  if constexpr (ScalarTraits<Scalar>::kExact) {
    return a == b;
  } else {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
  }
}

template <typename Scalar>
RunResult RunTyped(const ExperimentSpec& spec) {
  RpsMatrix<Scalar> a = BuildMatrix<Scalar>(spec.matrix);
  LearnerConfig<Scalar> config = BuildLearner<Scalar>(spec.learner, a.n(), spec.seed);
  Trajectory<Scalar> traj = Run(config, a);
  const bool fp = config.algorithm == Algorithm::kFictitiousPlay;
  const bool constant = config.schedule == StepsizeSchedule::kConstant;

  RunResult result;
  result.name = spec.name;
  result.arithmetic = ScalarTraits<Scalar>::kArithmetic;
  result.config_hash = ConfigHash(config, a);
  result.horizon = traj.horizon();

  RegretReport<Scalar> regret = Regret(traj);
  const Scalar direct = RegretDirect(traj);
  const Scalar summed = RegretSummedPayoff(traj);
  result.regret = ToDouble(regret.regret_total);

  std::vector<std::pair<std::int64_t, double>> fit_points;
  for (const auto& [t, r] : regret.per_T_curve) {
    if (t >= 10 && r > 0.0) fit_points.emplace_back(t, r);
  }
  Json slope_json = nullptr;
  if (fit_points.size() >= 3) {
    SlopeFit fit = FitRegretSlope(fit_points);
    result.slope = fit.slope;
    slope_json = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"points", fit_points.size()}};
  }

  const StartRule rule = fp ? StartRule::kEnergyIncrease : StartRule::kFirstVertex;
  std::optional<PhaseSummary<Scalar>> phases;
  Json phases_json = {{"rule", rule == StartRule::kFirstVertex ? "first_vertex" : "energy_increase"}};
  try {
    phases = DetectPhases(traj, rule);
    phases_json["t0"] = phases->t0;
    phases_json["K"] = phases->K();
    try {
      PhaseLengthFit fit = PhaseLengthCheck(*phases);
      phases_json["length_fit"] = {{"alpha", fit.degenerate ? Json(nullptr) : Json(fit.alpha)},
                                   {"beta", fit.degenerate ? Json(nullptr) : Json(fit.beta)},
                                   {"min_residual",
                                    fit.degenerate ? Json(nullptr) : Json(fit.min_residual)},
                                   {"degenerate", fit.degenerate},
                                   {"positive", fit.positive},
                                   {"phases_used", fit.phases_used}};
    } catch (const Error& e) {
      phases_json["length_fit"] = {{"error", e.what()}};
    }
  } catch (const Error& e) {
    phases_json["error"] = e.what();
  }

  std::vector<LedgerEntry> ledger = EnergyGrowthLedger(traj);
  LedgerTally tally = TallyLedger(ledger);

  auto verdict = [&](std::string check, bool pass, Json details) {
    result.verdicts.push_back({std::move(check), pass, std::move(details), result.config_hash});
  };
  // A shrinking stepsize rescales y every round, so H(y^t) need not grow.
  if (constant) {
    auto decrease = FirstEnergyDecrease(traj);
    verdict("energy_monotone", !decrease.has_value(),
            {{"first_decrease_t", decrease ? Json(*decrease) : Json(nullptr)}});
  }
  {
    bool ok = RelativelyClose(regret.regret_total, direct) &&
              RelativelyClose(regret.regret_total, summed);
    if (fp) ok = ok && RelativelyClose(regret.regret_total, regret.regret_by_energy);
    verdict("regret_identity", ok,
            {{"regret_total", ScalarToJson(regret.regret_total)},
             {"regret_direct", ScalarToJson(direct)},
             {"regret_summed_payoff", ScalarToJson(summed)},
             {"regret_by_energy", ScalarToJson(regret.regret_by_energy)}});
  }
  if (!fp && constant) {
    const Scalar& upper = *regret.regret_upper_ftrl;
    bool ok;
    if constexpr (ScalarTraits<Scalar>::kExact) {
      ok = regret.regret_total <= upper;
    } else {
      ok = regret.regret_total <= upper + 1e-9;
    }
    verdict("ftrl_regret_bound", ok,
            {{"regret_total", ScalarToJson(regret.regret_total)},
             {"upper_bound", ScalarToJson(upper)}});
  }
  if (traj.horizon() >= 1) {
    Scalar scaled = regret.duality_gap_avg * Scalar(traj.horizon());
    verdict("duality_gap_identity", RelativelyClose(scaled, regret.regret_total),
            {{"duality_gap_avg", ScalarToJson(regret.duality_gap_avg)},
             {"gap_times_T", ScalarToJson(scaled)}});
  }
  // Vertex cycling is only claimed for FP and for GD above the large-stepsize
  // threshold max(2/a_min, 1/gamma(x0)).
  bool cycling_applies = fp;
  if (!fp && constant) {
    Scalar g = Gamma(a, config.x0);
    cycling_applies = config.eta > Scalar(Scalar(2) / a.a_min()) &&
                      (g > Scalar(0) && config.eta * g > Scalar(1));
  }
  if (cycling_applies && phases && phases->K() >= 2) {
    CyclingVerdict c = VerifyCycling(*phases, a.n());
    verdict("vertex_cycling", c.pass,
            {{"phases", phases->K()},
             {"first_violation", c.first_violation ? Json(*c.first_violation) : Json(nullptr)}});
  }
  if (constant) {
    verdict("energy_case_bounds", tally.violations == 0,
            {{"steps", tally.steps},
             {"classified", tally.classified},
             {"unclassified", tally.unclassified},
             {"ambiguous", tally.ambiguous},
             {"violations", tally.violations}});
  }

  Json curve = Json::array();
  for (const auto& [t, r] : regret.per_T_curve) curve.push_back({t, r});
  Json report;
  report["name"] = spec.name;
  report["config_hash"] = result.config_hash;
  report["config"] = ConfigToJson(config);
  report["matrix"] = MatrixToJson(a);
  report["seed"] = spec.seed;
  report["regret"] = {
      {"regret_total", ScalarToJson(regret.regret_total)},
      {"regret_by_energy", ScalarToJson(regret.regret_by_energy)},
      {"regret_upper_ftrl",
       regret.regret_upper_ftrl ? ScalarToJson(*regret.regret_upper_ftrl) : Json(nullptr)},
      {"regret_direct", ScalarToJson(direct)},
      {"duality_gap_avg", ScalarToJson(regret.duality_gap_avg)},
      {"per_T_curve", curve}};
  report["slope_fit"] = slope_json;
  report["phases"] = phases_json;
  report["ledger"] = {{"steps", tally.steps},
                      {"classified", tally.classified},
                      {"unclassified", tally.unclassified},
                      {"ambiguous", tally.ambiguous},
                      {"violations", tally.violations}};
  if (!fp) {
    BoundaryReport<Scalar> b = BoundaryInvarianceCheck(traj);
    report["boundary"] = {
        {"first_boundary_t", b.first_boundary_t ? Json(*b.first_boundary_t) : Json(nullptr)},
        {"ever_returns_interior", b.ever_returns_interior},
        {"energy_at_first_boundary",
         b.energy_at_first_boundary ? ScalarToJson(*b.energy_at_first_boundary) : Json(nullptr)},
        {"interior_energy_max",
         b.interior_energy_max ? ScalarToJson(*b.interior_energy_max) : Json(nullptr)},
        {"threshold_t", b.threshold_t ? Json(*b.threshold_t) : Json(nullptr)},
        {"threshold_property_holds", b.threshold_property_holds}};
  }
  Json verdicts = Json::array();
  for (const auto& v : result.verdicts) verdicts.push_back(v.ToJson());
  report["verdicts"] = verdicts;
  if (!spec.metadata.empty()) report["metadata"] = spec.metadata;
  result.report = std::move(report);

  result.trajectory_csv = TrajectoryCsv(traj);
  result.phases_csv = phases ? PhasesCsv(*phases) : PhasesCsv(PhaseSummary<Scalar>{});
  result.ledger_csv = LedgerCsv(ledger);
  return result;
}

}  // namespace internal

struct RunOptions {
  std::optional<Arithmetic> arithmetic;
  std::optional<std::uint64_t> seed;
};

inline RunResult RunExperiment(ExperimentSpec spec, const RunOptions& options = {}) {
  if (options.seed) spec.seed = *options.seed;
  spec.Check();
  if (ResolveArithmetic(spec, options.arithmetic) == Arithmetic::kExactRational) {
    return internal::RunTyped<Rational>(spec);
  }
  return internal::RunTyped<double>(spec);
}

// Writes the files named by spec.outputs under `dir`; returns the paths written.
inline std::vector<std::filesystem::path> WriteRunOutputs(const RunResult& result,
                                                          const ExperimentSpec& spec,
                                                          const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  OutputPaths p = spec.Outputs();
  auto emit = [&](const std::optional<std::string>& rel, const std::string& content) {
    if (!rel) return;
    std::filesystem::path path = dir / *rel;
    WriteTextFile(path, content);
    written.push_back(path);
  };
  emit(p.trajectory_csv, result.trajectory_csv);
  emit(p.phases_csv, result.phases_csv);
  emit(p.ledger_csv, result.ledger_csv);
  emit(p.report_json, result.report.dump(2) + "\n");
  return written;
}

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepPoint {
  ExperimentSpec spec;
  std::vector<std::pair<std::string, Json>> params;
};

namespace internal {

inline void ApplyOverride(ExperimentSpec& spec, const std::string& field, const Json& value) {
  if (field == "learner") {
    if (!value.is_object()) Fail(ErrorCode::kConfigInvalid, "'learner' sweep values must be objects");
    spec.learner.merge_patch(value);
  } else if (field == "weights") {
    spec.matrix = {{"n", value.size()}, {"weights", value}};
  } else if (field == "n") {
    spec.matrix = {{"n", value}};
  } else if (field == "seed") {
    spec.seed = value.get<std::uint64_t>();
  } else {
    spec.learner[field] = value;
  }
}

}  // namespace internal

// Cartesian product of the sweep axes, first axis outermost.
inline std::vector<SweepPoint> ExpandSweep(const ExperimentSpec& base) {
  if (base.sweep.empty()) Fail(ErrorCode::kConfigInvalid, "sweep is empty");
  base.Check();
  std::vector<SweepPoint> points = {{base, {}}};
  points.front().spec.sweep.clear();
  for (const auto& axis : base.sweep) {
    std::vector<SweepPoint> next;
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        SweepPoint q = p;
        internal::ApplyOverride(q.spec, axis.field, v);
        q.params.emplace_back(axis.field, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  for (auto& p : points) {
    std::string suffix;
    for (const auto& [field, v] : p.params) {
      suffix += "__" + field + "-" + internal::SanitizeForName(internal::JsonValueText(v));
    }
    p.spec.name = base.name + suffix;
    p.spec.outputs = Json::object();
    const OutputPaths base_paths = base.Outputs();
    auto rename = [&](const char* key, const std::optional<std::string>& rel, const char* tail) {
      if (!rel) {
        p.spec.outputs[key] = nullptr;
        return;
      }
      p.spec.outputs[key] = p.spec.name + tail;
    };
    rename("trajectory_csv", base_paths.trajectory_csv, "_trajectory.csv");
    rename("phases_csv", base_paths.phases_csv, "_phases.csv");
    rename("ledger_csv", base_paths.ledger_csv, "_ledger.csv");
    rename("report_json", base_paths.report_json, "_report.json");
  }
  return points;
}

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<RunResult> runs;
  std::string csv;

  bool AllPass() const {
    return std::all_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.AllPass(); });
  }
};

// Rows in sweep order. When "horizon" is swept, `sweep_slope` is the log-log
// slope of Reg(T) across the rows that share all other parameters.
inline SweepResult RunSweep(const ExperimentSpec& base, const RunOptions& options = {}) {
  SweepResult out;
  out.points = ExpandSweep(base);
  for (auto& p : out.points) {
    if (options.seed) p.spec.seed = *options.seed;
    out.runs.push_back(RunExperiment(p.spec, {options.arithmetic, std::nullopt}));
  }

  std::map<std::string, std::vector<std::size_t>> groups;
  bool horizon_swept = false;
  for (const auto& axis : base.sweep) horizon_swept = horizon_swept || axis.field == "horizon";
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    std::string key;
    for (const auto& [field, v] : out.points[i].params) {
      if (field != "horizon") key += field + "=" + v.dump() + ";";
    }
    groups[key].push_back(i);
  }
  std::vector<std::optional<double>> sweep_slope(out.points.size());
  if (horizon_swept) {
    for (const auto& [key, rows] : groups) {
      std::vector<std::pair<std::int64_t, double>> curve;
      for (std::size_t i : rows) curve.emplace_back(out.runs[i].horizon, out.runs[i].regret);
      try {
        SlopeFit fit = FitRegretSlope(curve);
        for (std::size_t i : rows) sweep_slope[i] = fit.slope;
      } catch (const Error&) {
      }
    }
  }

  auto optional_text = [](const std::optional<double>& v) {
    return v ? FormatDouble(*v) : std::string();
  };
  std::ostringstream csv;
  csv << "index,name";
  for (const auto& axis : base.sweep) csv << ',' << internal::CsvField(axis.field);
  csv << ",arithmetic,horizon,regret,regret_over_sqrt_T,slope,sweep_slope,all_pass,failed_checks\n";
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    const RunResult& r = out.runs[i];
    csv << i << ',' << internal::CsvField(r.name);
    for (const auto& [field, v] : out.points[i].params) {
      csv << ',' << internal::CsvField(internal::JsonValueText(v));
    }
    const double root = std::sqrt(static_cast<double>(std::max<std::int64_t>(r.horizon, 1)));
    std::string failed;
    for (const auto& f : r.FailedChecks()) failed += (failed.empty() ? "" : ";") + f;
    csv << ',' << ArithmeticName(r.arithmetic) << ',' << r.horizon << ','
        << FormatDouble(r.regret) << ',' << FormatDouble(r.regret / root) << ','
        << optional_text(r.slope) << ',' << optional_text(sweep_slope[i]) << ','
        << (r.AllPass() ? 1 : 0) << ',' << internal::CsvField(failed) << '\n';
  }
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------
// Figure presets.

struct FigurePreset {
  std::string id;
  std::string description;
  ExperimentSpec spec;  // presets with several panels carry a sweep
};

inline const std::vector<FigurePreset>& Presets() {
  static const std::vector<FigurePreset> presets = [] {
    auto make = [](std::string id, std::string description, Json j) {
      j["name"] = id;
      return FigurePreset{id, std::move(description), ExperimentSpec::FromJson(j)};
    };
    std::vector<FigurePreset> p;
    p.push_back(make("fig1a", "FP dual iterates, n=3, x0 = e1, T = 200",
                     {{"matrix", {{"n", 3}}},
                      {"learner", {{"algorithm", "fp"}, {"horizon", 200}, {"x0", {1, 0, 0}}}}}));
    p.push_back(make("fig1b", "GD dual iterates, eta = 0.5, n=3, x0 = e1, T = 200",
                     {{"matrix", {{"n", 3}}},
                      {"learner",
                       {{"algorithm", "gd"}, {"eta", 0.5}, {"horizon", 200}, {"x0", {1, 0, 0}}}}}));
    p.push_back(make(
        "fig1c", "GD primal iterates, eta = 1, n=4, x0 = (0.05, 0.35, 0.39, 0.21), T = 200",
        {{"matrix", {{"n", 4}}},
         {"learner",
          {{"algorithm", "gd"}, {"eta", 1}, {"horizon", 200}, {"x0", {0.05, 0.35, 0.39, 0.21}}}},
         {"metadata",
          {{"note",
            "The permuted start x0 = (0.35, 0.05, 0.21, 0.39) gives the same picture "
            "with relabeled vertices."}}}}));
    p.push_back(make("fig_gd_eta_compare",
                     "GD primal iterates, n=4, x0 = (0.2, 0.2, 0.25, 0.35), T = 100, "
                     "eta in {1/sqrt(T), 0.3, 10}",
                     {{"matrix", {{"n", 4}}},
                      {"learner",
                       {{"algorithm", "gd"}, {"horizon", 100}, {"x0", {0.2, 0.2, 0.25, 0.35}}}},
                      {"sweep", {{{"field", "eta"}, {"values", {"1/sqrt(T)", 0.3, 10}}}}}}));
    p.push_back(make("fig_fp_regret", "FP regret, n in {3, 4}, x0 = e1, T = 1000",
                     {{"matrix", {{"n", 3}}},
                      {"learner", {{"algorithm", "fp"}, {"horizon", 1000}, {"x0", "e1"}}},
                      {"sweep", {{{"field", "n"}, {"values", {3, 4}}}}},
                      {"metadata",
                       {{"note",
                         "x0 is e1 of the respective dimension."}}}}));
    p.push_back(make("fig_tournament",
                     "FP regret, n=3, x0 = e1, T = 1000, lexicographic vs tournament",
                     {{"matrix", {{"n", 3}}},
                      {"learner", {{"algorithm", "fp"}, {"horizon", 1000}, {"x0", "e1"}}},
                      {"sweep",
                       {{{"field", "tiebreak"}, {"values", {"lexicographic", "tournament"}}}}},
                      {"metadata",
                       {{"note", "x0 = e1 = (1, 0, 0)."}}}}));
    p.push_back(make("fig_gd_regret",
                     "GD regret, n=3, x0 = (0.3, 0.4, 0.3), T = 1000, eta in {1/sqrt(T), 0.3, 10}",
                     {{"matrix", {{"n", 3}}},
                      {"learner", {{"algorithm", "gd"}, {"horizon", 1000}, {"x0", {0.3, 0.4, 0.3}}}},
                      {"sweep", {{{"field", "eta"}, {"values", {"1/sqrt(T)", 0.3, 10}}}}}}));
    p.push_back(make(
        "fig_decreasing",
        "GD regret, n=3, x0 = (0.3, 0.4, 0.3), T = 5000, eta_t = 1/sqrt(t) vs eta = 10",
        {{"matrix", {{"n", 3}}},
         {"learner", {{"algorithm", "gd"}, {"horizon", 5000}, {"x0", {0.3, 0.4, 0.3}}}},
         {"sweep",
          {{{"field", "learner"},
            {"values",
             {{{"eta", 1}, {"schedule", "inverse_sqrt_t"}}, {{"eta", 10}, {"schedule", "constant"}}}}}}}}));
    return p;
  }();
  return presets;
}

inline const FigurePreset& FindPreset(const std::string& id) {
  for (const auto& p : Presets()) {
    if (p.id == id) return p;
  }
  Fail(ErrorCode::kConfigInvalid, "unknown preset '" + id + "'");
}

}  // namespace rpsdyn

#endif  // RPSDYN_EXPERIMENT_HPP_

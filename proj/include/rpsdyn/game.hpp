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

#ifndef RPSDYN_GAME_HPP_
#define RPSDYN_GAME_HPP_

// n-dimensional weighted Rock-Paper-Scissors games: payoff matrix, points of
// the probability simplex, interior equilibria, and the initialization gap
// gamma(x) that controls when one large GD step lands on a vertex.
//
// Indices are 0-based throughout the API. Weight a_i couples strategies i and
// i+1 (mod n): A[i][i+1] = -a_i and A[i+1][i] = a_i.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rpsdyn/error.hpp"
#include "rpsdyn/scalar.hpp"

namespace rpsdyn {

template <typename Scalar>
using DualVector = std::vector<Scalar>;

// Sorted coordinate indices.
struct SupportSet {
  std::vector<int> indices;

  bool operator==(const SupportSet&) const = default;
  int size() const { return static_cast<int>(indices.size()); }
  bool Contains(int i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
  }
  std::uint64_t Bitmask() const {
    std::uint64_t mask = 0;
    for (int i : indices) mask |= std::uint64_t{1} << i;
    return mask;
  }
  static SupportSet Full(int n) {
    SupportSet s;
    for (int i = 0; i < n; ++i) s.indices.push_back(i);
    return s;
  }
};

inline constexpr double kSimplexTolerance = 1e-12;

template <typename Scalar>
class SimplexPoint {
 public:
  SimplexPoint() = default;

  // Validates nonnegativity and unit mass (exactly for rationals, within
  // kSimplexTolerance for doubles).
  explicit SimplexPoint(std::vector<Scalar> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) Fail(ErrorCode::kNotOnSimplex, "empty point");
    Scalar total(0);
    for (const Scalar& c : coords_) {
      if (c < Scalar(0)) Fail(ErrorCode::kNotOnSimplex, "negative coordinate");
      total += c;
    }
    if constexpr (ScalarTraits<Scalar>::kExact) {
      if (total != Scalar(1)) {
        Fail(ErrorCode::kNotOnSimplex,
             "coordinates sum to " + ScalarTraits<Scalar>::Format(total));
      }
    } else {
      if (!(std::abs(total - 1.0) <= kSimplexTolerance)) {
        Fail(ErrorCode::kNotOnSimplex,
             "coordinates sum to " + ScalarTraits<Scalar>::Format(total));
      }
    }
  }

  // For iterates produced by the dynamics, whose simplex membership holds by
  // construction up to rounding.
  static SimplexPoint Trusted(std::vector<Scalar> coords) {
    SimplexPoint p;
    p.coords_ = std::move(coords);
    return p;
  }

  static SimplexPoint Vertex(int n, int i) {
    std::vector<Scalar> c(n, Scalar(0));
    c.at(i) = Scalar(1);
    return Trusted(std::move(c));
  }

  static SimplexPoint Uniform(int n) {
    return Trusted(std::vector<Scalar>(n, ScalarTraits<Scalar>::FromRatio(1, n)));
  }

  int size() const { return static_cast<int>(coords_.size()); }
  const Scalar& operator[](int i) const { return coords_[i]; }
  const std::vector<Scalar>& coords() const { return coords_; }

  SupportSet Support() const {
    SupportSet s;
    for (int i = 0; i < size(); ++i) {
      if (coords_[i] > Scalar(0)) s.indices.push_back(i);
    }
    return s;
  }

  std::optional<int> VertexIndex() const {
    SupportSet s = Support();
    if (s.size() == 1) return s.indices.front();
    return std::nullopt;
  }
  bool IsVertex() const { return VertexIndex().has_value(); }
  bool IsInterior() const { return Support().size() == size(); }

  bool operator==(const SimplexPoint&) const = default;

 private:
  std::vector<Scalar> coords_;
};

template <typename Scalar>
class RpsMatrix {
 public:
  int n() const { return static_cast<int>(weights_.size()); }
  const std::vector<Scalar>& weights() const { return weights_; }
  const Scalar& weight(int i) const { return weights_[Wrap(i)]; }
  const Scalar& a_min() const { return a_min_; }
  const Scalar& a_max() const { return a_max_; }

  int Wrap(int i) const { return ((i % n()) + n()) % n(); }

  Scalar Entry(int i, int j) const {
    if (Wrap(j) == Wrap(i + 1)) return Scalar(-weight(i));
    if (Wrap(j) == Wrap(i - 1)) return weight(i - 1);
    return Scalar(0);
  }

  std::vector<std::vector<Scalar>> Entries() const {
    std::vector<std::vector<Scalar>> rows(n(), std::vector<Scalar>(n(), Scalar(0)));
    for (int i = 0; i < n(); ++i) {
      for (int j = 0; j < n(); ++j) rows[i][j] = Entry(i, j);
    }
    return rows;
  }

  // (Ax)_i = a_{i-1} x_{i-1} - a_i x_{i+1}; O(n) using the band structure.
  std::vector<Scalar> Apply(const std::vector<Scalar>& x) const {
    if (static_cast<int>(x.size()) != n()) {
      Fail(ErrorCode::kDimensionMismatch, "vector length differs from n");
    }
    std::vector<Scalar> out(n());
    for (int i = 0; i < n(); ++i) {
      out[i] = weight(i - 1) * x[Wrap(i - 1)] - weight(i) * x[Wrap(i + 1)];
    }
    return out;
  }
  std::vector<Scalar> Apply(const SimplexPoint<Scalar>& x) const {
    return Apply(x.coords());
  }

  // Column A e_i: +a_i at row i+1, -a_{i-1} at row i-1.
  std::vector<Scalar> Column(int i) const {
    std::vector<Scalar> col(n(), Scalar(0));
    col[Wrap(i + 1)] = weight(i);
    col[Wrap(i - 1)] = Scalar(-weight(i - 1));
    return col;
  }

  template <typename S>
  friend RpsMatrix<S> MakeRps(std::vector<S> weights);

 private:
  std::vector<Scalar> weights_;
  Scalar a_min_{};
  Scalar a_max_{};
};

template <typename Scalar>
RpsMatrix<Scalar> MakeRps(std::vector<Scalar> weights) {
  if (weights.size() < 3) {
    Fail(ErrorCode::kDimensionTooSmall,
         "RPS games need n >= 3, got " + std::to_string(weights.size()));
  }
  for (const Scalar& a : weights) {
    if (!(a > Scalar(0))) {
      Fail(ErrorCode::kNonpositiveWeight,
           "weight " + ScalarTraits<Scalar>::Format(a) + " is not positive");
    }
  }
  RpsMatrix<Scalar> m;
  m.a_min_ = *std::min_element(weights.begin(), weights.end());
  m.a_max_ = *std::max_element(weights.begin(), weights.end());
  m.weights_ = std::move(weights);
  return m;
}

template <typename Scalar>
RpsMatrix<Scalar> MakeUnweightedRps(int n) {
  return MakeRps(std::vector<Scalar>(std::max(n, 0), Scalar(1)));
}

template <typename Scalar>
struct NashResult {
  SimplexPoint<Scalar> point;
  Scalar residual{};  // ||A x*||_inf
  bool is_interior = false;
};

namespace internal {

// Propagates x_{j+2} = a_j x_j / a_{j+1} (the equation (Ax)_{j+1} = 0) from
// `start` for `steps` steps; returns the chain in visiting order.
template <typename Scalar>
std::vector<std::pair<int, Scalar>> NashChain(const RpsMatrix<Scalar>& a,
                                              int start, int steps) {
  std::vector<std::pair<int, Scalar>> chain;
  int j = start;
  Scalar value(1);
  chain.emplace_back(j, value);
  for (int s = 0; s < steps; ++s) {
    value = a.weight(j) * value / a.weight(j + 1);
    j = a.Wrap(j + 2);
    chain.emplace_back(j, value);
  }
  return chain;
}

}  // namespace internal

// Interior equilibrium: the positive solution of A x = 0 on the simplex.
// Odd n: unique. Even n: the coordinates split into two independent parity
// chains; when both close up, the minimum-norm point of the solution set is
// returned. When a chain does not close (alternating weight products differ)
// the system has no solution and SingularSystem is raised.
template <typename Scalar>
NashResult<Scalar> InteriorNash(const RpsMatrix<Scalar>& a) {
  const int n = a.n();
  std::vector<Scalar> x(n, Scalar(0));
  auto closes = [&](const Scalar& lhs, const Scalar& rhs) {
    if constexpr (ScalarTraits<Scalar>::kExact) {
      return lhs == rhs;
    } else {
      return std::abs(lhs - rhs) <= 1e-13 * std::max(std::abs(lhs), std::abs(rhs));
    }
  };

  if (n % 2 == 1) {
    auto chain = internal::NashChain(a, 0, n - 1);
    Scalar total(0);
    for (auto& [idx, v] : chain) total += v;
    for (auto& [idx, v] : chain) x[idx] = v / total;
  } else {
    // Chains over even and odd indices, each with n/2 members.
    auto even = internal::NashChain(a, 0, n / 2 - 1);
    auto odd = internal::NashChain(a, 1, n / 2 - 1);
    for (const auto* chain : {&even, &odd}) {
      const auto& [last_idx, last_v] = chain->back();
      const Scalar& first_v = chain->front().second;
      // Closing equation (Ax)_{last+1} = a_last x_last - a_{last+1} x_first.
      if (!closes(a.weight(last_idx) * last_v, a.weight(last_idx + 1) * first_v)) {
        Fail(ErrorCode::kSingularSystem,
             "no interior equilibrium: alternating weight products differ "
             "for even n=" + std::to_string(n));
      }
    }
    // x = s*u + r*v with sum(u) s + sum(v) r = 1; minimizing s^2|u|^2 +
    // r^2|v|^2 gives s = lambda*U/|u|^2, r = lambda*V/|v|^2.
    Scalar u_sum(0), u_sq(0), v_sum(0), v_sq(0);
    for (auto& [idx, v] : even) { u_sum += v; u_sq += v * v; }
    for (auto& [idx, v] : odd) { v_sum += v; v_sq += v * v; }
    Scalar lambda = Scalar(1) / (u_sum * u_sum / u_sq + v_sum * v_sum / v_sq);
    Scalar s = lambda * u_sum / u_sq;
    Scalar r = lambda * v_sum / v_sq;
    for (auto& [idx, v] : even) x[idx] = s * v;
    for (auto& [idx, v] : odd) x[idx] = r * v;
  }

  NashResult<Scalar> result;
  std::vector<Scalar> ax = a.Apply(x);
  result.residual = Scalar(0);
  for (const Scalar& v : ax) result.residual = std::max(result.residual, Abs(v));
  if constexpr (ScalarTraits<Scalar>::kExact) {
    if (result.residual != Scalar(0)) {
      Fail(ErrorCode::kSingularSystem, "nonzero residual in exact solve");
    }
  } else {
    if (!(result.residual <= 1e-12)) {
      Fail(ErrorCode::kSingularSystem,
           "residual " + ScalarTraits<Scalar>::Format(result.residual));
    }
  }
  result.is_interior = std::all_of(x.begin(), x.end(),
                                   [](const Scalar& v) { return v > Scalar(0); });
  result.point = SimplexPoint<Scalar>::Trusted(std::move(x));
  return result;
}

// min over k != l of |v_k - v_l| with v = A x.
template <typename Scalar>
Scalar Gamma(const RpsMatrix<Scalar>& a, const SimplexPoint<Scalar>& x) {
  std::vector<Scalar> v(a.n());
  for (int i = 0; i < a.n(); ++i) {
    v[i] = a.weight(i - 1) * x[a.Wrap(i - 1)] - a.weight(i) * x[a.Wrap(i + 1)];
  }
  std::optional<Scalar> best;
  for (int k = 0; k < a.n(); ++k) {
    for (int l = k + 1; l < a.n(); ++l) {
      Scalar gap = Abs(Scalar(v[k] - v[l]));
      if (!best || gap < *best) best = gap;
    }
  }
  return *best;
}

namespace internal {

// max_i <e_i, A v> - min_j <v, A e_j> for an arbitrary (unnormalized) v.
template <typename Scalar>
Scalar GapAtVector(const RpsMatrix<Scalar>& a, const std::vector<Scalar>& v) {
  std::vector<Scalar> av = a.Apply(v);
  Scalar best_response = *std::max_element(av.begin(), av.end());
  std::optional<Scalar> worst_column;
  for (int j = 0; j < a.n(); ++j) {
    std::vector<Scalar> col = a.Column(j);
    Scalar value(0);
    for (int i = 0; i < a.n(); ++i) value += v[i] * col[i];
    if (!worst_column || value < *worst_column) worst_column = value;
  }
  return best_response - *worst_column;
}

}  // namespace internal

// Symmetric duality gap DG(x, x); equals 2 max_i (Ax)_i by skew-symmetry.
template <typename Scalar>
Scalar DualityGap(const RpsMatrix<Scalar>& a, const SimplexPoint<Scalar>& x) {
  if (x.size() != a.n()) Fail(ErrorCode::kDimensionMismatch, "point size != n");
  return internal::GapAtVector(a, x.coords());
}

// {"n": int, "weights": [..]}. Weights are written as numbers in float mode
// and as exact "p/q" strings in rational mode.
template <typename Scalar>
nlohmann::json MatrixToJson(const RpsMatrix<Scalar>& a) {
  nlohmann::json w = nlohmann::json::array();
  for (const Scalar& v : a.weights()) {
    if constexpr (ScalarTraits<Scalar>::kExact) {
      w.push_back(ScalarTraits<Scalar>::Format(v));
    } else {
      w.push_back(v);
    }
  }
  return {{"n", a.n()}, {"weights", w}};
}

template <typename Scalar>
Scalar ScalarFromJson(const nlohmann::json& value) {
  if (value.is_string()) return ScalarTraits<Scalar>::Parse(value.get<std::string>());
  if (value.is_number_integer()) {
    return Scalar(value.get<long long>());
  }
  if (value.is_number()) {
    if constexpr (ScalarTraits<Scalar>::kExact) {
      // The shortest round-trip decimal of the JSON number, read exactly.
      return ScalarTraits<Scalar>::Parse(value.dump());
    } else {
      return value.get<double>();
    }
  }
  Fail(ErrorCode::kConfigInvalid, "expected a number, got " + value.dump());
}

template <typename Scalar>
RpsMatrix<Scalar> MatrixFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("weights") || !j["weights"].is_array()) {
    Fail(ErrorCode::kConfigInvalid, "matrix needs a 'weights' array");
  }
  std::vector<Scalar> weights;
  for (const auto& w : j["weights"]) weights.push_back(ScalarFromJson<Scalar>(w));
  if (j.contains("n") && j["n"].get<int>() != static_cast<int>(weights.size())) {
    Fail(ErrorCode::kConfigInvalid, "'n' does not match the number of weights");
  }
  return MakeRps(std::move(weights));
}

}  // namespace rpsdyn

#endif  // RPSDYN_GAME_HPP_

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "onebit/stochastics.hpp"

namespace onebit {

inline constexpr double kUnitNormTolerance = 1e-9;
inline constexpr double kInnerProductOvershoot = 1e-12;

/// Point on the unit sphere S^{n-1}. Nonzero coordinates are indexed at
/// construction so sparse signals can be measured in O(nnz).
class UnitVector {
public:
  /// Rejects coordinates whose Euclidean norm is off by more than 1e-9.
  static UnitVector from_coords(std::vector<double> coords,
                                std::optional<std::size_t> sparsity = std::nullopt) {
    const double norm = norm2(coords);
    if (std::abs(norm - 1.0) > kUnitNormTolerance)
      throw std::invalid_argument("UnitVector: coordinates are not unit length");
    return UnitVector(std::move(coords), sparsity);
  }

  /// Divides by the Euclidean norm first.
  static UnitVector normalized(std::vector<double> coords,
                               std::optional<std::size_t> sparsity = std::nullopt) {
    const double norm = norm2(coords);
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw std::invalid_argument("UnitVector: cannot normalize a zero or non-finite vector");
    for (auto& c : coords) c /= norm;
    return UnitVector(std::move(coords), sparsity);
  }

  /// Standard basis vector e_{index} in R^dim (0-based index).
  static UnitVector basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::invalid_argument("UnitVector::basis: index out of range");
    std::vector<double> c(dim, 0.0);
    c[index] = 1.0;
    return UnitVector(std::move(c), std::nullopt);
  }

  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const std::size_t> support() const { return support_; }
  std::optional<std::size_t> declared_sparsity() const { return sparsity_; }

  UnitVector operator-() const {
    std::vector<double> c(coords_);
    for (auto& v : c) v = -v;
    return UnitVector(std::move(c), sparsity_);
  }

  /// <row, this> summed over the nonzero coordinates in index order; adding
  /// the skipped zero terms would not change the floating-point result.
  double dot(std::span<const double> row) const {
    double acc = 0.0;
    if (support_.size() * 2 < coords_.size()) {
      for (auto j : support_) acc += row[j] * coords_[j];
    } else {
      for (std::size_t j = 0; j < coords_.size(); ++j) acc += row[j] * coords_[j];
    }
    return acc;
  }

  friend bool operator==(const UnitVector& a, const UnitVector& b) { return a.coords_ == b.coords_; }

private:
  UnitVector(std::vector<double> coords, std::optional<std::size_t> sparsity)
      : coords_(std::move(coords)), sparsity_(sparsity) {
    if (coords_.empty()) throw std::invalid_argument("UnitVector: dimension must be >= 1");
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      if (!std::isfinite(coords_[j])) throw std::invalid_argument("UnitVector: non-finite coordinate");
      if (coords_[j] != 0.0) support_.push_back(j);
    }
    if (sparsity_ && support_.size() > *sparsity_)
      throw std::invalid_argument("UnitVector: more nonzeros than the declared sparsity");
  }

  static double norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
  }

  std::vector<double> coords_;
  std::vector<std::size_t> support_;
  std::optional<std::size_t> sparsity_;
};

/// Additive white Gaussian noise level; sigma = 0 is the noiseless model.
struct NoiseModel {
  double sigma = 0.0;

  explicit NoiseModel(double s = 0.0) : sigma(s) {
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("NoiseModel: sigma must be finite and >= 0");
  }
  bool noiseless() const { return sigma == 0.0; }
};

inline double inner_product(const UnitVector& x, const UnitVector& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < x.dim(); ++j) acc += x[j] * y[j];
  return acc;
}

/// Support drawn uniformly among s-subsets of [n], Gaussian coefficients on
/// the support, then normalized.
inline UnitVector sample_sparse_unit(RngStream& stream, std::size_t n, std::size_t s) {
  if (s == 0 || s > n) throw std::invalid_argument("sample_sparse_unit: need 1 <= s <= n");
  std::vector<std::size_t> all(n);
  for (std::size_t j = 0; j < n; ++j) all[j] = j;
  std::vector<std::size_t> support;
  support.reserve(s);
  std::sample(all.begin(), all.end(), std::back_inserter(support), s, stream);
  for (;;) {
    std::vector<double> c(n, 0.0);
    double sq = 0.0;
    for (auto j : support) {
      c[j] = stream.gaussian();
      sq += c[j] * c[j];
    }
    if (sq > 0.0) return UnitVector::normalized(std::move(c), s);
  }
}

/// arccos(rho)/pi with rho clamped to [-1,1]; overshoot beyond 1e-12 throws.
/// Equals the probability that two unit-variance Gaussians with correlation
/// rho have different signs.
inline double disagreement_probability(double rho) {
  if (!(std::abs(rho) <= 1.0 + kInnerProductOvershoot))
    throw std::invalid_argument("disagreement_probability: |rho| > 1");
  return std::acos(std::clamp(rho, -1.0, 1.0)) / std::numbers::pi;
}

/// Correlation of the noisy measurements (<x,g>+mu, <y,g>+mu).
inline double distorted_correlation(double inner, const NoiseModel& noise) {
  const double s2 = noise.sigma * noise.sigma;
  return (inner + s2) / (1.0 + s2);
}

namespace detail {
/// Squared chord lengths |x - y|^2 and |x + y|^2.
inline std::pair<double, double> chords(const UnitVector& x, const UnitVector& y) {
  double minus = 0.0, plus = 0.0;
  for (std::size_t j = 0; j < x.dim(); ++j) {
    const double a = x[j], b = y[j];
    minus += (a - b) * (a - b);
    plus += (a + b) * (a + b);
  }
  return {minus, plus};
}
} // namespace detail

// Both distances use the half-angle form 2 atan2(|x-y|, |x+y|) of the angle,
// which stays accurate where arccos of the inner product does not (near 0
// and near 1).

/// Normalized geodesic distance; antipodes are at distance 1.
inline double geodesic_distance(const UnitVector& x, const UnitVector& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("geodesic_distance: dimension mismatch");
  const auto [minus, plus] = detail::chords(x, y);
  return 2.0 * std::atan2(std::sqrt(minus), std::sqrt(plus)) / std::numbers::pi;
}

/// The metric the noisy embedding concentrates around; reduces to
/// geodesic_distance when sigma = 0. Computed as the geodesic distance of the
/// lifted points, whose chords are |x-y|/r and sqrt(|x+y|^2 + 4 sigma^2)/r.
inline double distorted_distance(const UnitVector& x, const UnitVector& y, const NoiseModel& noise) {
  if (x.dim() != y.dim()) throw std::invalid_argument("distorted_distance: dimension mismatch");
  if (noise.noiseless()) return geodesic_distance(x, y);
  const auto [minus, plus] = detail::chords(x, y);
  const double s2 = noise.sigma * noise.sigma;
  return 2.0 * std::atan2(std::sqrt(minus), std::sqrt(plus + 4.0 * s2)) / std::numbers::pi;
}

/// x -> (x, sigma)/sqrt(1 + sigma^2) in S^n.
inline UnitVector lift(const UnitVector& x, const NoiseModel& noise) {
  const double scale = 1.0 / std::sqrt(1.0 + noise.sigma * noise.sigma);
  std::vector<double> c;
  c.reserve(x.dim() + 1);
  for (double v : x.coords()) c.push_back(v * scale);
  c.push_back(noise.sigma * scale);
  std::optional<std::size_t> sparsity;
  if (x.declared_sparsity()) sparsity = *x.declared_sparsity() + 1;
  return UnitVector::from_coords(std::move(c), sparsity);
}

/// sup over the sphere of d - d^sigma, attained at antipodal pairs.
inline double antipodal_gap(const NoiseModel& noise) {
  const double s2 = noise.sigma * noise.sigma;
  return 1.0 - disagreement_probability((s2 - 1.0) / (s2 + 1.0));
}

} // namespace onebit

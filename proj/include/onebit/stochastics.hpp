#pragma once

// Seeded random streams plus the small statistics toolkit the harness uses:
// Gaussian sampling, normal-approximation binomial intervals and log-log fits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace onebit {

/// A reproducible random stream identified by (seed, stream_id).
///
/// Backed by std::mt19937_64 (64-bit output, period 2^19937 - 1). The engine
/// state is seeded through std::seed_seq from all four 32-bit halves of seed
/// and stream_id, so streams that differ in either value start from unrelated
/// states and never share mutable state. Equal (seed, stream_id) pairs give
/// identical sequences within one build.
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random> and
/// <algorithm> (std::sample, std::shuffle, ...).
class RngStream {
public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Derives an independent child stream; pure in (seed, stream_id, tag).
  RngStream fork(std::uint64_t tag) const {
    return RngStream(seed_, splitmix(splitmix(stream_id_) ^ (tag + 0x9e3779b97f4a7c15ULL)));
  }

  /// Uniform double in the half-open interval (0, 1].
  double uniform_open0() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal draw by the Box-Muller transform; the paired value is
  /// cached for the next call.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform index in [0, bound).
  std::size_t index(std::size_t bound) {
    if (bound == 0) throw std::invalid_argument("RngStream::index: bound must be positive");
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(*this);
  }

private:
  static std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// iid N(0,1) vector of length dim.
inline std::vector<double> gaussian_vector(RngStream& stream, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("gaussian_vector: dim must be >= 1");
  std::vector<double> out(dim);
  for (auto& v : out) v = stream.gaussian();
  return out;
}

struct Interval {
  double lo;
  double hi;

  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
};

/// Normal-approximation interval p +/- z*sqrt(p(1-p)/trials), clamped to [0,1].
inline Interval binomial_band(double p, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("binomial_band: trials must be >= 1");
  if (!(z > 0.0)) throw std::invalid_argument("binomial_band: z must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_band: p must lie in [0,1]");
  const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return {std::clamp(p - half, 0.0, 1.0), std::clamp(p + half, 0.0, 1.0)};
}

/// Normal-approximation confidence interval around the empirical rate.
inline Interval binomial_ci(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("binomial_ci: trials must be >= 1");
  if (successes > trials) throw std::invalid_argument("binomial_ci: successes exceed trials");
  return binomial_band(static_cast<double>(successes) / static_cast<double>(trials), trials, z);
}

struct Point2 {
  double x;
  double y;
};

struct SlopeFit {
  double slope;
  double intercept;
  double r_squared;
};

/// Least-squares line through (log x, log y).
inline SlopeFit fit_loglog_slope(std::span<const Point2> points) {
  if (points.size() < 2) throw std::invalid_argument("fit_loglog_slope: need at least 2 points");
  std::vector<double> lx, ly;
  lx.reserve(points.size());
  ly.reserve(points.size());
  for (const auto& p : points) {
    if (!(p.x > 0.0) || !(p.y > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("fit_loglog_slope: coordinates must be positive and finite");
    lx.push_back(std::log(p.x));
    ly.push_back(std::log(p.y));
  }
  const double n = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_loglog_slope: need at least 2 distinct x");
  const double slope = sxy / sxx;
  // A constant y is fit exactly by a flat line.
  const double r2 = syy <= 1e-300 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return {slope, my - slope * mx, r2};
}

} // namespace onebit

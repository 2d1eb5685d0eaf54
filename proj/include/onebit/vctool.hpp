#pragma once

// Brute-force VC machinery for sparse hemispheres H_p = {b : <p,b> > 0} and
// their wedges (pairwise symmetric differences), plus the closed-form bounds
// that go with them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "onebit/detail/simplex.hpp"
#include "onebit/embedding.hpp"
#include "onebit/geometry.hpp"
#include "onebit/stochastics.hpp"

namespace onebit {

/// Thrown when an exponential enumeration would exceed its guard.
class resource_limit_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using DichotomyMask = std::uint32_t;

/// k-bit labelling of a point set; bit i set <=> point i labelled +.
struct Dichotomy {
  DichotomyMask mask = 0;
  std::size_t width = 0;

  bool positive(std::size_t i) const { return (mask >> i) & 1u; }
  friend auto operator<=>(const Dichotomy&, const Dichotomy&) = default;
};

/// k >= 1 pairwise distinct unit vectors of a common dimension.
class PointSet {
public:
  explicit PointSet(std::vector<UnitVector> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("PointSet: need at least one point");
    for (const auto& p : points_)
      if (p.dim() != points_.front().dim()) throw std::invalid_argument("PointSet: dimension mismatch");
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        if (points_[i] == points_[j]) throw std::invalid_argument("PointSet: points must be distinct");
  }

  /// {e_1, ..., e_count} in R^n.
  static PointSet standard_basis(std::size_t n, std::size_t count) {
    std::vector<UnitVector> pts;
    for (std::size_t i = 0; i < count; ++i) pts.push_back(UnitVector::basis(n, i));
    return PointSet(std::move(pts));
  }

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.front().dim(); }
  const UnitVector& operator[](std::size_t i) const { return points_[i]; }
  std::span<const UnitVector> points() const { return points_; }

  PointSet with(const UnitVector& extra) const {
    auto pts = points_;
    pts.push_back(extra);
    return PointSet(std::move(pts));
  }

private:
  std::vector<UnitVector> points_;
};

/// Direction p with support realizing a dichotomy.
struct Witness {
  std::vector<std::size_t> support;
  UnitVector direction;
};

struct VcOptions {
  /// Required positive-side margin relative to ||p||_inf.
  double tol = 1e-9;
  /// Guard on 2^k dichotomy loops.
  std::size_t max_points = 20;
  /// Enumerate all C(n,s) supports up to this many; sample beyond.
  std::uint64_t exhaustive_support_limit = 100000;
  std::size_t sampled_supports = 10000;
  std::uint64_t support_seed = 0;
};

struct DichotomySet {
  std::size_t width = 0;
  std::set<DichotomyMask> masks;
  std::map<DichotomyMask, Witness> witnesses;
  /// Wedge sets only: a ^ b = mask for hemisphere dichotomies a, b.
  std::map<DichotomyMask, std::pair<DichotomyMask, DichotomyMask>> wedge_sources;
  /// False if supports were sampled; the set is then a subset of the truth.
  bool exhaustive = true;

  std::size_t size() const { return masks.size(); }
  bool contains(DichotomyMask m) const { return masks.count(m) != 0; }
};

struct ShatterResult {
  bool shattered = false;
  std::size_t achieved_count = 0;
  std::size_t k = 0;
  bool exhaustive = true;
  std::map<DichotomyMask, Witness> witnesses;
  std::map<DichotomyMask, std::pair<DichotomyMask, DichotomyMask>> wedge_sources;
};

enum class SetClass { hemisphere, wedge };

namespace detail {

inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

struct SupportPlan {
  std::vector<std::vector<std::size_t>> supports;
  bool exhaustive = true;
};

/// All supports of size min(s, n) (smaller supports are subsumed), or a
/// random sample of them when there are too many.
inline SupportPlan plan_supports(std::size_t n, std::size_t s, const VcOptions& opts) {
  if (s == 0) throw std::invalid_argument("supports: sparsity must be >= 1");
  const std::size_t r = std::min(s, n);
  SupportPlan plan;
  if (binomial_capped(n, r, opts.exhaustive_support_limit) <= opts.exhaustive_support_limit) {
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    for (;;) {
      plan.supports.push_back(idx);
      std::size_t i = r;
      while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
    return plan;
  }
  plan.exhaustive = false;
  RngStream stream(opts.support_seed, 0);
  std::vector<std::size_t> all(n);
  for (std::size_t j = 0; j < n; ++j) all[j] = j;
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t t = 0; t < opts.sampled_supports; ++t) {
    std::vector<std::size_t> sup;
    std::sample(all.begin(), all.end(), std::back_inserter(sup), r, stream);
    seen.insert(std::move(sup));
  }
  plan.supports.assign(seen.begin(), seen.end());
  return plan;
}

/// Margin LP on the coordinates of one support. `rows` holds the k points
/// restricted to the support (k x r, row-major). Returns p with
/// ||p||_inf <= 1 or nullopt.
class RestrictedFeasibility {
public:
  RestrictedFeasibility(std::span<const double> rows, std::size_t k, std::size_t r, double tol)
      : rows_(rows), k_(k), r_(r), tol_(tol) {}

  std::vector<std::vector<double>> candidates(DichotomyMask mask) const {
    std::vector<std::vector<double>> out;
    bool any_positive = false;
    for (std::size_t i = 0; i < k_; ++i) {
      if (!((mask >> i) & 1u)) continue;
      // A + point with zero projection can never clear a positive margin.
      if (zero_row(i)) return out;
      any_positive = true;
    }
    if (any_positive) {
      // The weak LP relaxes the strict one, so its infeasibility settles the
      // support in a single solve. Otherwise prefer the strict solution, whose
      // slack on both sides survives rounding.
      auto weak = margin_lp(mask, false);
      if (!weak) return out;
      if (auto p = margin_lp(mask, true)) out.push_back(std::move(*p));
      out.push_back(std::move(*weak));
    } else {
      if (auto p = margin_lp(mask, true)) out.push_back(std::move(*p));
      for (std::size_t j = 0; j < r_; ++j)
        for (double sign : {1.0, -1.0})
          if (auto p = coordinate_lp(mask, j, sign)) out.push_back(std::move(*p));
    }
    return out;
  }

private:
  double b(std::size_t i, std::size_t j) const { return rows_[i * r_ + j]; }

  bool zero_row(std::size_t i) const {
    for (std::size_t j = 0; j < r_; ++j)
      if (b(i, j) != 0.0) return false;
    return true;
  }

  // Variables u (r), v (r), t; p = u - v.
  std::optional<std::vector<double>> margin_lp(DichotomyMask mask, bool strict) const {
    const std::size_t vars = 2 * r_ + 1;
    const std::size_t nrows = k_ + vars;
    std::vector<double> A(nrows * vars, 0.0), rhs(nrows, 0.0), c(vars, 0.0);
    for (std::size_t i = 0; i < k_; ++i) {
      const bool pos = (mask >> i) & 1u;
      const double sgn = pos ? -1.0 : 1.0;
      for (std::size_t j = 0; j < r_; ++j) {
        A[i * vars + j] = sgn * b(i, j);
        A[i * vars + r_ + j] = -sgn * b(i, j);
      }
      // Zero-projection points sit at exactly 0, already on the - side.
      A[i * vars + 2 * r_] = (pos || (strict && !zero_row(i))) ? 1.0 : 0.0;
    }
    for (std::size_t j = 0; j < vars; ++j) {
      A[(k_ + j) * vars + j] = 1.0;
      rhs[k_ + j] = 1.0;
    }
    c[2 * r_] = 1.0;
    auto sol = DenseSimplex::maximize(c, A, rhs);
    if (!sol || !(sol->value > tol_)) return std::nullopt;
    std::vector<double> p(r_);
    for (std::size_t j = 0; j < r_; ++j) p[j] = sol->x[j] - sol->x[r_ + j];
    return p;
  }

  // All-negative labelling with no strict margin: push one coordinate of p
  // to +-1 while every point stays on the closed negative side.
  std::optional<std::vector<double>> coordinate_lp(DichotomyMask, std::size_t coord, double sign) const {
    const std::size_t vars = 2 * r_;
    const std::size_t nrows = k_ + vars;
    std::vector<double> A(nrows * vars, 0.0), rhs(nrows, 0.0), c(vars, 0.0);
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = 0; j < r_; ++j) {
        A[i * vars + j] = b(i, j);
        A[i * vars + r_ + j] = -b(i, j);
      }
    }
    for (std::size_t j = 0; j < vars; ++j) {
      A[(k_ + j) * vars + j] = 1.0;
      rhs[k_ + j] = 1.0;
    }
    c[coord] = sign;
    c[r_ + coord] = -sign;
    auto sol = DenseSimplex::maximize(c, A, rhs);
    if (!sol || !(sol->value > tol_)) return std::nullopt;
    std::vector<double> p(r_);
    for (std::size_t j = 0; j < r_; ++j) p[j] = sol->x[j] - sol->x[r_ + j];
    return p;
  }

  std::span<const double> rows_;
  std::size_t k_;
  std::size_t r_;
  double tol_;
};

/// Expands a restricted direction to R^n, normalizes it, and re-quantizes
/// every point through sign_quantize. Only exact reproductions are accepted.
inline std::optional<UnitVector> verify_direction(const PointSet& points, DichotomyMask mask,
                                                  std::span<const std::size_t> support,
                                                  std::span<const double> restricted, double tol) {
  std::vector<double> full(points.dim(), 0.0);
  double inf = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    full[support[j]] = restricted[j];
    inf = std::max(inf, std::abs(restricted[j]));
  }
  if (!(inf > 0.0)) return std::nullopt;
  auto p = UnitVector::normalized(std::move(full));
  double pinf = 0.0;
  for (double v : p.coords()) pinf = std::max(pinf, std::abs(v));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = p.dot(points[i].coords());
    const bool want = (mask >> i) & 1u;
    if (sign_quantize(v) != want) return std::nullopt;
    if (want && v < tol * pinf) return std::nullopt;
  }
  return p;
}

/// Decides hemisphere dichotomies of one point set across a support plan.
class HemisphereOracle {
public:
  HemisphereOracle(const PointSet& points, std::size_t s, const VcOptions& opts)
      : points_(points), opts_(opts), plan_(plan_supports(points.dim(), s, opts)) {
    if (points.size() > opts.max_points || points.size() > 31)
      throw resource_limit_error("dichotomy enumeration: too many points");
    const std::size_t k = points.size();
    projected_.reserve(plan_.supports.size());
    for (const auto& sup : plan_.supports) {
      std::vector<double> rows(k * sup.size());
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < sup.size(); ++j) rows[i * sup.size() + j] = points[i][sup[j]];
      projected_.push_back(std::move(rows));
    }
  }

  std::optional<Witness> realize(DichotomyMask mask) const {
    for (std::size_t si = 0; si < plan_.supports.size(); ++si)
      if (auto w = realize_on(mask, si)) return w;
    return std::nullopt;
  }

  std::optional<Witness> realize_on(DichotomyMask mask, std::size_t si) const {
    const auto& sup = plan_.supports[si];
    RestrictedFeasibility lp(projected_[si], points_.size(), sup.size(), opts_.tol);
    for (const auto& cand : lp.candidates(mask))
      if (auto p = verify_direction(points_, mask, sup, cand, opts_.tol)) return Witness{sup, std::move(*p)};
    return std::nullopt;
  }

  /// Index of `support` in the plan, if it is there.
  std::optional<std::size_t> support_index(const std::vector<std::size_t>& support) const {
    const auto it = std::lower_bound(plan_.supports.begin(), plan_.supports.end(), support);
    if (it == plan_.supports.end() || *it != support) return std::nullopt;
    return static_cast<std::size_t>(it - plan_.supports.begin());
  }

  std::size_t support_count() const { return plan_.supports.size(); }
  bool exhaustive() const { return plan_.exhaustive; }

private:
  const PointSet& points_;
  VcOptions opts_;
  SupportPlan plan_;
  std::vector<std::vector<double>> projected_;
};

} // namespace detail

/// Direction p supported on `support` with <p,b_i> >= tol*||p||_inf on the
/// + points and <p,b_i> <= 0 on the - points, or nullopt if none exists.
/// The returned p is unit length.
inline std::optional<UnitVector> achievable(const PointSet& points, const Dichotomy& dich,
                                            std::span<const std::size_t> support, double tol = 1e-9) {
  if (support.empty()) throw std::invalid_argument("achievable: empty support");
  if (!(tol > 0.0)) throw std::invalid_argument("achievable: tol must be positive");
  if (dich.width != points.size()) throw std::invalid_argument("achievable: dichotomy width != point count");
  for (auto j : support)
    if (j >= points.dim()) throw std::invalid_argument("achievable: support index out of range");
  const std::size_t k = points.size(), r = support.size();
  std::vector<double> rows(k * r);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < r; ++j) rows[i * r + j] = points[i][support[j]];
  detail::RestrictedFeasibility lp(rows, k, r, tol);
  for (const auto& cand : lp.candidates(dich.mask))
    if (auto p = detail::verify_direction(points, dich.mask, support, cand, tol)) return p;
  return std::nullopt;
}

/// Every dichotomy of `points` cut out by a hemisphere with an s-sparse pole.
inline DichotomySet hemisphere_dichotomies(const PointSet& points, std::size_t s, const VcOptions& opts = {}) {
  if (points.size() > opts.max_points) throw resource_limit_error("hemisphere_dichotomies: too many points");
  detail::HemisphereOracle oracle(points, s, opts);
  DichotomySet out;
  out.width = points.size();
  out.exhaustive = oracle.exhaustive();
  const DichotomyMask total = DichotomyMask{1} << points.size();
  for (DichotomyMask mask = 0; mask < total; ++mask) {
    if (auto w = oracle.realize(mask)) {
      out.masks.insert(mask);
      out.witnesses.emplace(mask, std::move(*w));
    }
  }
  return out;
}

/// {a XOR b} over hemisphere dichotomies a, b: the traces of sparse wedges.
inline DichotomySet wedge_dichotomies(const PointSet& points, std::size_t s, const VcOptions& opts = {}) {
  const DichotomySet hemi = hemisphere_dichotomies(points, s, opts);
  DichotomySet out;
  out.width = hemi.width;
  out.exhaustive = hemi.exhaustive;
  for (auto a : hemi.masks)
    for (auto b : hemi.masks)
      if (out.masks.insert(a ^ b).second) out.wedge_sources.emplace(a ^ b, std::make_pair(a, b));
  out.witnesses = hemi.witnesses;
  return out;
}

inline ShatterResult is_shattered(const PointSet& points, std::size_t s, SetClass cls, const VcOptions& opts = {}) {
  DichotomySet set =
      cls == SetClass::hemisphere ? hemisphere_dichotomies(points, s, opts) : wedge_dichotomies(points, s, opts);
  ShatterResult r;
  r.k = points.size();
  r.achieved_count = set.size();
  r.shattered = set.size() == (std::size_t{1} << points.size());
  r.exhaustive = set.exhaustive;
  r.witnesses = std::move(set.witnesses);
  r.wedge_sources = std::move(set.wedge_sources);
  return r;
}

/// Closed-form upper bound (2/ln 2) s ln(n e^2 / (s ln 2)) on VC(H^{n,s}).
inline double vc_upper_bound(std::size_t n, std::size_t s) {
  if (s < 1 || s > n) throw std::invalid_argument("vc_upper_bound: need 1 <= s <= n");
  const double sd = static_cast<double>(s);
  return 2.0 / std::numbers::ln2 * sd *
         std::log(static_cast<double>(n) * std::numbers::e * std::numbers::e / (sd * std::numbers::ln2));
}

/// Sauer-Shelah growth bound (e k / d)^d for k >= d >= 1.
inline double sauer_bound(std::size_t k, std::size_t d) {
  if (d < 1 || k < d) throw std::invalid_argument("sauer_bound: need k >= d >= 1");
  return std::pow(std::numbers::e * static_cast<double>(k) / static_cast<double>(d), static_cast<double>(d));
}

/// Lower branch W_{-1} of the Lambert W function on [-1/e, 0): the w <= -1
/// solving w e^w = x. Bracketed bisection to width 1e-10, then Newton.
inline double lambert_w_minus1(double x) {
  const double branch = -std::exp(-1.0);
  if (!(x < 0.0)) throw std::invalid_argument("lambert_w_minus1: x must be negative");
  // -1/e is not representable; accept the neighbouring doubles as the branch point.
  if (std::abs(x - branch) <= 4.0 * std::numeric_limits<double>::epsilon()) return -1.0;
  if (x < branch) throw std::invalid_argument("lambert_w_minus1: x must be >= -1/e");

  auto f = [x](double w) { return w * std::exp(w) - x; };
  // w e^w decreases from -1/e to 0 on (-inf, -1].
  double hi = -1.0, lo = -2.0;
  while (f(lo) < 0.0) lo *= 2.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      hi = mid;
    else
      lo = mid;
  }
  double w = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double slope = std::exp(w) * (1.0 + w);
    if (slope == 0.0) break;
    const double next = w - f(w) / slope;
    if (!(next >= lo - 1e-9 && next <= hi + 1e-9)) break;
    if (next == w) break;
    w = next;
  }
  return std::min(w, -1.0);
}

/// Greedy t^2-packing of sparse wedges under the empirical measure of a
/// fixed Gaussian point cloud. Each wedge W_{x,y} is represented by its
/// indicator on the cloud, embed(G,x) XOR embed(G,y); wedges are kept when
/// their symmetric-difference measure against every kept wedge exceeds t^2.
/// With sigma > 0 the wedges live on the lifted sphere S^n.
inline std::size_t packing_estimate(std::size_t n, std::size_t s, double sigma, double t, std::size_t candidates,
                                    std::size_t empirical_points, RngStream& stream) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("packing_estimate: t must lie in (0,1)");
  if (candidates == 0 || empirical_points == 0)
    throw std::invalid_argument("packing_estimate: candidates and empirical_points must be >= 1");
  const NoiseModel noise{sigma};
  const std::size_t dim = noise.noiseless() ? n : n + 1;
  const auto cloud = SensingMatrix::gaussian(stream, empirical_points, dim);
  const double threshold = t * t;
  std::vector<BitCode> kept;
  for (std::size_t c = 0; c < candidates; ++c) {
    auto x = sample_sparse_unit(stream, n, s);
    auto y = sample_sparse_unit(stream, n, s);
    if (!noise.noiseless()) {
      x = lift(x, noise);
      y = lift(y, noise);
    }
    BitCode wedge = embed(cloud, x) ^ embed(cloud, y);
    const bool separated =
        std::all_of(kept.begin(), kept.end(), [&](const BitCode& w) { return hamming(w, wedge) > threshold; });
    if (separated) kept.push_back(std::move(wedge));
  }
  return kept.size();
}

struct VcSearchResult {
  std::size_t size = 0;
  std::optional<PointSet> best;
  ShatterResult result;
  std::size_t tests_used = 0;
  std::size_t restarts = 0;
};

namespace detail {

/// The dichotomy a direction cuts out of `points`, provided every + point
/// clears the margin tol * ||p||_inf; nullopt otherwise.
inline std::optional<DichotomyMask> mask_of(const PointSet& points, const UnitVector& p, double tol) {
  double pinf = 0.0;
  for (double v : p.coords()) pinf = std::max(pinf, std::abs(v));
  DichotomyMask mask = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = p.dot(points[i].coords());
    if (!sign_quantize(v)) continue;
    if (v < tol * pinf) return std::nullopt;
    mask |= DichotomyMask{1} << i;
  }
  return mask;
}

struct PoolProbe {
  /// First dichotomy found unrealizable, if any.
  std::optional<DichotomyMask> missing;
  /// One witness per mask when the set is shattered.
  std::vector<Witness> witnesses;
};

/// Hemisphere shattering test seeded with the witnesses of a shattered
/// prefix of `points` (pool[m] realizes m on the first pool-width points).
/// Pool directions are re-scored on the full set first; each remaining mask
/// tries the support of its prefix witness before scanning every support.
inline PoolProbe shatter_with_pool(const PointSet& points, std::size_t s, const VcOptions& opts, DichotomyMask hint,
                                   std::span<const Witness> pool) {
  HemisphereOracle oracle(points, s, opts);
  const std::size_t k = points.size();
  const DichotomyMask total = DichotomyMask{1} << k;
  PoolProbe out;
  std::vector<std::optional<Witness>> found(total);
  for (const auto& w : pool)
    if (auto m = mask_of(points, w.direction, opts.tol); m && !found[*m]) found[*m] = w;

  const DichotomyMask prefix = pool.empty() ? 0 : static_cast<DichotomyMask>(pool.size() - 1);
  auto solve = [&](DichotomyMask m) -> bool {
    if (found[m]) return true;
    std::optional<std::size_t> preferred;
    if (!pool.empty()) preferred = oracle.support_index(pool[m & prefix].support);
    if (preferred)
      if (auto w = oracle.realize_on(m, *preferred)) {
        found[m] = std::move(*w);
        return true;
      }
    for (std::size_t si = 0; si < oracle.support_count(); ++si) {
      if (preferred && si == *preferred) continue;
      if (auto w = oracle.realize_on(m, si)) {
        found[m] = std::move(*w);
        return true;
      }
    }
    return false;
  };

  if (hint < total && !solve(hint)) {
    out.missing = hint;
    return out;
  }
  for (DichotomyMask m = 0; m < total; ++m) {
    if (!solve(m)) {
      out.missing = m;
      return out;
    }
  }
  out.witnesses.reserve(total);
  for (auto& w : found) out.witnesses.push_back(std::move(*w));
  return out;
}

/// Early-exit shattering test: stops at the first unrealizable dichotomy,
/// trying `hint` first. Returns the failing mask, or nullopt if shattered.
inline std::optional<DichotomyMask> first_unrealized(const PointSet& points, std::size_t s, SetClass cls,
                                                     const VcOptions& opts, DichotomyMask hint) {
  const DichotomyMask total = DichotomyMask{1} << points.size();
  if (cls == SetClass::wedge) {
    const auto w = wedge_dichotomies(points, s, opts);
    if (w.size() == total) return std::nullopt;
    for (DichotomyMask m = 0; m < total; ++m)
      if (!w.contains(m)) return m;
    return std::nullopt;
  }
  HemisphereOracle oracle(points, s, opts);
  if (hint < total && !oracle.realize(hint)) return hint;
  for (DichotomyMask m = 0; m < total; ++m) {
    if (m == hint) continue;
    if (!oracle.realize(m)) return m;
  }
  return std::nullopt;
}

inline UnitVector random_probe(RngStream& stream, std::size_t n) {
  if (stream.index(2) == 0) return UnitVector::normalized(gaussian_vector(stream, n));
  return sample_sparse_unit(stream, n, 1 + stream.index(n));
}

} // namespace detail

/// Randomized greedy search for a large shattered set. The first restart is
/// seeded with {e_1..e_min(s,n)}; later restarts start from a random point.
/// Candidates are appended while the enlarged set stays shattered; a restart
/// ends after `patience` consecutive rejections. `budget` counts shattering
/// tests. The returned size is a certified lower bound on the VC dimension.
inline VcSearchResult vc_lower_bound_search(std::size_t n, std::size_t s, SetClass cls, std::size_t budget,
                                            RngStream& stream, const VcOptions& opts = {},
                                            std::size_t patience = 32) {
  if (budget == 0) throw std::invalid_argument("vc_lower_bound_search: budget must be >= 1");
  if (s < 1 || s > n) throw std::invalid_argument("vc_lower_bound_search: need 1 <= s <= n");
  const std::size_t cap = std::min<std::size_t>(opts.max_points, cls == SetClass::hemisphere ? n : 12);
  VcSearchResult out;
  DichotomyMask hint = 0;

  auto consider = [&](const PointSet& ps) {
    if (ps.size() > out.size) {
      out.size = ps.size();
      out.best = ps;
    }
  };

  // Witnesses of the current shattered set (hemisphere class only), indexed
  // by mask; they seed the next, one-point-larger test.
  std::vector<Witness> pool;
  auto test = [&](const PointSet& ps) -> std::optional<DichotomyMask> {
    ++out.tests_used;
    if (cls == SetClass::wedge) return detail::first_unrealized(ps, s, cls, opts, hint);
    auto probe = detail::shatter_with_pool(ps, s, opts, hint, pool);
    if (!probe.missing) pool = std::move(probe.witnesses);
    return probe.missing;
  };

  while (out.tests_used < budget) {
    std::optional<PointSet> current;
    pool.clear();
    if (out.restarts == 0) {
      auto seed = PointSet::standard_basis(n, std::min(s, n));
      if (!test(seed)) current = std::move(seed);
    }
    if (!current) {
      current = PointSet({detail::random_probe(stream, n)});
      if (test(*current)) current.reset();
    }
    ++out.restarts;
    if (!current) continue;
    consider(*current);

    std::size_t misses = 0;
    while (out.tests_used < budget && misses < patience && current->size() < cap) {
      const UnitVector probe = detail::random_probe(stream, n);
      const bool duplicate = std::any_of(current->points().begin(), current->points().end(),
                                         [&](const UnitVector& p) { return p == probe; });
      if (duplicate) continue;
      auto candidate = current->with(probe);
      if (auto miss = test(candidate)) {
        hint = *miss;
        ++misses;
        continue;
      }
      misses = 0;
      current = std::move(candidate);
      consider(*current);
    }
    if (out.size >= cap) break;
  }
  if (out.best) out.result = is_shattered(*out.best, s, cls, opts);
  return out;
}

} // namespace onebit

#pragma once

// Monte-Carlo estimation of sup_{x,y} |d_H(Phi x, Phi y) - d(x,y)| over
// sampled sparse pairs. The supremum over the continuum is out of reach, so
// every report here is a lower bound on the true deviation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "onebit/detail/parallel.hpp"
#include "onebit/embedding.hpp"
#include "onebit/geometry.hpp"
#include "onebit/stochastics.hpp"

namespace onebit {

enum class PairStrategy { iid_uniform, shared_support, disjoint_support, near_antipodal, epsilon_close, mixed };
enum class Metric { geodesic, distorted };

inline std::string_view to_string(PairStrategy s) {
  switch (s) {
    case PairStrategy::iid_uniform: return "iid-uniform";
    case PairStrategy::shared_support: return "shared-support";
    case PairStrategy::disjoint_support: return "disjoint-support";
    case PairStrategy::near_antipodal: return "near-antipodal";
    case PairStrategy::epsilon_close: return "epsilon-close";
    case PairStrategy::mixed: return "mixed";
  }
  return "?";
}

inline std::optional<PairStrategy> parse_strategy(std::string_view name) {
  for (auto s : {PairStrategy::iid_uniform, PairStrategy::shared_support, PairStrategy::disjoint_support,
                 PairStrategy::near_antipodal, PairStrategy::epsilon_close, PairStrategy::mixed})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

inline std::string_view to_string(Metric m) { return m == Metric::geodesic ? "geodesic" : "distorted"; }

using SignalPair = std::pair<UnitVector, UnitVector>;

/// Recipe for drawing pairs from S^{n-1}_s x S^{n-1}_s. `mixed` cycles through
/// the five base strategies (disjoint-support is skipped when 2s > n).
struct PairSampler {
  PairStrategy strategy = PairStrategy::mixed;
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t count = 1;
  /// Perturbation size for epsilon-close and near-antipodal pairs.
  double epsilon = 0.05;

  void validate() const {
    if (count == 0) throw std::invalid_argument("PairSampler: count must be >= 1");
    if (s == 0 || s > n) throw std::invalid_argument("PairSampler: need 1 <= s <= n");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("PairSampler: epsilon must lie in (0,1)");
    if (strategy == PairStrategy::disjoint_support && 2 * s > n)
      throw std::invalid_argument("PairSampler: disjoint supports need 2s <= n");
  }

  std::vector<SignalPair> sample(RngStream& stream) const {
    validate();
    std::vector<SignalPair> pairs;
    pairs.reserve(count);
    std::vector<PairStrategy> cycle{PairStrategy::iid_uniform, PairStrategy::shared_support};
    if (2 * s <= n) cycle.push_back(PairStrategy::disjoint_support);
    cycle.push_back(PairStrategy::near_antipodal);
    cycle.push_back(PairStrategy::epsilon_close);
    for (std::size_t i = 0; i < count; ++i) {
      const PairStrategy st = strategy == PairStrategy::mixed ? cycle[i % cycle.size()] : strategy;
      pairs.push_back(draw(st, stream));
    }
    return pairs;
  }

private:
  // Gaussian coefficients on the support of x, scaled to unit Euclidean norm.
  std::vector<double> support_direction(const UnitVector& x, RngStream& stream) const {
    std::vector<double> z(n, 0.0);
    double sq = 0.0;
    while (sq == 0.0) {
      for (auto j : x.support()) {
        z[j] = stream.gaussian();
        sq += z[j] * z[j];
      }
    }
    for (auto& v : z) v /= std::sqrt(sq);
    return z;
  }

  // normalize(sign * x + epsilon * z) with z a unit direction on supp(x).
  UnitVector perturb(const UnitVector& x, double sign, RngStream& stream) const {
    const auto z = support_direction(x, stream);
    std::vector<double> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = sign * x[j] + epsilon * z[j];
    return UnitVector::normalized(std::move(c), s);
  }

  SignalPair draw(PairStrategy st, RngStream& stream) const {
    switch (st) {
      case PairStrategy::iid_uniform: {
        auto x = sample_sparse_unit(stream, n, s);
        auto y = sample_sparse_unit(stream, n, s);
        return {std::move(x), std::move(y)};
      }
      case PairStrategy::shared_support: {
        auto x = sample_sparse_unit(stream, n, s);
        auto y = UnitVector::normalized(support_direction(x, stream), s);
        return {std::move(x), std::move(y)};
      }
      case PairStrategy::disjoint_support: {
        auto both = sample_sparse_unit(stream, n, 2 * s);
        std::vector<double> cx(n, 0.0), cy(n, 0.0);
        const auto supp = both.support();
        for (std::size_t i = 0; i < supp.size(); ++i) (i < s ? cx : cy)[supp[i]] = both[supp[i]];
        return {UnitVector::normalized(std::move(cx), s), UnitVector::normalized(std::move(cy), s)};
      }
      case PairStrategy::near_antipodal: {
        auto x = sample_sparse_unit(stream, n, s);
        auto y = perturb(x, -1.0, stream);
        return {std::move(x), std::move(y)};
      }
      case PairStrategy::epsilon_close: {
        auto x = sample_sparse_unit(stream, n, s);
        auto y = perturb(x, 1.0, stream);
        return {std::move(x), std::move(y)};
      }
      case PairStrategy::mixed: break;
    }
    throw std::logic_error("PairSampler: unreachable strategy");
  }
};

/// Deviation statistics of one map over one batch of pairs. All values are
/// lower bounds on the supremum over the whole sparse sphere.
struct DeviationReport {
  double sup_dev = 0.0;
  double mean_dev = 0.0;
  double q95_dev = 0.0;
  std::size_t pairs = 0;
  std::size_t m = 0;
  double sigma = 0.0;
  Metric metric = Metric::distorted;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  /// hamming(Phi(-x),Phi y) + hamming(Phi x,Phi y) == 1 on the first pair;
  /// only evaluated for noiseless maps without zero measurements of x.
  std::optional<bool> antipode_identity;

  friend bool operator==(const DeviationReport&, const DeviationReport&) = default;
};

/// ceil(C * delta^-2 * (ln(2/eps) + s ln(n/s))).
inline std::uint64_t required_measurements(double delta, double eps, std::size_t s, std::size_t n, double C = 1.0) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("required_measurements: delta must lie in (0,1)");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("required_measurements: eps must lie in (0,1)");
  if (s < 1 || s >= n) throw std::invalid_argument("required_measurements: need 1 <= s < n");
  if (!(C > 0.0)) throw std::invalid_argument("required_measurements: C must be positive");
  const double sd = static_cast<double>(s);
  const double value = C / (delta * delta) * (std::log(2.0 / eps) + sd * std::log(static_cast<double>(n) / sd));
  return static_cast<std::uint64_t>(std::ceil(value));
}

namespace detail {

inline void check_noise(const SensingMatrix& A, const NoiseVector* eta, const NoiseModel& noise) {
  if (noise.noiseless() != (eta == nullptr))
    throw std::invalid_argument("deviation: noise vector must be given iff sigma > 0");
  if (eta && eta->size() != A.rows()) throw std::invalid_argument("deviation: noise length != m");
  if (eta && eta->sigma() != noise.sigma) throw std::invalid_argument("deviation: noise sigma mismatch");
}

inline BitCode encode(const SensingMatrix& A, const NoiseVector* eta, const UnitVector& x) {
  return eta ? embed_noisy(A, *eta, x) : embed(A, x);
}

/// Normalized Hamming distance for every pair. With caching each distinct
/// signal object is encoded once; the values do not depend on the flag.
inline std::vector<double> pair_hamming(const SensingMatrix& A, const NoiseVector* eta,
                                        std::span<const SignalPair> pairs, bool cache_codes) {
  std::vector<double> out;
  out.reserve(pairs.size());
  if (cache_codes) {
    std::vector<BitCode> codes;
    codes.reserve(2 * pairs.size());
    for (const auto& [x, y] : pairs) {
      codes.push_back(encode(A, eta, x));
      codes.push_back(encode(A, eta, y));
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) out.push_back(hamming(codes[2 * i], codes[2 * i + 1]));
  } else {
    for (const auto& [x, y] : pairs) out.push_back(hamming(encode(A, eta, x), encode(A, eta, y)));
  }
  return out;
}

inline double reference_distance(const SignalPair& p, Metric metric, const NoiseModel& noise) {
  return metric == Metric::geodesic ? geodesic_distance(p.first, p.second)
                                    : distorted_distance(p.first, p.second, noise);
}

inline void summarize(std::vector<double> devs, DeviationReport& report) {
  double sum = 0.0, sup = 0.0;
  for (double d : devs) {
    sum += d;
    sup = std::max(sup, d);
  }
  // Nearest-rank 95th percentile.
  const std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(devs.size())));
  const std::size_t idx = std::min(devs.size() - 1, rank == 0 ? 0 : rank - 1);
  std::nth_element(devs.begin(), devs.begin() + static_cast<std::ptrdiff_t>(idx), devs.end());
  report.sup_dev = sup;
  report.mean_dev = sum / static_cast<double>(devs.size());
  report.q95_dev = devs[idx];
}

inline std::optional<bool> antipode_identity(const SensingMatrix& A, const SignalPair& p) {
  for (std::size_t k = 0; k < A.rows(); ++k)
    if (p.first.dot(A.row(k)) == 0.0) return std::nullopt;
  const BitCode cx = embed(A, p.first);
  const BitCode cy = embed(A, p.second);
  const BitCode cneg = embed(A, -p.first);
  return hamming_count(cneg, cy) + hamming_count(cx, cy) == A.rows();
}

} // namespace detail

/// Deviation report over a fixed batch of pairs. `eta` must be present iff
/// noise.sigma > 0.
inline DeviationReport deviation(const SensingMatrix& A, const NoiseVector* eta, std::span<const SignalPair> pairs,
                                 const NoiseModel& noise, Metric metric, bool cache_codes = true) {
  detail::check_noise(A, eta, noise);
  if (pairs.empty()) throw std::invalid_argument("deviation: no pairs");
  for (const auto& [x, y] : pairs)
    if (x.dim() != A.cols() || y.dim() != A.cols()) throw std::invalid_argument("deviation: dimension mismatch");
  const auto ham = detail::pair_hamming(A, eta, pairs, cache_codes);
  std::vector<double> devs(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    devs[i] = std::abs(ham[i] - detail::reference_distance(pairs[i], metric, noise));
  DeviationReport report;
  report.pairs = pairs.size();
  report.m = A.rows();
  report.sigma = noise.sigma;
  report.metric = metric;
  if (noise.noiseless()) report.antipode_identity = detail::antipode_identity(A, pairs.front());
  detail::summarize(std::move(devs), report);
  return report;
}

/// Draws sampler.count pairs from `stream` and reports their deviation.
inline DeviationReport deviation(const SensingMatrix& A, const NoiseVector* eta, const PairSampler& sampler,
                                 const NoiseModel& noise, RngStream& stream, Metric metric = Metric::distorted) {
  if (sampler.n != A.cols()) throw std::invalid_argument("deviation: sampler dimension != matrix columns");
  const auto pairs = sampler.sample(stream);
  DeviationReport r = deviation(A, eta, std::span<const SignalPair>(pairs), noise, metric);
  r.seed = stream.seed();
  r.stream_id = stream.stream_id();
  return r;
}

/// Necessary condition only: the sampled sup underestimates the true sup.
inline bool rip_holds(const DeviationReport& report, double delta) { return report.sup_dev <= delta; }

struct SweepConfig {
  std::size_t n = 128;
  std::size_t s = 4;
  double sigma = 0.0;
  std::vector<std::size_t> m_grid;
  std::size_t trials = 20;
  PairSampler sampler;
  Metric metric = Metric::distorted;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const {
    if (m_grid.empty()) throw std::invalid_argument("sweep_m: empty m grid");
    if (m_grid.front() == 0) throw std::invalid_argument("sweep_m: m must be >= 1");
    for (std::size_t i = 1; i < m_grid.size(); ++i)
      if (m_grid[i] <= m_grid[i - 1]) throw std::invalid_argument("sweep_m: m grid must be strictly ascending");
    if (trials == 0) throw std::invalid_argument("sweep_m: trials must be >= 1");
    (void)NoiseModel{sigma};
    PairSampler sp = sampler;
    sp.n = n;
    sp.s = s;
    sp.validate();
  }
};

struct SweepPoint {
  std::size_t m = 0;
  double mean_sup_dev = 0.0;
  double max_sup_dev = 0.0;
  double mean_mean_dev = 0.0;
  double mean_q95_dev = 0.0;
  std::vector<DeviationReport> trials;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  /// log(mean sup_dev) against log(m); absent for a single-point grid.
  std::optional<SlopeFit> fit;
};

namespace detail {

/// One trial: pairs are drawn once from stream (seed, trial) and reused for
/// every m; each m then gets a fresh matrix (and noise) from the same stream.
inline std::vector<std::vector<DeviationReport>> run_trial(const SweepConfig& cfg, std::size_t trial,
                                                           std::span<const Metric> metrics) {
  RngStream stream(cfg.seed, trial);
  PairSampler sp = cfg.sampler;
  sp.n = cfg.n;
  sp.s = cfg.s;
  const auto pairs = sp.sample(stream);
  const NoiseModel noise{cfg.sigma};
  std::vector<std::vector<DeviationReport>> out(cfg.m_grid.size());
  for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
    const auto A = SensingMatrix::gaussian(stream, cfg.m_grid[mi], cfg.n);
    std::optional<NoiseVector> eta;
    if (!noise.noiseless()) eta = NoiseVector::sample(stream, cfg.m_grid[mi], noise);
    const auto ham = pair_hamming(A, eta ? &*eta : nullptr, pairs, true);
    std::optional<bool> antipode;
    if (noise.noiseless()) antipode = antipode_identity(A, pairs.front());
    for (Metric metric : metrics) {
      std::vector<double> devs(pairs.size());
      for (std::size_t i = 0; i < pairs.size(); ++i)
        devs[i] = std::abs(ham[i] - reference_distance(pairs[i], metric, noise));
      DeviationReport r;
      r.pairs = pairs.size();
      r.m = cfg.m_grid[mi];
      r.sigma = cfg.sigma;
      r.metric = metric;
      r.seed = cfg.seed;
      r.stream_id = trial;
      r.antipode_identity = antipode;
      summarize(std::move(devs), r);
      out[mi].push_back(r);
    }
  }
  return out;
}

inline SweepPoint aggregate(std::size_t m, std::vector<DeviationReport> reports) {
  SweepPoint p;
  p.m = m;
  for (const auto& r : reports) {
    p.mean_sup_dev += r.sup_dev;
    p.max_sup_dev = std::max(p.max_sup_dev, r.sup_dev);
    p.mean_mean_dev += r.mean_dev;
    p.mean_q95_dev += r.q95_dev;
  }
  const double t = static_cast<double>(reports.size());
  p.mean_sup_dev /= t;
  p.mean_mean_dev /= t;
  p.mean_q95_dev /= t;
  p.trials = std::move(reports);
  return p;
}

/// Runs all trials (in parallel) and returns, per metric, the per-m points.
inline std::vector<std::vector<SweepPoint>> run_sweep(const SweepConfig& cfg, std::span<const Metric> metrics) {
  cfg.validate();
  std::vector<std::vector<std::vector<DeviationReport>>> per_trial(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) { per_trial[t] = run_trial(cfg, t, metrics); });
  std::vector<std::vector<SweepPoint>> out(metrics.size());
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
      std::vector<DeviationReport> reports;
      reports.reserve(cfg.trials);
      for (std::size_t t = 0; t < cfg.trials; ++t) reports.push_back(per_trial[t][mi][k]);
      out[k].push_back(aggregate(cfg.m_grid[mi], std::move(reports)));
    }
  }
  return out;
}

} // namespace detail

/// Deviation against cfg.metric along the measurement grid, with a log-log
/// fit of mean sup_dev against m.
inline SweepResult sweep_m(const SweepConfig& cfg) {
  const Metric metrics[] = {cfg.metric};
  SweepResult result;
  result.points = std::move(detail::run_sweep(cfg, metrics).front());
  if (result.points.size() >= 2) {
    std::vector<Point2> pts;
    for (const auto& p : result.points)
      pts.push_back({static_cast<double>(p.m), std::max(p.mean_sup_dev, 1e-300)});
    result.fit = fit_loglog_slope(pts);
  }
  return result;
}

struct FloorConfig {
  std::size_t n = 16;
  std::size_t s = 4;
  double sigma = 1.0;
  std::vector<std::size_t> m_grid;
  std::size_t trials = 5;
  std::size_t pairs = 200;
  double epsilon = 0.01;
  /// Geodesic sup_dev must stay above floor - slack, and end within slack of it.
  double slack = 0.02;
  /// Distorted sup_dev at the largest m must not exceed this.
  double distorted_max = 0.05;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct FloorPoint {
  std::size_t m = 0;
  SweepPoint geodesic;
  SweepPoint distorted;
};

struct FloorReport {
  double floor = 0.0;
  std::vector<FloorPoint> points;
  bool floor_respected = false;  // geodesic >= floor - slack at every m
  bool plateau_reached = false;  // |geodesic - floor| <= slack at the largest m
  bool distorted_small = false;  // distorted <= distorted_max at the largest m
  bool passed() const { return floor_respected && plateau_reached && distorted_small; }
};

/// Contrasts the geodesic and distorted deviations of a noisy map on
/// near-antipodal pairs. The former cannot drop below antipodal_gap(sigma).
inline FloorReport geodesic_floor_check(const FloorConfig& cfg) {
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("geodesic_floor_check: sigma must be > 0");
  SweepConfig sc;
  sc.n = cfg.n;
  sc.s = cfg.s;
  sc.sigma = cfg.sigma;
  sc.m_grid = cfg.m_grid;
  sc.trials = cfg.trials;
  sc.sampler.strategy = PairStrategy::near_antipodal;
  sc.sampler.count = cfg.pairs;
  sc.sampler.epsilon = cfg.epsilon;
  sc.seed = cfg.seed;
  sc.threads = cfg.threads;
  const Metric metrics[] = {Metric::geodesic, Metric::distorted};
  auto both = detail::run_sweep(sc, metrics);

  FloorReport report;
  report.floor = antipodal_gap(NoiseModel{cfg.sigma});
  report.floor_respected = true;
  for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
    FloorPoint fp{cfg.m_grid[i], std::move(both[0][i]), std::move(both[1][i])};
    if (fp.geodesic.mean_sup_dev < report.floor - cfg.slack) report.floor_respected = false;
    report.points.push_back(std::move(fp));
  }
  const auto& last = report.points.back();
  report.plateau_reached = std::abs(last.geodesic.mean_sup_dev - report.floor) <= cfg.slack;
  report.distorted_small = last.distorted.mean_sup_dev <= cfg.distorted_max;
  return report;
}

} // namespace onebit

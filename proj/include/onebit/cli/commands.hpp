#pragma once

// Experiment subcommands. Each prepare_* reads and validates its whole
// configuration up front and returns a runner; nothing is sampled until the
// runner is invoked.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "onebit/cli/config.hpp"
#include "onebit/cli/csv.hpp"
#include "onebit/detail/parallel.hpp"
#include "onebit/embedding.hpp"
#include "onebit/geometry.hpp"
#include "onebit/ripcheck.hpp"
#include "onebit/stochastics.hpp"
#include "onebit/vctool.hpp"

namespace onebit::cli {

struct RunContext {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool dump_codes = false;
};

struct CommandOutcome {
  std::string csv;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json trial_seeds = nlohmann::json::array();
  /// False when a declared statistical or mathematical check failed.
  bool passed = true;
  std::vector<BitCode> codes;
};

using Runner = std::function<CommandOutcome(const RunContext&)>;

namespace detail {

inline nlohmann::json seed_record(std::uint64_t seed, std::uint64_t trial) {
  return {{"trial", trial}, {"seed", seed}, {"stream_id", trial}};
}

inline std::string join(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

inline std::string join(std::span<const std::size_t> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

inline std::vector<std::size_t> default_m_grid() {
  std::vector<std::size_t> g;
  for (std::size_t m = 256; m <= 16384; m *= 2) g.push_back(m);
  return g;
}

inline void validate_grid(const std::vector<std::size_t>& grid) {
  require(!grid.empty(), "m_grid must not be empty");
  require(grid.front() >= 1, "m_grid entries must be >= 1");
  for (std::size_t i = 1; i < grid.size(); ++i) require(grid[i] > grid[i - 1], "m_grid must be strictly ascending");
}

/// Unit x and y in R^n with <x,y> = rho (exactly x or -x at the endpoints).
inline std::pair<UnitVector, UnitVector> correlated_pair(RngStream& stream, std::size_t n, double rho) {
  auto x = UnitVector::normalized(gaussian_vector(stream, n));
  if (rho == 1.0) return {x, x};
  if (rho == -1.0) return {x, -x};
  auto z = gaussian_vector(stream, n);
  const double proj = x.dot(z);
  for (std::size_t j = 0; j < n; ++j) z[j] -= proj * x[j];
  auto zu = UnitVector::normalized(std::move(z));
  std::vector<double> y(n);
  const double perp = std::sqrt(1.0 - rho * rho);
  for (std::size_t j = 0; j < n; ++j) y[j] = rho * x[j] + perp * zu[j];
  return {std::move(x), UnitVector::normalized(std::move(y))};
}

} // namespace detail

// ---------------------------------------------------------------- metric-table

inline Runner prepare_metric_table(ConfigReader& cfg) {
  std::vector<double> default_rho;
  for (int i = 0; i <= 20; ++i) default_rho.push_back((i - 10) / 10.0);
  const auto rhos = cfg.get<std::vector<double>>("rho", default_rho);
  const auto sigmas = cfg.get<std::vector<double>>("sigma", {0.0, 0.1, 0.5, 1.0, 2.0});
  require(!rhos.empty() && !sigmas.empty(), "rho and sigma grids must be non-empty");
  for (double r : rhos) require(std::abs(r) <= 1.0, "rho values must lie in [-1,1]");
  for (double s : sigmas) require(s >= 0.0 && std::isfinite(s), "sigma values must be finite and >= 0");

  return [=](const RunContext&) {
    CommandOutcome out;
    CsvTable table{"rho", "sigma", "d", "d_sigma", "gap", "antipodal_gap"};
    std::size_t violations = 0;
    for (double sigma : sigmas) {
      const NoiseModel noise{sigma};
      const double floor = antipodal_gap(noise);
      for (double rho : rhos) {
        const double d = disagreement_probability(rho);
        const double ds = noise.noiseless() ? d : disagreement_probability(distorted_correlation(rho, noise));
        const double gap = d - ds;
        if (gap > floor + 1e-12 || gap < -1e-12) ++violations;
        table.row({rho, sigma, d, ds, gap, floor});
      }
    }
    out.csv = table.str();
    out.summary = {{"rows", table.rows()}, {"gap_violations", violations}};
    out.passed = violations == 0;
    return out;
  };
}

// -------------------------------------------------------------------- embed-mc

inline Runner prepare_embed_mc(ConfigReader& cfg) {
  const auto n = cfg.get<std::size_t>("n", 8);
  const auto rho = cfg.get<double>("rho", 0.0);
  const auto sigma = cfg.get<double>("sigma", 0.0);
  const auto m = cfg.get<std::size_t>("m", 100000);
  const auto trials = cfg.get<std::size_t>("trials", 20);
  const auto z = cfg.get<double>("z", 4.0);
  const auto min_pass_rate = cfg.get<double>("min_pass_rate", 0.95);
  require(n >= 2, "n must be >= 2");
  require(std::abs(rho) <= 1.0, "rho must lie in [-1,1]");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be finite and >= 0");
  require(m >= 1, "m must be >= 1");
  require(trials >= 1, "trials must be >= 1");
  require(z > 0.0, "z must be positive");
  require(min_pass_rate >= 0.0 && min_pass_rate <= 1.0, "min_pass_rate must lie in [0,1]");

  return [=](const RunContext& ctx) {
    const NoiseModel noise{sigma};
    const double predicted = disagreement_probability(distorted_correlation(rho, noise));
    const Interval band = binomial_band(predicted, m, z);
    struct TrialResult {
      double hamming;
      BitCode cx, cy;
    };
    std::vector<TrialResult> results(trials);
    onebit::detail::parallel_for(trials, ctx.threads, [&](std::size_t t) {
      RngStream stream(ctx.seed, t);
      auto [x, y] = detail::correlated_pair(stream, n, rho);
      const auto A = SensingMatrix::gaussian(stream, m, n);
      std::optional<NoiseVector> eta;
      if (!noise.noiseless()) eta = NoiseVector::sample(stream, m, noise);
      BitCode cx = eta ? embed_noisy(A, *eta, x) : embed(A, x);
      BitCode cy = eta ? embed_noisy(A, *eta, y) : embed(A, y);
      results[t] = {hamming(cx, cy), std::move(cx), std::move(cy)};
    });

    CommandOutcome out;
    CsvTable table{"trial", "empirical_hamming", "predicted", "ci_lo", "ci_hi", "inside_ci"};
    std::size_t inside = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const bool ok = band.contains(results[t].hamming);
      inside += ok;
      table.row({std::uint64_t{t}, results[t].hamming, predicted, band.lo, band.hi, ok});
      out.trial_seeds.push_back(detail::seed_record(ctx.seed, t));
      if (ctx.dump_codes) {
        out.codes.push_back(std::move(results[t].cx));
        out.codes.push_back(std::move(results[t].cy));
      }
    }
    const double pass_rate = static_cast<double>(inside) / static_cast<double>(trials);
    out.csv = table.str();
    out.summary = {{"predicted", predicted}, {"inside", inside}, {"trials", trials}, {"pass_rate", pass_rate}};
    out.passed = pass_rate >= min_pass_rate;
    return out;
  };
}

// ------------------------------------------------------------------- rip-sweep

inline Runner prepare_rip_sweep(ConfigReader& cfg) {
  SweepConfig sc;
  sc.n = cfg.get<std::size_t>("n", 128);
  sc.s = cfg.get<std::size_t>("s", 4);
  sc.sigma = cfg.get<double>("sigma", 0.0);
  sc.m_grid = cfg.get<std::vector<std::size_t>>("m_grid", detail::default_m_grid());
  sc.trials = cfg.get<std::size_t>("trials", 20);
  sc.sampler.count = cfg.get<std::size_t>("pairs", 500);
  const auto strategy = cfg.get<std::string>("strategy", "mixed");
  sc.sampler.epsilon = cfg.get<double>("epsilon", 0.05);
  const auto metric = cfg.get<std::string>("metric", "distorted");
  const auto band = cfg.get<std::vector<double>>("slope_band", {-0.6, -0.4});
  const auto min_r2 = cfg.get<double>("min_r_squared", 0.95);

  const auto st = parse_strategy(strategy);
  require(st.has_value(), "unknown strategy '" + strategy + "'");
  sc.sampler.strategy = *st;
  require(metric == "distorted" || metric == "geodesic", "metric must be 'distorted' or 'geodesic'");
  sc.metric = metric == "geodesic" ? Metric::geodesic : Metric::distorted;
  require(band.size() == 2 && band[0] <= band[1], "slope_band must be [lo, hi]");
  require(min_r2 >= 0.0 && min_r2 <= 1.0, "min_r_squared must lie in [0,1]");
  require(sc.sigma >= 0.0 && std::isfinite(sc.sigma), "sigma must be finite and >= 0");
  detail::validate_grid(sc.m_grid);
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  return [=](const RunContext& ctx) {
    SweepConfig run = sc;
    run.seed = ctx.seed;
    run.threads = ctx.threads;
    const SweepResult result = sweep_m(run);

    CommandOutcome out;
    CsvTable table{"kind", "m", "trial", "sup_dev", "mean_dev", "q95_dev", "max_sup_dev", "slope", "r_squared"};
    for (const auto& p : result.points)
      for (std::size_t t = 0; t < p.trials.size(); ++t) {
        const auto& r = p.trials[t];
        table.row({"trial", std::uint64_t{p.m}, std::uint64_t{t}, r.sup_dev, r.mean_dev, r.q95_dev, "", "", ""});
      }
    for (const auto& p : result.points)
      table.row({"aggregate", std::uint64_t{p.m}, "", p.mean_sup_dev, p.mean_mean_dev, p.mean_q95_dev, p.max_sup_dev,
                 "", ""});
    bool ok = true;
    if (result.fit) {
      const auto& f = *result.fit;
      table.row({"fit", "", "", "", "", "", "", f.slope, f.r_squared});
      ok = f.slope >= band[0] && f.slope <= band[1] && f.r_squared >= min_r2;
      out.summary = {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}};
    }
    bool antipode_ok = true;
    for (const auto& p : result.points)
      for (const auto& r : p.trials)
        if (r.antipode_identity && !*r.antipode_identity) antipode_ok = false;
    out.summary["antipode_identity"] = antipode_ok;
    out.summary["sup_dev_is_lower_bound"] = true;
    for (std::size_t t = 0; t < run.trials; ++t) out.trial_seeds.push_back(detail::seed_record(ctx.seed, t));
    out.csv = table.str();
    out.passed = ok && antipode_ok;
    return out;
  };
}

// ----------------------------------------------------------------- noisy-floor

inline Runner prepare_noisy_floor(ConfigReader& cfg) {
  FloorConfig fc;
  fc.n = cfg.get<std::size_t>("n", 16);
  fc.s = cfg.get<std::size_t>("s", 4);
  fc.sigma = cfg.get<double>("sigma", 1.0);
  fc.m_grid = cfg.get<std::vector<std::size_t>>("m_grid", {1024, 4096, 16384});
  fc.trials = cfg.get<std::size_t>("trials", 5);
  fc.pairs = cfg.get<std::size_t>("pairs", 200);
  fc.epsilon = cfg.get<double>("epsilon", 0.01);
  fc.slack = cfg.get<double>("slack", 0.02);
  fc.distorted_max = cfg.get<double>("distorted_max", 0.05);
  require(fc.sigma > 0.0 && std::isfinite(fc.sigma), "sigma must be > 0 (use rip-sweep for sigma = 0)");
  require(fc.s >= 1 && fc.s <= fc.n, "need 1 <= s <= n");
  require(fc.trials >= 1 && fc.pairs >= 1, "trials and pairs must be >= 1");
  require(fc.epsilon > 0.0 && fc.epsilon < 1.0, "epsilon must lie in (0,1)");
  require(fc.slack >= 0.0 && fc.distorted_max >= 0.0, "slack and distorted_max must be >= 0");
  detail::validate_grid(fc.m_grid);

  return [=](const RunContext& ctx) {
    FloorConfig run = fc;
    run.seed = ctx.seed;
    run.threads = ctx.threads;
    const FloorReport report = geodesic_floor_check(run);

    CommandOutcome out;
    CsvTable table{"kind", "m", "trial", "geodesic_sup_dev", "distorted_sup_dev", "antipodal_gap"};
    for (const auto& p : report.points)
      for (std::size_t t = 0; t < p.geodesic.trials.size(); ++t)
        table.row({"trial", std::uint64_t{p.m}, std::uint64_t{t}, p.geodesic.trials[t].sup_dev,
                   p.distorted.trials[t].sup_dev, report.floor});
    for (const auto& p : report.points)
      table.row({"aggregate", std::uint64_t{p.m}, "", p.geodesic.mean_sup_dev, p.distorted.mean_sup_dev, report.floor});
    for (std::size_t t = 0; t < run.trials; ++t) out.trial_seeds.push_back(detail::seed_record(ctx.seed, t));
    out.csv = table.str();
    out.summary = {{"floor", report.floor},
                   {"floor_respected", report.floor_respected},
                   {"plateau_reached", report.plateau_reached},
                   {"distorted_small", report.distorted_small},
                   {"final_geodesic_sup_dev", report.points.back().geodesic.mean_sup_dev},
                   {"final_distorted_sup_dev", report.points.back().distorted.mean_sup_dev}};
    out.passed = report.passed();
    return out;
  };
}

// -------------------------------------------------------------------------- vc

namespace detail {

inline Runner prepare_vc_basis(ConfigReader& cfg) {
  const auto s_max = cfg.get<std::size_t>("s_max", 6);
  require(s_max >= 1 && s_max <= 12, "s_max must lie in [1,12]");
  return [=](const RunContext&) {
    CommandOutcome out;
    CsvTable table{"s", "shattered", "achieved", "expected", "mask", "support", "direction", "requantized"};
    bool ok = true;
    for (std::size_t s = 1; s <= s_max; ++s) {
      const auto points = PointSet::standard_basis(s, s);
      const auto r = is_shattered(points, s, SetClass::hemisphere);
      ok = ok && r.shattered;
      for (const auto& [mask, w] : r.witnesses) {
        bool requant = true;
        for (std::size_t i = 0; i < points.size(); ++i)
          requant = requant && sign_quantize(w.direction.dot(points[i].coords())) == static_cast<bool>((mask >> i) & 1u);
        ok = ok && requant;
        table.row({std::uint64_t{s}, r.shattered, std::uint64_t{r.achieved_count}, std::uint64_t{1} << s,
                   std::uint64_t{mask}, join(w.support), join(w.direction.coords()), requant});
      }
    }
    out.csv = table.str();
    out.summary = {{"all_shattered", ok}};
    out.passed = ok;
    return out;
  };
}

inline Runner prepare_vc_random_sets(ConfigReader& cfg) {
  const auto s_values = cfg.get<std::vector<std::size_t>>("s_values", {2, 3});
  const auto probes = cfg.get<std::size_t>("probes", 1000);
  require(!s_values.empty(), "s_values must be non-empty");
  for (auto s : s_values) require(s >= 1 && s <= 10, "s_values entries must lie in [1,10]");
  require(probes >= 1, "probes must be >= 1");
  return [=](const RunContext& ctx) {
    CommandOutcome out;
    CsvTable table{"s", "probe", "shattered", "achieved"};
    std::size_t shattered = 0;
    for (std::size_t si = 0; si < s_values.size(); ++si) {
      const std::size_t s = s_values[si];
      RngStream stream(ctx.seed, si);
      out.trial_seeds.push_back(seed_record(ctx.seed, si));
      for (std::size_t p = 0; p < probes; ++p) {
        std::vector<UnitVector> pts;
        for (std::size_t i = 0; i <= s; ++i) pts.push_back(UnitVector::normalized(gaussian_vector(stream, s)));
        const auto r = is_shattered(PointSet(std::move(pts)), s, SetClass::hemisphere);
        shattered += r.shattered;
        table.row({std::uint64_t{s}, std::uint64_t{p}, r.shattered, std::uint64_t{r.achieved_count}});
      }
    }
    out.csv = table.str();
    out.summary = {{"shattered", shattered}};
    out.passed = shattered == 0;
    return out;
  };
}

inline Runner prepare_vc_search(ConfigReader& cfg) {
  const auto n_max = cfg.get<std::size_t>("n_max", 12);
  const auto s_max = cfg.get<std::size_t>("s_max", 4);
  const auto budget = cfg.get<std::size_t>("budget", 10000);
  const auto patience = cfg.get<std::size_t>("patience", 32);
  const auto cls_name = cfg.get<std::string>("class", "hemisphere");
  require(n_max >= 1 && n_max <= 20, "n_max must lie in [1,20]");
  require(s_max >= 1 && s_max <= n_max, "s_max must lie in [1,n_max]");
  require(budget >= 1 && patience >= 1, "budget and patience must be >= 1");
  require(cls_name == "hemisphere" || cls_name == "wedge", "class must be 'hemisphere' or 'wedge'");
  const SetClass cls = cls_name == "wedge" ? SetClass::wedge : SetClass::hemisphere;
  return [=](const RunContext& ctx) {
    std::vector<std::pair<std::size_t, std::size_t>> grid;
    for (std::size_t s = 1; s <= s_max; ++s)
      for (std::size_t n = s; n <= n_max; ++n) grid.emplace_back(n, s);
    std::vector<VcSearchResult> results(grid.size());
    onebit::detail::parallel_for(grid.size(), ctx.threads, [&](std::size_t i) {
      RngStream stream(ctx.seed, i);
      results[i] = vc_lower_bound_search(grid[i].first, grid[i].second, cls, budget, stream, {}, patience);
    });
    CommandOutcome out;
    CsvTable table{"n", "s", "lower_bound", "upper_bound", "within_bound", "tests_used", "witness_points"};
    bool ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto [n, s] = grid[i];
      const double upper = vc_upper_bound(n, s);
      const auto& r = results[i];
      const bool within = static_cast<double>(r.size) <= upper && (r.size == 0 || r.result.shattered);
      ok = ok && within;
      std::string pts;
      if (r.best)
        for (std::size_t k = 0; k < r.best->size(); ++k) {
          if (k) pts += '|';
          pts += join((*r.best)[k].coords());
        }
      table.row({std::uint64_t{n}, std::uint64_t{s}, std::uint64_t{r.size}, upper, within,
                 std::uint64_t{r.tests_used}, pts});
      out.trial_seeds.push_back(seed_record(ctx.seed, i));
    }
    out.csv = table.str();
    out.summary = {{"configs", grid.size()}, {"all_within_bound", ok}};
    out.passed = ok;
    return out;
  };
}

inline Runner prepare_vc_lambert(ConfigReader& cfg) {
  const auto points = cfg.get<std::size_t>("points", 10000);
  require(points >= 2, "points must be >= 2");
  return [=](const RunContext&) {
    CommandOutcome out;
    CsvTable table{"x", "w", "relative_residual", "log_x2", "ok"};
    const double a = -std::exp(-1.0) + 1e-6, b = -1e-6;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < points; ++i) {
      const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
      const double w = lambert_w_minus1(x);
      const double residual = std::abs(w * std::exp(w) - x) / std::abs(x);
      const double lx2 = std::log(x * x);
      const bool ok = residual <= 1e-12 && w >= lx2 && w <= -1.0;
      failures += !ok;
      table.row({x, w, residual, lx2, ok});
    }
    out.csv = table.str();
    out.summary = {{"points", points}, {"failures", failures}};
    out.passed = failures == 0;
    return out;
  };
}

inline Runner prepare_vc_packing(ConfigReader& cfg) {
  const auto n = cfg.get<std::size_t>("n", 8);
  const auto s = cfg.get<std::size_t>("s", 2);
  const auto sigma = cfg.get<double>("sigma", 0.0);
  const auto ts = cfg.get<std::vector<double>>("t", {0.5, 0.3, 0.2});
  const auto candidates = cfg.get<std::size_t>("candidates", 2000);
  const auto cloud = cfg.get<std::size_t>("empirical_points", 4096);
  require(s >= 1 && s <= n, "need 1 <= s <= n");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be finite and >= 0");
  require(!ts.empty(), "t grid must be non-empty");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    require(ts[i] > 0.0 && ts[i] < 1.0, "t values must lie in (0,1)");
    if (i) require(ts[i] < ts[i - 1], "t grid must be strictly decreasing");
  }
  require(candidates >= 1 && cloud >= 1, "candidates and empirical_points must be >= 1");
  return [=](const RunContext& ctx) {
    const double v_hat = vc_upper_bound(n, s);
    CommandOutcome out;
    CsvTable table{"t", "count", "log_count", "bound_log", "offset"};
    std::vector<std::size_t> counts;
    double constant = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      RngStream stream(ctx.seed, 0);
      const std::size_t count = packing_estimate(n, s, sigma, ts[i], candidates, cloud, stream);
      const double log_count = std::log(static_cast<double>(count));
      const double bound_log = (v_hat + 1.0) * std::log(1.0 / (ts[i] * ts[i]));
      const double offset = log_count - bound_log;
      // The additive constant is fitted on the first (coarsest) t.
      if (i == 0) constant = offset;
      ok = ok && offset <= constant + 1e-12;
      if (i && count < counts.back()) ok = false;
      counts.push_back(count);
      table.row({ts[i], std::uint64_t{count}, log_count, bound_log, offset});
    }
    out.trial_seeds.push_back(seed_record(ctx.seed, 0));
    out.csv = table.str();
    out.summary = {{"vc_upper_bound", v_hat}, {"fitted_constant", constant}, {"consistent", ok}};
    out.passed = ok;
    return out;
  };
}

} // namespace detail

inline Runner prepare_vc(ConfigReader& cfg) {
  const auto mode = cfg.get<std::string>("mode", "basis");
  if (mode == "basis") return detail::prepare_vc_basis(cfg);
  if (mode == "random-sets") return detail::prepare_vc_random_sets(cfg);
  if (mode == "search") return detail::prepare_vc_search(cfg);
  if (mode == "lambert") return detail::prepare_vc_lambert(cfg);
  if (mode == "packing") return detail::prepare_vc_packing(cfg);
  throw ConfigError("config: unknown vc mode '" + mode + "'");
}

} // namespace onebit::cli

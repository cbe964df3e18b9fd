#include "softedge/experiments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "softedge/eigen.hpp"
#include "softedge/ensembles.hpp"
#include "softedge/mc.hpp"

namespace softedge {

namespace {

constexpr std::uint64_t kTagTail = 1;
constexpr std::uint64_t kTagVariance = 2;
constexpr std::uint64_t kTagCenter = 3;

// Extremal eigenvalue of one freshly sampled ensemble draw.
double sample_extremal(const TailQuery& q, std::uint64_t tag,
                       std::uint64_t subtag, std::int64_t index) {
  RngStream stream = make_stream(q.seed, tag, subtag,
                                 static_cast<std::uint64_t>(index));
  if (q.ensemble == Ensemble::hermite) {
    const HermiteSample s = sample_hermite({q.n, q.beta}, stream);
    return lambda_max(s.matrix()).value;
  }
  const LaguerreSample s = sample_laguerre({q.n, q.kappa, q.beta}, stream);
  const SymTridiagonal t = laguerre_matrix(s);
  return q.extremal == Extremal::max ? lambda_max(t).value : lambda_min(t).value;
}

TailEstimate finish_estimate(std::int64_t hits, std::int64_t samples) {
  TailEstimate est;
  est.hits = hits;
  est.samples = samples;
  est.p_hat = static_cast<double>(hits) / static_cast<double>(samples);
  const BinomialInterval ci = clopper_pearson(hits, samples);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

}  // namespace

void validate(const TailQuery& q) {
  if (q.n < 1) throw std::invalid_argument("tail query: n must be >= 1");
  if (!(q.beta > 0.0)) throw std::invalid_argument("tail query: beta must be > 0");
  if (!(q.eps > 0.0 && q.eps <= 1.0))
    throw std::invalid_argument("tail query: eps must be in (0,1]");
  if (q.samples < 1) throw std::invalid_argument("tail query: samples must be >= 1");
  if (q.ensemble == Ensemble::laguerre) {
    if (!(q.kappa > static_cast<double>(q.n) - 1.0))
      throw std::invalid_argument("tail query: kappa must exceed n-1");
  }
  if (q.extremal == Extremal::min) {
    if (q.ensemble != Ensemble::laguerre || q.side != Side::lower)
      throw std::invalid_argument(
          "tail query: extremal=min is supported only for laguerre lower deviations");
  }
}

double tail_threshold(const TailQuery& q) {
  const double sign = (q.side == Side::upper) ? 1.0 : -1.0;
  if (q.ensemble == Ensemble::hermite)
    return 2.0 * std::sqrt(static_cast<double>(q.n)) * (1.0 + sign * q.eps);
  const double rk = std::sqrt(q.kappa);
  const double rn = std::sqrt(static_cast<double>(q.n));
  if (q.extremal == Extremal::max)
    return (rk + rn) * (rk + rn) * (1.0 + sign * q.eps);
  return (rk - rn) * (rk - rn) * (1.0 - q.eps);
}

double small_deviation_window(const TailQuery& q) {
  if (q.ensemble == Ensemble::hermite) return 1.0;
  const double ratio = static_cast<double>(q.n) / q.kappa;
  if (q.extremal == Extremal::max) return std::min(1.0, std::sqrt(ratio));
  // lambda_min: full window in the soft-edge regime kappa >= 2n, otherwise
  // the alpha-dependent shrink.
  if (q.kappa >= 2.0 * static_cast<double>(q.n)) return 1.0;
  const double alpha = 1.0 - std::sqrt(ratio);
  const double shrink = std::min(std::pow(alpha, 14.0),
                                 alpha * alpha * std::pow(static_cast<double>(q.n), -0.4));
  return std::min(1.0, std::sqrt(ratio) * shrink);
}

std::vector<SweepPoint> estimate_tail_sweep(const TailQuery& base,
                                            std::span<const double> eps_grid,
                                            bool enforce_window) {
  if (eps_grid.empty())
    throw std::invalid_argument("tail sweep: empty eps grid");
  std::vector<double> thresholds;
  thresholds.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    TailQuery q = base;
    q.eps = eps;
    validate(q);
    if (enforce_window && eps > small_deviation_window(q))
      throw std::invalid_argument(
          "tail sweep: eps outside the small-deviation window");
    thresholds.push_back(tail_threshold(q));
  }

  const std::int64_t g = static_cast<std::int64_t>(eps_grid.size());
  const std::int64_t blocks = block_count(base.samples);
  std::vector<std::int64_t> partial(static_cast<size_t>(blocks * g), 0);

  for_each_block(base.samples, base.workers,
                 [&](std::int64_t b, std::int64_t begin, std::int64_t end) {
                   std::int64_t* row = partial.data() + b * g;
                   for (std::int64_t i = begin; i < end; ++i) {
                     const double lam = sample_extremal(base, kTagTail, 0, i);
                     for (std::int64_t j = 0; j < g; ++j) {
                       const bool hit = (base.side == Side::upper)
                                            ? lam >= thresholds[j]
                                            : lam <= thresholds[j];
                       row[j] += hit;
                     }
                   }
                 });

  std::vector<SweepPoint> out(eps_grid.size());
  for (std::int64_t j = 0; j < g; ++j) {
    std::int64_t hits = 0;
    for (std::int64_t b = 0; b < blocks; ++b) hits += partial[b * g + j];
    out[j].eps = eps_grid[j];
    out[j].estimate = finish_estimate(hits, base.samples);
  }
  return out;
}

TailEstimate estimate_tail(const TailQuery& q) {
  validate(q);
  const double grid[1] = {q.eps};
  return estimate_tail_sweep(q, grid).front().estimate;
}

FitReport fit_exponent(std::span<const SweepPoint> estimates,
                       double expected_power) {
  std::vector<double> x, y;
  std::int64_t excluded = 0;
  for (const SweepPoint& pt : estimates) {
    const TailEstimate& e = pt.estimate;
    if (e.hits < 10 || e.hits >= e.samples) {
      ++excluded;
      continue;
    }
    x.push_back(std::log(pt.eps));
    y.push_back(std::log(-std::log(e.p_hat)));
  }
  if (x.size() < 3)
    throw FitError("fit_exponent: fewer than 3 usable points (hits >= 10)");
  const LineFit lf = least_squares_line(x, y);
  FitReport rep;
  rep.slope = lf.slope;
  rep.intercept = lf.intercept;
  rep.residual_rms = lf.residual_rms;
  rep.points_used = static_cast<std::int64_t>(x.size());
  rep.points_excluded = excluded;
  rep.expected_power = expected_power;
  return rep;
}

VarianceScan variance_scan(std::span<const std::int64_t> n_grid, double beta,
                           std::int64_t samples, std::uint64_t seed,
                           Ensemble ensemble, double kappa_ratio, int workers) {
  if (n_grid.size() < 3)
    throw std::invalid_argument("variance_scan: need at least 3 grid values");
  for (size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] < n_grid[i - 1])
      throw std::invalid_argument("variance_scan: n grid must be ascending");
  if (samples < 100)
    throw std::invalid_argument("variance_scan: fewer than 100 samples");
  if (ensemble == Ensemble::laguerre && !(kappa_ratio > 0.0))
    throw std::invalid_argument("variance_scan: laguerre requires kappa_ratio > 0");

  VarianceScan scan;
  std::vector<double> xs, ys;
  std::vector<double> values(static_cast<size_t>(samples));
  for (size_t gi = 0; gi < n_grid.size(); ++gi) {
    TailQuery q;
    q.ensemble = ensemble;
    q.n = n_grid[gi];
    q.beta = beta;
    q.kappa = ensemble == Ensemble::laguerre
                  ? kappa_ratio * static_cast<double>(n_grid[gi])
                  : 0.0;
    q.extremal = Extremal::max;
    q.seed = seed;
    q.workers = workers;
    if (ensemble == Ensemble::laguerre)
      validate(LaguerreParams{q.n, q.kappa, q.beta});

    for_each_block(samples, workers,
                   [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                     for (std::int64_t i = begin; i < end; ++i)
                       values[static_cast<size_t>(i)] = sample_extremal(
                           q, kTagVariance, static_cast<std::uint64_t>(gi), i);
                   });

    KahanSum mean_acc;
    for (double v : values) mean_acc.add(v);
    const double mean = mean_acc.value() / static_cast<double>(samples);
    KahanSum var_acc;
    for (double v : values) var_acc.add((v - mean) * (v - mean));
    const double variance = var_acc.value() / static_cast<double>(samples - 1);

    scan.points.push_back({n_grid[gi], mean, variance, samples});
    xs.push_back(std::log(static_cast<double>(n_grid[gi])));
    const double normalized =
        ensemble == Ensemble::laguerre ? variance / q.kappa : variance;
    ys.push_back(std::log(normalized));
  }
  const LineFit lf = least_squares_line(xs, ys);
  scan.fit = {lf.slope, lf.intercept, lf.residual_rms,
              static_cast<std::int64_t>(xs.size()), 0, -1.0 / 3.0};
  return scan;
}

std::vector<RatioPoint> deviation_ratios(Side side, std::int64_t n, double beta,
                                         std::span<const SweepPoint> estimates) {
  std::vector<RatioPoint> out;
  out.reserve(estimates.size());
  for (const SweepPoint& pt : estimates) {
    RatioPoint rp;
    rp.eps = pt.eps;
    rp.hits = pt.estimate.hits;
    rp.flagged = pt.estimate.hits < 10;
    if (!rp.flagged) {
      const double nl = -std::log(pt.estimate.p_hat);
      const double nd = static_cast<double>(n);
      const double denom = (side == Side::upper)
                               ? beta * nd * std::pow(pt.eps, 1.5)
                               : beta * nd * nd * std::pow(pt.eps, 3.0);
      rp.ratio = nl / denom;
    } else {
      rp.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(rp);
  }
  return out;
}

std::vector<RatioPoint> lower_bound_ratio(Side side, std::int64_t n, double beta,
                                          std::span<const double> eps_grid,
                                          std::int64_t samples,
                                          std::uint64_t seed, int workers) {
  TailQuery q;
  q.ensemble = Ensemble::hermite;
  q.side = side;
  q.n = n;
  q.beta = beta;
  q.samples = samples;
  q.seed = seed;
  q.workers = workers;
  const std::vector<SweepPoint> sweep = estimate_tail_sweep(q, eps_grid);
  return deviation_ratios(side, n, beta, sweep);
}

std::vector<CenterPoint> tw_center_stability(std::span<const std::int64_t> n_grid,
                                             double beta, std::int64_t samples,
                                             std::uint64_t seed, int workers) {
  if (n_grid.size() < 2)
    throw std::invalid_argument("tw_center_stability: need at least 2 grid values");
  if (samples < 2)
    throw std::invalid_argument("tw_center_stability: need at least 2 samples");
  std::vector<CenterPoint> out;
  std::vector<double> values(static_cast<size_t>(samples));
  for (size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::int64_t n = n_grid[gi];
    TailQuery q;
    q.ensemble = Ensemble::hermite;
    q.n = n;
    q.beta = beta;
    q.seed = seed;
    const double scale = std::pow(static_cast<double>(n), 1.0 / 6.0);
    const double center = 2.0 * std::sqrt(static_cast<double>(n));
    for_each_block(samples, workers,
                   [&](std::int64_t, std::int64_t begin, std::int64_t end) {
                     for (std::int64_t i = begin; i < end; ++i)
                       values[static_cast<size_t>(i)] =
                           scale * (sample_extremal(q, kTagCenter,
                                                    static_cast<std::uint64_t>(gi), i) -
                                    center);
                   });
    KahanSum mean_acc;
    for (double v : values) mean_acc.add(v);
    const double mean = mean_acc.value() / static_cast<double>(samples);
    KahanSum var_acc;
    for (double v : values) var_acc.add((v - mean) * (v - mean));
    const double var = var_acc.value() / static_cast<double>(samples - 1);
    out.push_back({n, mean, std::sqrt(var / static_cast<double>(samples))});
  }
  return out;
}

}  // namespace softedge

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "softedge/stats.hpp"

namespace softedge {

/// Fixed default seed: runs are reproducible unless the caller asks otherwise.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED5EED;

enum class Ensemble { hermite, laguerre };
enum class Side { upper, lower };
enum class Extremal { max, min };

struct TailQuery {
  Ensemble ensemble = Ensemble::hermite;
  Side side = Side::upper;
  Extremal extremal = Extremal::max;
  std::int64_t n = 0;
  double beta = 0.0;
  double kappa = 0.0;  // laguerre only
  double eps = 0.0;    // in (0, 1]
  std::int64_t samples = 0;
  std::uint64_t seed = kDefaultSeed;
  int workers = 0;  // 0 = hardware concurrency
};

/// Throws std::invalid_argument on any violated precondition. The minimal
/// eigenvalue is supported only for Laguerre lower deviations.
void validate(const TailQuery& q);

/// Deviation threshold of the query:
///   hermite max:   2 sqrt(n) (1 +- eps)
///   laguerre max:  (sqrt(kappa)+sqrt(n))^2 (1 +- eps)
///   laguerre min:  (sqrt(kappa)-sqrt(n))^2 (1 - eps)
double tail_threshold(const TailQuery& q);

struct TailEstimate {
  std::int64_t hits = 0;
  std::int64_t samples = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;   // exact 95% binomial bounds
  double ci_high = 1.0;
};

/// Monte Carlo tail probability with exact confidence interval. One stream
/// per sample index; identical (query, seed) reproduce identical hits for
/// any worker count.
TailEstimate estimate_tail(const TailQuery& q);

struct SweepPoint {
  double eps = 0.0;
  TailEstimate estimate;
};

/// Largest eps for which the eps^{3/2}-shape fits are meaningful:
/// sqrt(n/kappa) for Laguerre lambda_max, 1 for Hermite and for the
/// kappa >= 2n soft-edge lambda_min regime; otherwise the lambda_min window
/// shrinks to sqrt(n/kappa) * min(alpha^14, alpha^2 n^{-2/5}).
double small_deviation_window(const TailQuery& q);

/// Tail estimates over an eps grid with the per-sample eigenvalues shared
/// across thresholds (so monotonicity in eps holds exactly per run). Each
/// point matches estimate_tail at the same (query, seed). With
/// enforce_window, grid points beyond small_deviation_window are rejected.
std::vector<SweepPoint> estimate_tail_sweep(const TailQuery& base,
                                            std::span<const double> eps_grid,
                                            bool enforce_window = false);

struct FitReport {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  std::int64_t points_used = 0;
  std::int64_t points_excluded = 0;
  double expected_power = 0.0;  // echo of the target shape
};

/// Least squares of log(-log p_hat) on log eps. Points with hits < 10 or
/// degenerate p_hat are excluded; fewer than 3 usable points is a FitError.
FitReport fit_exponent(std::span<const SweepPoint> estimates,
                       double expected_power);

struct VariancePoint {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::int64_t samples = 0;
};

struct VarianceScan {
  std::vector<VariancePoint> points;
  FitReport fit;  // log Var (Hermite) or log(Var/kappa) (Laguerre) vs log n
};

/// Variance of lambda_max per n, with the log-log fit against the n^{-1/3}
/// scaling. kappa_ratio sets kappa = ratio * n for the Laguerre ensemble.
VarianceScan variance_scan(std::span<const std::int64_t> n_grid, double beta,
                           std::int64_t samples, std::uint64_t seed,
                           Ensemble ensemble, double kappa_ratio = 0.0,
                           int workers = 0);

struct RatioPoint {
  double eps = 0.0;
  double ratio = 0.0;  // -log(p_hat) / (beta n eps^{3/2})  or  / (beta n^2 eps^3)
  std::int64_t hits = 0;
  bool flagged = false;  // hits < 10: ratio not usable
};

/// Ratio computation on existing estimates: -log(p_hat) over the predicted
/// rate, points with hits < 10 flagged.
std::vector<RatioPoint> deviation_ratios(Side side, std::int64_t n, double beta,
                                         std::span<const SweepPoint> estimates);

/// Hermite deviation-rate ratios across an eps grid; two-sided bounds
/// predict these stay within constant factors. Runs the same sweep as
/// estimate_tail at equal (parameters, seed).
std::vector<RatioPoint> lower_bound_ratio(Side side, std::int64_t n, double beta,
                                          std::span<const double> eps_grid,
                                          std::int64_t samples,
                                          std::uint64_t seed, int workers = 0);

struct CenterPoint {
  std::int64_t n = 0;
  double mean = 0.0;  // mean of n^{1/6} (lambda_max - 2 sqrt(n))
  double se = 0.0;
};

/// Per-n mean of the normalized Hermite edge statistic with standard errors.
std::vector<CenterPoint> tw_center_stability(std::span<const std::int64_t> n_grid,
                                             double beta, std::int64_t samples,
                                             std::uint64_t seed, int workers = 0);

}  // namespace softedge

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace softedge {

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
double inc_beta(double a, double b, double x);

/// Inverse of I_x(a, b) in x, by bisection.
double inv_inc_beta(double a, double b, double p);

struct BinomialInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Exact (Clopper-Pearson) two-sided binomial confidence interval.
/// hits = 0 and hits = samples use the closed-form boundary cases.
BinomialInterval clopper_pearson(std::int64_t hits, std::int64_t samples,
                                 double confidence = 0.95);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

/// Ordinary least squares y ~ intercept + slope * x.
/// Throws FitError for fewer than 2 points or degenerate x.
LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace softedge

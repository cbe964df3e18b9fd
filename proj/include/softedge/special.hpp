#pragma once

namespace softedge {

/// Natural log of the Gamma function for x > 0.
/// Relative accuracy better than 1e-13 over [1e-3, 1e8].
/// Throws std::domain_error for x <= 0 or non-finite x.
double log_gamma(double x);

/// E[chi_r] = sqrt(2) * Gamma((r+1)/2) / Gamma(r/2) for r > 0.
///
/// For r >= 1 the result satisfies sqrt(r - 1/2) <= mean_chi(r) <= sqrt(r),
/// and this holds for the returned doubles as well: large arguments are
/// evaluated through an asymptotic expansion of the Gamma ratio in extended
/// precision, which avoids the cancellation of the log-Gamma difference.
/// Throws std::domain_error for r <= 0.
double mean_chi(double r);

}  // namespace softedge

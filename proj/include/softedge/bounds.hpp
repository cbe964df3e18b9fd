#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "softedge/rng.hpp"

namespace softedge {

/// One verified inequality instance: pass means violation = lhs - rhs stays
/// under the check's tolerance (0 for closed forms, 1e-8 for quadrature,
/// 4 standard errors for Monte Carlo).
struct BoundReport {
  std::string label;
  double r1 = 0.0;
  double r2 = 0.0;  // unused entries stay 0
  double lambda = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double violation = 0.0;  // lhs - rhs
  double se = 0.0;         // Monte Carlo standard error, 0 otherwise
  enum class Method { quadrature, closed_form, monte_carlo } method =
      Method::closed_form;
};

/// E[exp(lambda chi_r)] by adaptive quadrature of the chi density on
/// [0, mean_chi(r) + 12 + 2|lambda|]; relative error <= 1e-9. Requires
/// r >= 1; |lambda| > 50 trips the divergence guard.
double chi_mgf_quadrature(double r, double lambda);

/// Checks E[exp(lambda chi)] <= exp(lambda E[chi] + lambda^2/2) on the grid
/// (all r >= 1, any real lambda).
std::vector<BoundReport> verify_lemma8(std::span<const double> r_grid,
                                       std::span<const double> lambda_grid);

/// E[exp(lambda chi_r^2)] = (1 - 2 lambda)^{-r/2}, lambda < 1/2.
double chi_square_mgf(double r, double lambda);

/// Checks chi_square_mgf(r, lambda) <= exp(r (lambda + 2 lambda^2)) on the
/// grid (lambda <= 1/4). Both sides closed form.
std::vector<BoundReport> verify_lemma10(std::span<const double> r_grid,
                                        std::span<const double> lambda_grid);

/// Monte Carlo check of the product mgf bound
///   E[exp(lambda (chi chit - E chi E chit))]
///     <= (1-lambda^2)^{-1/2} exp(lambda^2 [m1^2 + m2^2 + 2 lambda m1 m2]
///                                 / (2 (1-lambda^2)))
/// for independent chi_{r1}, chi_{r2}, r1, r2 >= 1, |lambda| < 1.
BoundReport verify_lemma11(double r1, double r2, double lambda,
                           std::int64_t samples, RngStream& stream);

/// Monte Carlo mgf checks of the centered Laguerre noise at position k:
///   Z, Ztilde against exp(2 lambda^2)  (lambda <= sqrt(beta kappa)/4),
///   Y against 2 exp(12 lambda^2)       (|lambda| <= sqrt(beta kappa)/(2 sqrt 2)).
/// Ztilde is skipped at k = 1 and Y is identically 0 at k = n.
std::vector<BoundReport> verify_zy_bounds(double kappa, std::int64_t n,
                                          double beta, std::int64_t k,
                                          std::span<const double> lambda_grid,
                                          std::int64_t samples,
                                          RngStream& stream);

struct UProfilePoint {
  double lambda = 0.0;
  double logmgf_over_lambda_sq = 0.0;
  double se = 0.0;
};

struct UProfile {
  std::vector<UProfilePoint> points;
  double var_u = 0.0;  // empirical Var(U_k), the sigma_k^2 estimate
};

/// Empirical sub-Gaussian profile of the difference-square noise U_k:
/// log E[exp(lambda U_k)] / lambda^2 per grid lambda, plus Var(U_k).
/// Grid lambdas must be nonzero with |lambda| <= sqrt(beta kappa)/8.
UProfile u_subgaussian_profile(double kappa, std::int64_t n, double beta,
                               std::int64_t k,
                               std::span<const double> lambda_grid,
                               std::int64_t samples, RngStream& stream);

}  // namespace softedge

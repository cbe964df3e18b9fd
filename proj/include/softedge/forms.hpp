#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "softedge/ensembles.hpp"

namespace softedge {

/// Shorthand sums used by every appraisal. Boundary convention throughout:
/// v_0 = v_{n+1} = 0, so grad_sq includes both v_1^2 and v_n^2.
struct VectorStats {
  double norm2_sq = 0.0;  // sum v_k^2
  double norm4_4 = 0.0;   // sum v_k^4
  double grad_sq = 0.0;   // sum_{k=0}^{n} (v_{k+1} - v_k)^2
  double kweight = 0.0;   // sum_{k=1}^{n} k v_k^2
};

VectorStats vector_stats(std::span<const double> v);

/// H(v) = v^T [H_beta - 2 sqrt(n) I] v, evaluated from the raw draws.
double hermite_form(const HermiteSample& s, std::span<const double> v);

/// H_c(v): centered off-diagonal noise and energy
/// -c sqrt(n) grad_sq - (c/sqrt(n)) kweight.
double hermite_form_c(const HermiteSample& s, std::span<const double> v, double c);

/// I(v) = sqrt(n) sum_{k=1}^{n-1} (v_{k+1}-v_k)^2 + (1/sqrt(n)) sum k v_k^2.
/// Interior gradient only (no boundary terms).
double energy_I(std::span<const double> v);

/// J(v) = sum E[chi_{beta(n-k)}/sqrt(beta)] (v_{k+1}-v_k)^2
///      + sum (sqrt(n) - E[chi_{beta(n-k)}/sqrt(beta)]) (v_k^2+v_{k+1}^2),
/// k = 1..n-1, expectations by mean_chi. Satisfies I/16 <= J <= 8 I for
/// beta >= 1.
double energy_J(std::span<const double> v, double beta);

/// L(v) = (1/sqrt(kappa)) v^T (L_beta - (sqrt(kappa)+sqrt(n))^2 I) v from the
/// raw chi draws (four-term expansion, no matrix assembly).
double laguerre_form(const LaguerreSample& s, std::span<const double> v);

/// Centered Laguerre noise variables. Indexing:
///   z[j]      = Z_{j+1},  j = 0..n-1
///   ztilde[j] = Zt_{j+2}, j = 0..n-2   (Zt_k defined for k = 2..n)
///   y[j]      = Y_{j+1},  j = 0..n-2
///   u[j]      = U_{j+1},  j = 0..n-1   (U_n uses the chitilde_0 = 0 convention)
struct LaguerreNoise {
  std::vector<double> z, ztilde, y, u;
};

LaguerreNoise laguerre_noise(const LaguerreSample& s);

/// L_c(v): the centered Z / Ztilde / Y noise plus the same energy as H_c.
double laguerre_form_c(const LaguerreSample& s, std::span<const double> v, double c);

/// lambda_k = E[chi_{beta(kappa-k+1)}] E[chi_{beta(n-k)}]/(beta sqrt(kappa)),
/// k = 1..n-1.
double laguerre_lambda_coeff(const LaguerreParams& p, std::int64_t k);

/// alpha = 1 - sqrt(n/kappa).
double laguerre_alpha(const LaguerreParams& p);

/// L'(v): negated noise, -sum lambda_k (v_{k+1}+v_k)^2, and drift
/// -(alpha^2/sqrt(n)) sum k v_k^2. Requires kappa >= n+1.
double laguerre_form_prime(const LaguerreSample& s, std::span<const double> v);

/// The noise part of L'(v) in its two algebraically equal groupings:
/// first  = (1/sqrt(beta)) [sum (-Z_k) v_k^2 + sum (-Zt_k) v_k^2
///                          + 2 sum (-Y_k) v_k v_{k+1}]
/// second = (1/sqrt(beta)) [sum (-U_k) v_k^2 + sum (-Zt_k)(v_k^2 - v_{k-1}^2)
///                          + 2 sum (-Y_k) v_k (v_{k+1} + v_k)]
double laguerre_prime_noise(const LaguerreSample& s, std::span<const double> v);
double laguerre_prime_noise_grouped(const LaguerreSample& s,
                                    std::span<const double> v);

/// Lemma-style summation by parts: returns (lhs, rhs) where
///   lhs = sum_{k=1}^{n} s_k t_k
///   rhs = (1/m) sum_{k=1}^{n} [S_{k+m-1} - S_{k-1}] t_k
///       + sum_{k=0}^{n} ((1/m) sum_{l=k}^{k+m-1} [S_l - S_k]) (t_{k+1}-t_k)
/// with S_0 = 0, s zero-extended past its length, t_0 = t_{n+1} = 0.
/// The identity lhs = rhs is exact for every integer m >= 1.
std::pair<double, double> sum_by_parts(std::span<const double> s,
                                       std::span<const double> t,
                                       std::int64_t m);

/// Windowed maximal partial-sum deviation
/// Delta_m(k) = max_{k+1 <= l <= k+m} |S_l - S_k| (s zero-padded).
double delta_m(std::span<const double> s, std::int64_t m, std::int64_t k);

/// Triangular test vectors. Supports are floored; an empty support is a
/// parameter error.
///   left hermite:   v_k = (k/(n e)) ^ (1 - k/(n e)),      k <= n e      [n e >= 1]
///   right hermite:  v_k = (sqrt(e) k) ^ (1 - sqrt(e) k),  k <= e^{-1/2} [n e^{3/2} >= 1]
///   left laguerre:  v_k = (d k/(n e)) ^ (1 - d k/(n e)),  k <= n e / d,
///                   d = sqrt(n/kappa)                     [e <= d, n e/d >= 1]
std::vector<double> test_vector_left_hermite(std::int64_t n, double eps);
std::vector<double> test_vector_right_hermite(std::int64_t n, double eps);
std::vector<double> test_vector_left_laguerre(std::int64_t n, double kappa,
                                              double eps);

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SandwichKind { hermite, laguerre };

struct SandwichGrid {
  std::vector<double> a_candidates;
  std::vector<double> b_candidates;
};

struct SandwichCalibration {
  double a = 0.0;  // smallest passing a
  double b = 0.0;  // largest passing b
  bool hermite_nominal_ok = false;  // (8, 1/16) held on every hermite trial
  std::int64_t trials = 0;
};

/// Random-trial calibration of the sandwich form_a(v) <= form(v) <= form_b(v)
/// (slack 1e-9 * scale per trial). Laguerre trials cycle kappa/n over
/// {1, 2, 8}. Throws CalibrationError when no grid point passes.
SandwichCalibration calibrate_sandwich(SandwichKind kind,
                                       const SandwichGrid& grid,
                                       std::int64_t sample_count,
                                       std::span<const std::int64_t> n_grid,
                                       std::span<const double> beta_grid,
                                       std::uint64_t seed);

}  // namespace softedge

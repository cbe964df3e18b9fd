#pragma once

#include <cstdint>
#include <vector>

#include "softedge/rng.hpp"
#include "softedge/tridiagonal.hpp"

namespace softedge {

// Index map used throughout: arrays are 0-based, model positions k = 1..n.
// Array slot j holds position k = j+1, so e.g. hermite chi[j] carries the
// parameter beta*(n-k) = beta*(n-1-j). Getting this one map right (and
// testing it) is most of the bookkeeping in these models.

struct HermiteParams {
  std::int64_t n = 0;
  double beta = 0.0;
};

struct LaguerreParams {
  std::int64_t n = 0;
  double kappa = 0.0;  // any real kappa > n-1
  double beta = 0.0;
};

void validate(const HermiteParams& p);   // n >= 1, beta > 0
void validate(const LaguerreParams& p);  // additionally kappa > n-1 (strict)

/// Raw draws of the Hermite tridiagonal model are retained: the quadratic
/// forms need centered chi values, which the assembled matrix cannot supply.
struct HermiteSample {
  HermiteParams params;
  std::vector<double> g;    // n entries, g[j] ~ N(0,2)
  std::vector<double> chi;  // n-1 entries, chi[j] ~ chi_{beta*(n-1-j)}

  /// diag_k = g_k / sqrt(beta), offdiag_k = chi_{beta(n-k)} / sqrt(beta).
  SymTridiagonal matrix() const;
};

HermiteSample sample_hermite(const HermiteParams& params, RngStream& stream);

struct LaguerreSample {
  LaguerreParams params;
  std::vector<double> chi;       // n entries,   chi[j] ~ chi_{beta*(kappa-j)}
  std::vector<double> chitilde;  // n-1 entries, chitilde[j] ~ chi_{beta*(n-1-j)}
};

LaguerreSample sample_laguerre(const LaguerreParams& params, RngStream& stream);

/// B B^T for the lower-bidiagonal B built from the sample:
///   diag_1 = chi_1^2/beta, diag_k = (chi_k^2 + chitilde_{k-1}^2)/beta,
///   offdiag_k = chi_k * chitilde_k / beta.
SymTridiagonal laguerre_matrix(const LaguerreSample& s);

}  // namespace softedge

#pragma once

#include <cstdint>
#include <vector>

#include "softedge/tridiagonal.hpp"

namespace softedge {

struct EigenResult {
  double value = 0.0;
  int iterations = 0;
  double bracket_width = 0.0;  // <= requested tolerance on success
};

/// Number of eigenvalues of t strictly below x (Sturm sequence count).
/// A vanishing pivot in the recurrence is replaced by a sign-preserving
/// tiny multiple of the matrix scale, so exact-tie query points stay exact
/// up to that perturbation.
std::int64_t sturm_count(const SymTridiagonal& t, double x);

/// Default bisection tolerance: 1e-10 * max(1, Gershgorin radius).
double default_tolerance(const SymTridiagonal& t);

/// Largest eigenvalue by Sturm bisection from the Gershgorin bracket.
/// |value - lambda_max(t)| <= tol. Throws std::invalid_argument on
/// non-finite entries or tol <= 0.
EigenResult lambda_max(const SymTridiagonal& t, double tol);
EigenResult lambda_max(const SymTridiagonal& t);

/// Smallest eigenvalue; mirror of lambda_max.
EigenResult lambda_min(const SymTridiagonal& t, double tol);
EigenResult lambda_min(const SymTridiagonal& t);

/// Full spectrum (ascending) by cyclic Jacobi rotations on the densified
/// matrix. Test oracle only: guarded to n <= 512.
std::vector<double> dense_eigen_oracle(const SymTridiagonal& t);

}  // namespace softedge

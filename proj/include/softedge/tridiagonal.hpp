#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace softedge {

/// Symmetric tridiagonal matrix: n diagonal entries, n-1 off-diagonal entries.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::int64_t n() const { return static_cast<std::int64_t>(diag.size()); }
};

/// Validating constructor: sizes must match (|offdiag| = |diag| - 1, n >= 1)
/// and all entries must be finite.
SymTridiagonal make_tridiagonal(std::vector<double> diag,
                                std::vector<double> offdiag);

/// Gershgorin disc bounds [lo, hi] containing every eigenvalue.
std::pair<double, double> gershgorin_interval(const SymTridiagonal& t);

}  // namespace softedge

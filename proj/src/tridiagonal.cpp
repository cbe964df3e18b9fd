#include "softedge/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace softedge {

SymTridiagonal make_tridiagonal(std::vector<double> diag,
                                std::vector<double> offdiag) {
  if (diag.empty()) throw std::invalid_argument("tridiagonal: n must be >= 1");
  if (offdiag.size() + 1 != diag.size())
    throw std::invalid_argument("tridiagonal: offdiag must have n-1 entries");
  for (double d : diag)
    if (!std::isfinite(d))
      throw std::invalid_argument("tridiagonal: non-finite diagonal entry");
  for (double e : offdiag)
    if (!std::isfinite(e))
      throw std::invalid_argument("tridiagonal: non-finite off-diagonal entry");
  return SymTridiagonal{std::move(diag), std::move(offdiag)};
}

std::pair<double, double> gershgorin_interval(const SymTridiagonal& t) {
  const std::int64_t n = t.n();
  double lo = t.diag[0];
  double hi = t.diag[0];
  for (std::int64_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

}  // namespace softedge

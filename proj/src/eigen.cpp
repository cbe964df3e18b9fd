#include "softedge/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace softedge {

namespace {

double matrix_scale(const SymTridiagonal& t) {
  auto [lo, hi] = gershgorin_interval(t);
  return std::max({std::abs(lo), std::abs(hi), 1.0});
}

void check_finite(const SymTridiagonal& t) {
  auto [lo, hi] = gershgorin_interval(t);
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("eigen: matrix has non-finite entries");
}

// Counting pass with precomputed squared off-diagonals.
std::int64_t count_below(const double* diag, const double* off2,
                         std::int64_t n, double x, double pivmin) {
  std::int64_t count = 0;
  double d = diag[0] - x;
  if (d == 0.0) d = std::copysign(pivmin, d);
  count += d < 0.0;
  for (std::int64_t i = 1; i < n; ++i) {
    d = diag[i] - x - off2[i - 1] / d;
    if (d == 0.0) d = std::copysign(pivmin, d);
    count += d < 0.0;
  }
  return count;
}

struct Bracket {
  double lo, hi;
  int iterations;
};

template <typename Shrink>
Bracket bisect(double lo, double hi, double tol, Shrink&& shrink) {
  int iterations = 0;
  while (hi - lo > tol && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at double resolution
    shrink(mid, lo, hi);
    ++iterations;
  }
  return {lo, hi, iterations};
}

}  // namespace

std::int64_t sturm_count(const SymTridiagonal& t, double x) {
  const std::int64_t n = t.n();
  const double pivmin = matrix_scale(t) * std::numeric_limits<double>::epsilon() *
                        std::numeric_limits<double>::epsilon();
  std::int64_t count = 0;
  double d = t.diag[0] - x;
  if (d == 0.0) d = std::copysign(pivmin, d);
  count += d < 0.0;
  for (std::int64_t i = 1; i < n; ++i) {
    const double b = t.offdiag[i - 1];
    d = t.diag[i] - x - (b * b) / d;
    if (d == 0.0) d = std::copysign(pivmin, d);
    count += d < 0.0;
  }
  return count;
}

double default_tolerance(const SymTridiagonal& t) {
  auto [lo, hi] = gershgorin_interval(t);
  return 1e-10 * std::max(1.0, 0.5 * (hi - lo));
}

EigenResult lambda_max(const SymTridiagonal& t, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("lambda_max: tol must be > 0");
  check_finite(t);
  const std::int64_t n = t.n();
  const double scale = matrix_scale(t);
  const double pivmin =
      scale * std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon();
  std::vector<double> off2(t.offdiag.size());
  for (size_t i = 0; i < off2.size(); ++i) off2[i] = t.offdiag[i] * t.offdiag[i];

  auto [glo, ghi] = gershgorin_interval(t);
  double lo = glo - tol;
  double hi = ghi + std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * scale);
  const double* dp = t.diag.data();
  const double* o2 = off2.data();
  Bracket b = bisect(lo, hi, tol, [&](double mid, double& l, double& h) {
    if (count_below(dp, o2, n, mid, pivmin) < n)
      l = mid;  // some eigenvalue >= mid
    else
      h = mid;
  });
  return {0.5 * (b.lo + b.hi), b.iterations, b.hi - b.lo};
}

EigenResult lambda_max(const SymTridiagonal& t) {
  return lambda_max(t, default_tolerance(t));
}

EigenResult lambda_min(const SymTridiagonal& t, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("lambda_min: tol must be > 0");
  check_finite(t);
  const std::int64_t n = t.n();
  const double scale = matrix_scale(t);
  const double pivmin =
      scale * std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon();
  std::vector<double> off2(t.offdiag.size());
  for (size_t i = 0; i < off2.size(); ++i) off2[i] = t.offdiag[i] * t.offdiag[i];

  auto [glo, ghi] = gershgorin_interval(t);
  double lo = glo - std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * scale);
  double hi = ghi + tol;
  const double* dp = t.diag.data();
  const double* o2 = off2.data();
  Bracket b = bisect(lo, hi, tol, [&](double mid, double& l, double& h) {
    if (count_below(dp, o2, n, mid, pivmin) >= 1)
      h = mid;  // some eigenvalue < mid
    else
      l = mid;
  });
  return {0.5 * (b.lo + b.hi), b.iterations, b.hi - b.lo};
}

EigenResult lambda_min(const SymTridiagonal& t) {
  return lambda_min(t, default_tolerance(t));
}

std::vector<double> dense_eigen_oracle(const SymTridiagonal& t) {
  const std::int64_t n = t.n();
  if (n > 512)
    throw std::invalid_argument("dense_eigen_oracle: guarded to n <= 512");
  check_finite(t);

  std::vector<double> a(n * n, 0.0);
  for (std::int64_t i = 0; i < n; ++i) a[i * n + i] = t.diag[i];
  for (std::int64_t i = 0; i + 1 < n; ++i) {
    a[i * n + i + 1] = t.offdiag[i];
    a[(i + 1) * n + i] = t.offdiag[i];
  }

  // cyclic Jacobi sweeps
  auto off_norm = [&]() {
    double s = 0.0;
    for (std::int64_t p = 0; p < n; ++p)
      for (std::int64_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
    return std::sqrt(2.0 * s);
  };
  double fro = 0.0;
  for (double v : a) fro += v * v;
  fro = std::sqrt(fro);
  const double stop = std::max(fro, 1.0) * 1e-15;

  for (int sweep = 0; sweep < 64 && off_norm() > stop; ++sweep) {
    for (std::int64_t p = 0; p < n; ++p) {
      for (std::int64_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double sgn = theta >= 0.0 ? 1.0 : -1.0;
        const double tt = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double s = tt * c;
        for (std::int64_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::int64_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::int64_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace softedge

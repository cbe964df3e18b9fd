#include "softedge/bounds.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "softedge/special.hpp"

namespace softedge {

namespace {

double adaptive_step(const std::function<double(double)>& f, double a,
                     double m, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson with a pilot pass to translate the relative tolerance
// into an absolute one.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  constexpr int kPanels = 32;
  const double h = (b - a) / kPanels;
  double pilot = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double x0 = a + i * h;
    pilot += h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
  }
  const double tol = std::max(std::abs(pilot), 1e-300) * rel_tol / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double x0 = a + i * h;
    const double x1 = x0 + h;
    const double m = 0.5 * (x0 + x1);
    const double fa = f(x0), fm = f(m), fb = f(x1);
    const double whole = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_step(f, x0, m, x1, fa, fm, fb, whole, tol, 48);
  }
  return total;
}

struct McMoments {
  double mean = 0.0;
  double se = 0.0;
};

}  // namespace

double chi_mgf_quadrature(double r, double lambda) {
  if (!(r >= 1.0))
    throw std::invalid_argument("chi_mgf_quadrature: requires r >= 1");
  if (std::abs(lambda) > 50.0)
    throw std::domain_error("chi_mgf_quadrature: |lambda| > 50 (divergence guard)");
  const double log_c = -((0.5 * r - 1.0) * std::log(2.0) + log_gamma(0.5 * r));
  const double upper = mean_chi(r) + 12.0 + 2.0 * std::abs(lambda);
  auto density_tilted = [&](double x) {
    if (x <= 0.0) return (r == 1.0) ? std::exp(log_c) : 0.0;
    return std::exp(log_c + (r - 1.0) * std::log(x) - 0.5 * x * x + lambda * x);
  };
  return integrate(density_tilted, 0.0, upper, 1e-11);
}

std::vector<BoundReport> verify_lemma8(std::span<const double> r_grid,
                                       std::span<const double> lambda_grid) {
  std::vector<BoundReport> out;
  out.reserve(r_grid.size() * lambda_grid.size());
  for (double r : r_grid) {
    if (!(r >= 1.0)) throw std::invalid_argument("verify_lemma8: r >= 1 required");
    const double m = mean_chi(r);
    for (double lam : lambda_grid) {
      BoundReport rep;
      rep.label = "chi_mgf";
      rep.r1 = r;
      rep.lambda = lam;
      rep.lhs = chi_mgf_quadrature(r, lam);
      rep.rhs = std::exp(lam * m + 0.5 * lam * lam);
      rep.violation = rep.lhs - rep.rhs;
      rep.method = BoundReport::Method::quadrature;
      out.push_back(std::move(rep));
    }
  }
  return out;
}

double chi_square_mgf(double r, double lambda) {
  if (!(r > 0.0)) throw std::invalid_argument("chi_square_mgf: r must be > 0");
  if (!(lambda < 0.5))
    throw std::domain_error("chi_square_mgf: diverges for lambda >= 1/2");
  return std::exp(-0.5 * r * std::log1p(-2.0 * lambda));
}

std::vector<BoundReport> verify_lemma10(std::span<const double> r_grid,
                                        std::span<const double> lambda_grid) {
  std::vector<BoundReport> out;
  out.reserve(r_grid.size() * lambda_grid.size());
  for (double r : r_grid) {
    for (double lam : lambda_grid) {
      if (!(lam <= 0.25))
        throw std::invalid_argument("verify_lemma10: grid requires lambda <= 1/4");
      BoundReport rep;
      rep.label = "chi_square_mgf";
      rep.r1 = r;
      rep.lambda = lam;
      rep.lhs = chi_square_mgf(r, lam);
      rep.rhs = std::exp(r * (lam + 2.0 * lam * lam));  // may overflow to inf
      rep.violation = rep.lhs - rep.rhs;
      rep.method = BoundReport::Method::closed_form;
      out.push_back(std::move(rep));
    }
  }
  return out;
}

BoundReport verify_lemma11(double r1, double r2, double lambda,
                           std::int64_t samples, RngStream& stream) {
  if (!(r1 >= 1.0) || !(r2 >= 1.0))
    throw std::invalid_argument("verify_lemma11: parameters must be >= 1");
  if (!(std::abs(lambda) < 1.0))
    throw std::invalid_argument("verify_lemma11: requires |lambda| < 1");
  if (samples < 1) throw std::invalid_argument("verify_lemma11: samples < 1");
  const double m1 = mean_chi(r1);
  const double m2 = mean_chi(r2);
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double a = sample_chi(stream, r1);
    const double b = sample_chi(stream, r2);
    const double v = std::exp(lambda * (a * b - m1 * m2));
    sum += v;
    sumsq += v * v;
  }
  const double ns = static_cast<double>(samples);
  const double mean = sum / ns;
  const double var = std::max(0.0, (sumsq - ns * mean * mean) / (ns - 1.0));
  BoundReport rep;
  rep.label = "chi_product_mgf";
  rep.r1 = r1;
  rep.r2 = r2;
  rep.lambda = lambda;
  rep.lhs = mean;
  const double l2 = lambda * lambda;
  rep.rhs = std::exp(l2 * (m1 * m1 + m2 * m2 + 2.0 * lambda * m1 * m2) /
                     (2.0 * (1.0 - l2))) /
            std::sqrt(1.0 - l2);
  rep.violation = rep.lhs - rep.rhs;
  rep.se = std::sqrt(var / ns);
  rep.method = BoundReport::Method::monte_carlo;
  return rep;
}

std::vector<BoundReport> verify_zy_bounds(double kappa, std::int64_t n,
                                          double beta, std::int64_t k,
                                          std::span<const double> lambda_grid,
                                          std::int64_t samples,
                                          RngStream& stream) {
  if (k < 1 || k > n) throw std::invalid_argument("verify_zy_bounds: k in 1..n");
  if (!(beta > 0.0) || !(kappa > static_cast<double>(n) - 1.0))
    throw std::invalid_argument("verify_zy_bounds: bad ensemble parameters");
  const double scale = std::sqrt(beta * kappa);
  const double z_max = scale / 4.0;
  const double y_max = scale / (2.0 * std::sqrt(2.0));
  for (double lam : lambda_grid) {
    if (!(lam <= z_max) || !(std::abs(lam) <= y_max))
      throw std::invalid_argument("verify_zy_bounds: lambda outside validity range");
  }
  const double rz = beta * (kappa - static_cast<double>(k) + 1.0);
  const bool has_zt = k >= 2;
  const double rzt = has_zt ? beta * static_cast<double>(n - k + 1) : 0.0;
  const bool has_y = k <= n - 1;
  const double ry = has_y ? beta * static_cast<double>(n - k) : 0.0;
  const double my = has_y ? mean_chi(rz) * mean_chi(ry) : 0.0;

  std::vector<BoundReport> out;
  for (double lam : lambda_grid) {
    double sz = 0.0, szz = 0.0, st = 0.0, stt = 0.0, sy = 0.0, syy = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
      const double c1 = sample_chi(stream, rz);
      const double z = (c1 * c1 - rz) / scale;
      const double ez = std::exp(lam * z);
      sz += ez;
      szz += ez * ez;
      if (has_zt) {
        const double c2 = sample_chi(stream, rzt);
        const double zt = (c2 * c2 - rzt) / scale;
        const double et = std::exp(lam * zt);
        st += et;
        stt += et * et;
      }
      if (has_y) {
        const double c3 = sample_chi(stream, ry);
        const double y = (c1 * c3 - my) / scale;
        const double ey = std::exp(lam * y);
        sy += ey;
        syy += ey * ey;
      }
    }
    const double ns = static_cast<double>(samples);
    auto push = [&](const char* label, double sum, double sumsq, double rhs,
                    double r_param) {
      const double mean = sum / ns;
      const double var = std::max(0.0, (sumsq - ns * mean * mean) / (ns - 1.0));
      BoundReport rep;
      rep.label = label;
      rep.r1 = r_param;
      rep.lambda = lam;
      rep.lhs = mean;
      rep.rhs = rhs;
      rep.violation = mean - rhs;
      rep.se = std::sqrt(var / ns);
      rep.method = BoundReport::Method::monte_carlo;
      out.push_back(std::move(rep));
    };
    push("Z", sz, szz, std::exp(2.0 * lam * lam), rz);
    if (has_zt) push("Ztilde", st, stt, std::exp(2.0 * lam * lam), rzt);
    if (has_y) push("Y", sy, syy, 2.0 * std::exp(12.0 * lam * lam), ry);
  }
  return out;
}

UProfile u_subgaussian_profile(double kappa, std::int64_t n, double beta,
                               std::int64_t k,
                               std::span<const double> lambda_grid,
                               std::int64_t samples, RngStream& stream) {
  if (k < 1 || k > n)
    throw std::invalid_argument("u_subgaussian_profile: k in 1..n");
  if (!(beta > 0.0) || !(kappa > static_cast<double>(n) - 1.0))
    throw std::invalid_argument("u_subgaussian_profile: bad ensemble parameters");
  const double scale = std::sqrt(beta * kappa);
  for (double lam : lambda_grid)
    if (lam == 0.0 || !(std::abs(lam) <= scale / 8.0))
      throw std::invalid_argument(
          "u_subgaussian_profile: lambda must be nonzero, |lambda| <= sqrt(beta kappa)/8");

  const double r1 = beta * (kappa - static_cast<double>(k) + 1.0);
  const bool has_tilde = k <= n - 1;
  const double r2 = has_tilde ? beta * static_cast<double>(n - k) : 0.0;
  double ew2 = r1;
  if (has_tilde) ew2 += r2 - 2.0 * mean_chi(r1) * mean_chi(r2);

  auto draw_u = [&](RngStream& s) {
    const double a = sample_chi(s, r1);
    const double b = has_tilde ? sample_chi(s, r2) : 0.0;
    const double w = a - b;
    return (w * w - ew2) / scale;
  };

  UProfile out;
  {
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
      const double u = draw_u(stream);
      sum += u;
      sumsq += u * u;
    }
    const double ns = static_cast<double>(samples);
    const double mean = sum / ns;
    out.var_u = std::max(0.0, (sumsq - ns * mean * mean) / (ns - 1.0));
  }
  for (double lam : lambda_grid) {
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
      const double v = std::exp(lam * draw_u(stream));
      sum += v;
      sumsq += v * v;
    }
    const double ns = static_cast<double>(samples);
    const double mean = sum / ns;
    const double var = std::max(0.0, (sumsq - ns * mean * mean) / (ns - 1.0));
    UProfilePoint pt;
    pt.lambda = lam;
    pt.logmgf_over_lambda_sq = std::log(mean) / (lam * lam);
    pt.se = (std::sqrt(var / ns) / mean) / (lam * lam);
    out.points.push_back(pt);
  }
  return out;
}

}  // namespace softedge

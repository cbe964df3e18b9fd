#include "softedge/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "softedge/special.hpp"

namespace softedge {

namespace {

void check_length(size_t have, size_t want, const char* where) {
  if (have != want) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s: vector length %zu, expected %zu", where,
                  have, want);
    throw std::invalid_argument(buf);
  }
}

// sqrt(n) * grad_sq + kweight / sqrt(n), the energy attached to the constant c.
double energy_full(std::span<const double> v, std::int64_t n) {
  const VectorStats st = vector_stats(v);
  const double rn = std::sqrt(static_cast<double>(n));
  return rn * st.grad_sq + st.kweight / rn;
}

}  // namespace

VectorStats vector_stats(std::span<const double> v) {
  const size_t n = v.size();
  VectorStats st;
  double prev = 0.0;  // v_0
  for (size_t j = 0; j < n; ++j) {
    const double x = v[j];
    st.norm2_sq += x * x;
    st.norm4_4 += x * x * x * x;
    st.kweight += static_cast<double>(j + 1) * x * x;
    st.grad_sq += (x - prev) * (x - prev);
    prev = x;
  }
  st.grad_sq += prev * prev;  // v_{n+1} = 0
  return st;
}

double hermite_form(const HermiteSample& s, std::span<const double> v) {
  const std::int64_t n = s.params.n;
  check_length(v.size(), static_cast<size_t>(n), "hermite_form");
  const double rb = std::sqrt(s.params.beta);
  double noise = 0.0, cross = 0.0, norm2 = 0.0;
  for (std::int64_t j = 0; j < n; ++j) {
    noise += s.g[j] * v[j] * v[j];
    norm2 += v[j] * v[j];
  }
  for (std::int64_t j = 0; j + 1 < n; ++j) cross += s.chi[j] * v[j] * v[j + 1];
  return noise / rb + 2.0 * cross / rb -
         2.0 * std::sqrt(static_cast<double>(n)) * norm2;
}

double hermite_form_c(const HermiteSample& s, std::span<const double> v, double c) {
  const std::int64_t n = s.params.n;
  check_length(v.size(), static_cast<size_t>(n), "hermite_form_c");
  if (!(c > 0.0)) throw std::invalid_argument("hermite_form_c: c must be > 0");
  const double rb = std::sqrt(s.params.beta);
  double noise = 0.0, cross = 0.0;
  for (std::int64_t j = 0; j < n; ++j) noise += s.g[j] * v[j] * v[j];
  for (std::int64_t j = 0; j + 1 < n; ++j) {
    const double centered =
        s.chi[j] - mean_chi(s.params.beta * static_cast<double>(n - 1 - j));
    cross += centered * v[j] * v[j + 1];
  }
  return noise / rb + 2.0 * cross / rb - c * energy_full(v, n);
}

double energy_I(std::span<const double> v) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n < 1) throw std::invalid_argument("energy_I: empty vector");
  const double rn = std::sqrt(static_cast<double>(n));
  double grad = 0.0, kw = 0.0;
  for (std::int64_t j = 0; j + 1 < n; ++j)
    grad += (v[j + 1] - v[j]) * (v[j + 1] - v[j]);
  for (std::int64_t j = 0; j < n; ++j)
    kw += static_cast<double>(j + 1) * v[j] * v[j];
  return rn * grad + kw / rn;
}

double energy_J(std::span<const double> v, double beta) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n < 1) throw std::invalid_argument("energy_J: empty vector");
  if (!(beta > 0.0)) throw std::invalid_argument("energy_J: beta must be > 0");
  const double rn = std::sqrt(static_cast<double>(n));
  const double rb = std::sqrt(beta);
  double j_sum = 0.0;
  for (std::int64_t j = 0; j + 1 < n; ++j) {
    // paper position k = j+1
    const double e = mean_chi(beta * static_cast<double>(n - 1 - j)) / rb;
    j_sum += e * (v[j + 1] - v[j]) * (v[j + 1] - v[j]);
    j_sum += (rn - e) * (v[j] * v[j] + v[j + 1] * v[j + 1]);
  }
  return j_sum;
}

double laguerre_form(const LaguerreSample& s, std::span<const double> v) {
  const std::int64_t n = s.params.n;
  check_length(v.size(), static_cast<size_t>(n), "laguerre_form");
  const double beta = s.params.beta;
  const double kappa = s.params.kappa;
  const double center = std::sqrt(kappa) + std::sqrt(static_cast<double>(n));
  double acc = 0.0;
  for (std::int64_t j = 0; j < n; ++j) {
    double d = s.chi[j] * s.chi[j] / beta;
    if (j >= 1) d += s.chitilde[j - 1] * s.chitilde[j - 1] / beta;
    acc += (d - center * center) * v[j] * v[j];
  }
  for (std::int64_t j = 0; j + 1 < n; ++j)
    acc += 2.0 * (s.chi[j] * s.chitilde[j] / beta) * v[j] * v[j + 1];
  return acc / std::sqrt(kappa);
}

LaguerreNoise laguerre_noise(const LaguerreSample& s) {
  const std::int64_t n = s.params.n;
  const double beta = s.params.beta;
  const double kappa = s.params.kappa;
  const double scale = std::sqrt(beta * kappa);
  LaguerreNoise out;
  out.z.resize(n);
  out.ztilde.resize(n - 1);
  out.y.resize(n - 1);
  out.u.resize(n);
  for (std::int64_t j = 0; j < n; ++j) {
    const double r = beta * (kappa - static_cast<double>(j));  // beta(kappa-k+1)
    out.z[j] = (s.chi[j] * s.chi[j] - r) / scale;
  }
  for (std::int64_t j = 0; j + 1 < n; ++j) {
    // Zt_{j+2} carries chitilde_{j+1} ~ chi_{beta(n-1-j)}
    const double r = beta * static_cast<double>(n - 1 - j);
    out.ztilde[j] = (s.chitilde[j] * s.chitilde[j] - r) / scale;
  }
  for (std::int64_t j = 0; j + 1 < n; ++j) {
    const double m1 = mean_chi(beta * (kappa - static_cast<double>(j)));
    const double m2 = mean_chi(beta * static_cast<double>(n - 1 - j));
    out.y[j] = (s.chi[j] * s.chitilde[j] - m1 * m2) / scale;
  }
  for (std::int64_t j = 0; j < n; ++j) {
    const double r1 = beta * (kappa - static_cast<double>(j));
    const double ct = (j + 1 < n) ? s.chitilde[j] : 0.0;  // chitilde_0 = 0
    const double w = s.chi[j] - ct;
    double ew2 = r1;
    if (j + 1 < n) {
      const double r2 = beta * static_cast<double>(n - 1 - j);
      ew2 += r2 - 2.0 * mean_chi(r1) * mean_chi(r2);
    }
    out.u[j] = (w * w - ew2) / scale;
  }
  return out;
}

double laguerre_form_c(const LaguerreSample& s, std::span<const double> v, double c) {
  const std::int64_t n = s.params.n;
  check_length(v.size(), static_cast<size_t>(n), "laguerre_form_c");
  if (!(c > 0.0)) throw std::invalid_argument("laguerre_form_c: c must be > 0");
  const LaguerreNoise nz = laguerre_noise(s);
  const double rb = std::sqrt(s.params.beta);
  double acc = 0.0;
  for (std::int64_t j = 0; j < n; ++j) acc += nz.z[j] * v[j] * v[j];
  for (std::int64_t j = 0; j + 1 < n; ++j)
    acc += nz.ztilde[j] * v[j + 1] * v[j + 1];  // Zt_k v_k^2, k = j+2
  for (std::int64_t j = 0; j + 1 < n; ++j)
    acc += 2.0 * nz.y[j] * v[j] * v[j + 1];
  return acc / rb - c * energy_full(v, n);
}

double laguerre_lambda_coeff(const LaguerreParams& p, std::int64_t k) {
  if (k < 1 || k >= p.n)
    throw std::invalid_argument("laguerre_lambda_coeff: k must be in 1..n-1");
  const double m1 = mean_chi(p.beta * (p.kappa - static_cast<double>(k) + 1.0));
  const double m2 = mean_chi(p.beta * static_cast<double>(p.n - k));
  return m1 * m2 / (p.beta * std::sqrt(p.kappa));
}

double laguerre_alpha(const LaguerreParams& p) {
  return 1.0 - std::sqrt(static_cast<double>(p.n) / p.kappa);
}

double laguerre_prime_noise(const LaguerreSample& s, std::span<const double> v) {
  const std::int64_t n = s.params.n;
  check_length(v.size(), static_cast<size_t>(n), "laguerre_prime_noise");
  const LaguerreNoise nz = laguerre_noise(s);
  double acc = 0.0;
  for (std::int64_t j = 0; j < n; ++j) acc -= nz.z[j] * v[j] * v[j];
  for (std::int64_t j = 0; j + 1 < n; ++j)
    acc -= nz.ztilde[j] * v[j + 1] * v[j + 1];
  for (std::int64_t j = 0; j + 1 < n; ++j)
    acc -= 2.0 * nz.y[j] * v[j] * v[j + 1];
  return acc / std::sqrt(s.params.beta);
}

double laguerre_prime_noise_grouped(const LaguerreSample& s,
                                    std::span<const double> v) {
  const std::int64_t n = s.params.n;
  check_length(v.size(), static_cast<size_t>(n), "laguerre_prime_noise_grouped");
  const LaguerreNoise nz = laguerre_noise(s);
  double acc = 0.0;
  for (std::int64_t j = 0; j < n; ++j) acc -= nz.u[j] * v[j] * v[j];
  for (std::int64_t j = 0; j + 1 < n; ++j) {
    // sum_{k=2}^{n} (-Zt_k)(v_k^2 - v_{k-1}^2), k = j+2
    acc -= nz.ztilde[j] * (v[j + 1] * v[j + 1] - v[j] * v[j]);
  }
  for (std::int64_t j = 0; j + 1 < n; ++j)
    acc -= 2.0 * nz.y[j] * v[j] * (v[j + 1] + v[j]);
  return acc / std::sqrt(s.params.beta);
}

double laguerre_form_prime(const LaguerreSample& s, std::span<const double> v) {
  const std::int64_t n = s.params.n;
  check_length(v.size(), static_cast<size_t>(n), "laguerre_form_prime");
  if (!(s.params.kappa >= static_cast<double>(n) + 1.0))
    throw std::invalid_argument("laguerre_form_prime: requires kappa >= n+1");
  double acc = laguerre_prime_noise(s, v);
  for (std::int64_t j = 0; j + 1 < n; ++j) {
    const double lam = laguerre_lambda_coeff(s.params, j + 1);
    acc -= lam * (v[j + 1] + v[j]) * (v[j + 1] + v[j]);
  }
  const double alpha = laguerre_alpha(s.params);
  double kw = 0.0;
  for (std::int64_t j = 0; j < n; ++j)
    kw += static_cast<double>(j + 1) * v[j] * v[j];
  acc -= alpha * alpha * kw / std::sqrt(static_cast<double>(n));
  return acc;
}

std::pair<double, double> sum_by_parts(std::span<const double> s,
                                       std::span<const double> t,
                                       std::int64_t m) {
  if (m < 1) throw std::invalid_argument("sum_by_parts: m must be >= 1");
  const std::int64_t n = static_cast<std::int64_t>(t.size());
  if (n < 1) throw std::invalid_argument("sum_by_parts: empty t");
  const std::int64_t ns = static_cast<std::int64_t>(s.size());

  // prefix sums S_0..S_{n+m}, s zero-extended
  std::vector<double> prefix(static_cast<size_t>(n + m + 1), 0.0);
  for (std::int64_t k = 1; k <= n + m; ++k)
    prefix[k] = prefix[k - 1] + (k <= ns ? s[k - 1] : 0.0);

  double lhs = 0.0;
  for (std::int64_t k = 1; k <= std::min(n, ns); ++k) lhs += s[k - 1] * t[k - 1];

  const double inv_m = 1.0 / static_cast<double>(m);
  double rhs = 0.0;
  for (std::int64_t k = 1; k <= n; ++k)
    rhs += inv_m * (prefix[k + m - 1] - prefix[k - 1]) * t[k - 1];
  for (std::int64_t k = 0; k <= n; ++k) {
    double window = 0.0;
    for (std::int64_t l = k; l <= k + m - 1; ++l) window += prefix[l] - prefix[k];
    const double tk = (k >= 1) ? t[k - 1] : 0.0;
    const double tk1 = (k + 1 <= n) ? t[k] : 0.0;
    rhs += inv_m * window * (tk1 - tk);
  }
  return {lhs, rhs};
}

double delta_m(std::span<const double> s, std::int64_t m, std::int64_t k) {
  if (m < 1) throw std::invalid_argument("delta_m: m must be >= 1");
  if (k < 0) throw std::invalid_argument("delta_m: k must be >= 0");
  const std::int64_t ns = static_cast<std::int64_t>(s.size());
  auto prefix = [&](std::int64_t idx) {
    double acc = 0.0;
    for (std::int64_t i = 1; i <= std::min(idx, ns); ++i) acc += s[i - 1];
    return acc;
  };
  const double sk = prefix(k);
  double best = 0.0;
  double run = sk;
  for (std::int64_t l = k + 1; l <= k + m; ++l) {
    run += (l <= ns ? s[l - 1] : 0.0);
    best = std::max(best, std::abs(run - sk));
  }
  return best;
}

namespace {

std::vector<double> triangle_vector(std::int64_t n, double slope_scale,
                                    const char* where) {
  // v_k = min(slope_scale * k, 1 - slope_scale * k), support where positive
  const std::int64_t support =
      std::min<std::int64_t>(n, static_cast<std::int64_t>(std::floor(1.0 / slope_scale)));
  if (support < 1) throw std::invalid_argument(std::string(where) + ": empty support");
  std::vector<double> v(static_cast<size_t>(n), 0.0);
  for (std::int64_t k = 1; k <= support; ++k) {
    const double x = slope_scale * static_cast<double>(k);
    v[k - 1] = std::max(0.0, std::min(x, 1.0 - x));
  }
  return v;
}

}  // namespace

std::vector<double> test_vector_left_hermite(std::int64_t n, double eps) {
  if (n < 1 || !(eps > 0.0))
    throw std::invalid_argument("test_vector_left_hermite: bad parameters");
  if (!(static_cast<double>(n) * eps >= 1.0))
    throw std::invalid_argument("test_vector_left_hermite: requires n*eps >= 1");
  return triangle_vector(n, 1.0 / (static_cast<double>(n) * eps),
                         "test_vector_left_hermite");
}

std::vector<double> test_vector_right_hermite(std::int64_t n, double eps) {
  if (n < 1 || !(eps > 0.0))
    throw std::invalid_argument("test_vector_right_hermite: bad parameters");
  if (!(static_cast<double>(n) * std::pow(eps, 1.5) >= 1.0))
    throw std::invalid_argument(
        "test_vector_right_hermite: requires n*eps^{3/2} >= 1");
  return triangle_vector(n, std::sqrt(eps), "test_vector_right_hermite");
}

std::vector<double> test_vector_left_laguerre(std::int64_t n, double kappa,
                                              double eps) {
  if (n < 1 || !(eps > 0.0) || !(kappa > static_cast<double>(n) - 1.0))
    throw std::invalid_argument("test_vector_left_laguerre: bad parameters");
  const double delta = std::sqrt(static_cast<double>(n) / kappa);
  if (!(eps <= delta))
    throw std::invalid_argument("test_vector_left_laguerre: requires eps <= sqrt(n/kappa)");
  if (!(static_cast<double>(n) * eps / delta >= 1.0))
    throw std::invalid_argument("test_vector_left_laguerre: requires n*eps/delta >= 1");
  return triangle_vector(n, delta / (static_cast<double>(n) * eps),
                         "test_vector_left_laguerre");
}

namespace {

// Trial vectors for the sandwich calibration: a mix of random Gaussian
// profiles and structured shapes that stress the boundary terms.
std::vector<double> trial_vector(std::int64_t n, std::int64_t which,
                                 RngStream& stream) {
  std::vector<double> v(static_cast<size_t>(n), 0.0);
  switch (which % 6) {
    case 0:  // first basis vector
      v[0] = 1.0;
      return v;
    case 1:  // last basis vector
      v[static_cast<size_t>(n - 1)] = 1.0;
      return v;
    case 2:  // constant
      std::fill(v.begin(), v.end(), 1.0);
      return v;
    case 3: {  // triangle on a random prefix
      const std::int64_t len =
          1 + static_cast<std::int64_t>(stream.next_uniform() * static_cast<double>(n));
      for (std::int64_t k = 1; k <= len; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(len + 1);
        v[k - 1] = std::min(x, 1.0 - x);
      }
      return v;
    }
    default:  // dense Gaussian
      for (auto& x : v) x = sample_gaussian(stream, 0.0, 1.0);
      if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
        v[0] = 1.0;
      return v;
  }
}

constexpr std::uint64_t kCalibrationTag = 7;

}  // namespace

SandwichCalibration calibrate_sandwich(SandwichKind kind,
                                       const SandwichGrid& grid,
                                       std::int64_t sample_count,
                                       std::span<const std::int64_t> n_grid,
                                       std::span<const double> beta_grid,
                                       std::uint64_t seed) {
  if (grid.a_candidates.empty() || grid.b_candidates.empty())
    throw std::invalid_argument("calibrate_sandwich: empty candidate grid");
  if (n_grid.empty() || beta_grid.empty())
    throw std::invalid_argument("calibrate_sandwich: empty parameter grid");

  std::vector<char> a_ok(grid.a_candidates.size(), 1);
  std::vector<char> b_ok(grid.b_candidates.size(), 1);
  bool nominal_ok = true;
  constexpr double kKappaRatios[3] = {1.0, 2.0, 8.0};

  for (std::int64_t trial = 0; trial < sample_count; ++trial) {
    const std::int64_t n = n_grid[static_cast<size_t>(trial) % n_grid.size()];
    const double beta =
        beta_grid[static_cast<size_t>(trial / static_cast<std::int64_t>(n_grid.size())) %
                  beta_grid.size()];
    RngStream stream = make_stream(seed, kCalibrationTag,
                                   kind == SandwichKind::hermite ? 0 : 1,
                                   static_cast<std::uint64_t>(trial));
    std::vector<double> v = trial_vector(n, trial, stream);

    double form, noise;
    if (kind == SandwichKind::hermite) {
      HermiteParams p{n, beta};
      const HermiteSample s = sample_hermite(p, stream);
      form = hermite_form(s, v);
      // centered noise = H_c(v) + c * energy for any c; take c = 1
      noise = hermite_form_c(s, v, 1.0) + energy_full(v, n);
    } else {
      const double ratio = kKappaRatios[trial % 3];
      LaguerreParams p{n, std::max(ratio * static_cast<double>(n),
                                   static_cast<double>(n) - 0.5),
                       beta};
      const LaguerreSample s = sample_laguerre(p, stream);
      form = laguerre_form(s, v);
      noise = laguerre_form_c(s, v, 1.0) + energy_full(v, n);
    }
    const double energy = energy_full(v, n);

    auto holds = [&](double a, double b) {
      const double form_a = noise - a * energy;
      const double form_b = noise - b * energy;
      const double scale =
          std::max({1.0, std::abs(form), std::abs(form_a), std::abs(form_b)});
      return form_a <= form + 1e-9 * scale && form <= form_b + 1e-9 * scale;
    };

    for (size_t i = 0; i < grid.a_candidates.size(); ++i)
      if (a_ok[i] && !(noise - grid.a_candidates[i] * energy <=
                       form + 1e-9 * std::max({1.0, std::abs(form),
                                               std::abs(noise - grid.a_candidates[i] * energy)})))
        a_ok[i] = 0;
    for (size_t i = 0; i < grid.b_candidates.size(); ++i)
      if (b_ok[i] && !(form <= noise - grid.b_candidates[i] * energy +
                               1e-9 * std::max({1.0, std::abs(form),
                                                std::abs(noise - grid.b_candidates[i] * energy)})))
        b_ok[i] = 0;
    if (kind == SandwichKind::hermite && nominal_ok && !holds(8.0, 1.0 / 16.0))
      nominal_ok = false;
  }

  SandwichCalibration out;
  out.trials = sample_count;
  out.hermite_nominal_ok = (kind == SandwichKind::hermite) ? nominal_ok : false;
  double best_a = 0.0;
  bool have_a = false;
  for (size_t i = 0; i < grid.a_candidates.size(); ++i)
    if (a_ok[i] && (!have_a || grid.a_candidates[i] < best_a)) {
      best_a = grid.a_candidates[i];
      have_a = true;
    }
  double best_b = 0.0;
  bool have_b = false;
  for (size_t i = 0; i < grid.b_candidates.size(); ++i)
    if (b_ok[i] && (!have_b || grid.b_candidates[i] > best_b)) {
      best_b = grid.b_candidates[i];
      have_b = true;
    }
  if (!have_a || !have_b)
    throw CalibrationError("calibrate_sandwich: no grid point passes all trials");
  out.a = best_a;
  out.b = best_b;
  return out;
}

}  // namespace softedge

#include "softedge/ensembles.hpp"

#include <cmath>
#include <stdexcept>

namespace softedge {

void validate(const HermiteParams& p) {
  if (p.n < 1) throw std::invalid_argument("hermite: n must be >= 1");
  if (!(p.beta > 0.0)) throw std::invalid_argument("hermite: beta must be > 0");
}

void validate(const LaguerreParams& p) {
  if (p.n < 1) throw std::invalid_argument("laguerre: n must be >= 1");
  if (!(p.beta > 0.0)) throw std::invalid_argument("laguerre: beta must be > 0");
  if (!(p.kappa > static_cast<double>(p.n) - 1.0))
    throw std::invalid_argument("laguerre: kappa must exceed n-1 (strictly)");
}

SymTridiagonal HermiteSample::matrix() const {
  const double root_beta = std::sqrt(params.beta);
  std::vector<double> diag(g.size());
  std::vector<double> off(chi.size());
  for (size_t j = 0; j < g.size(); ++j) diag[j] = g[j] / root_beta;
  for (size_t j = 0; j < chi.size(); ++j) off[j] = chi[j] / root_beta;
  return SymTridiagonal{std::move(diag), std::move(off)};
}

HermiteSample sample_hermite(const HermiteParams& params, RngStream& stream) {
  validate(params);
  const std::int64_t n = params.n;
  HermiteSample s;
  s.params = params;
  s.g.resize(n);
  s.chi.resize(n - 1);
  const double sd = std::sqrt(2.0);
  for (std::int64_t j = 0; j < n; ++j) s.g[j] = sample_gaussian(stream, 0.0, sd);
  for (std::int64_t j = 0; j + 1 < n; ++j)
    s.chi[j] = sample_chi(stream, params.beta * static_cast<double>(n - 1 - j));
  return s;
}

LaguerreSample sample_laguerre(const LaguerreParams& params, RngStream& stream) {
  validate(params);
  const std::int64_t n = params.n;
  LaguerreSample s;
  s.params = params;
  s.chi.resize(n);
  s.chitilde.resize(n - 1);
  for (std::int64_t j = 0; j < n; ++j)
    s.chi[j] = sample_chi(stream, params.beta * (params.kappa - static_cast<double>(j)));
  for (std::int64_t j = 0; j + 1 < n; ++j)
    s.chitilde[j] = sample_chi(stream, params.beta * static_cast<double>(n - 1 - j));
  return s;
}

SymTridiagonal laguerre_matrix(const LaguerreSample& s) {
  const std::int64_t n = s.params.n;
  const double beta = s.params.beta;
  std::vector<double> diag(n);
  std::vector<double> off(n - 1);
  diag[0] = s.chi[0] * s.chi[0] / beta;
  for (std::int64_t j = 1; j < n; ++j)
    diag[j] = (s.chi[j] * s.chi[j] + s.chitilde[j - 1] * s.chitilde[j - 1]) / beta;
  for (std::int64_t j = 0; j + 1 < n; ++j)
    off[j] = s.chi[j] * s.chitilde[j] / beta;
  return SymTridiagonal{std::move(diag), std::move(off)};
}

}  // namespace softedge

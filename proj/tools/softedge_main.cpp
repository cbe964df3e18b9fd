// softedge: sample beta-ensemble tridiagonal models, estimate extremal
// eigenvalue tails, and verify the exact identities and mgf bounds the
// library is built on. Emits CSV or JSON on stdout; logs go to stderr.
//
// Exit codes: 0 ok, 2 parameter/usage error, 3 verification failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "softedge/bounds.hpp"
#include "softedge/eigen.hpp"
#include "softedge/ensembles.hpp"
#include "softedge/experiments.hpp"
#include "softedge/forms.hpp"
#include "softedge/mc.hpp"
#include "softedge/special.hpp"
#include "softedge/stats.hpp"

using json = nlohmann::ordered_json;
using namespace softedge;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Output {
  std::string path;  // empty = stdout
  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
  }
};

int workers_from_env(int flag_value) {
  // SOFTEDGE_WORKERS overrides the flag; that is the only env override.
  if (const char* env = std::getenv("SOFTEDGE_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return flag_value;
}

std::string ensemble_name(Ensemble e) {
  return e == Ensemble::hermite ? "hermite" : "laguerre";
}

std::string tail_csv(const TailQuery& q, const std::vector<SweepPoint>& pts) {
  std::string out =
      "ensemble,side,extremal,n,beta,kappa,eps,samples,hits,p_hat,ci_low,ci_high,seed\n";
  for (const SweepPoint& pt : pts) {
    out += ensemble_name(q.ensemble);
    out += q.side == Side::upper ? ",upper," : ",lower,";
    out += q.extremal == Extremal::max ? "max," : "min,";
    out += std::to_string(q.n) + "," + fmt17(q.beta) + "," + fmt17(q.kappa) +
           "," + fmt17(pt.eps) + "," + std::to_string(q.samples) + "," +
           std::to_string(pt.estimate.hits) + "," + fmt17(pt.estimate.p_hat) +
           "," + fmt17(pt.estimate.ci_low) + "," + fmt17(pt.estimate.ci_high) +
           "," + std::to_string(q.seed) + "\n";
  }
  return out;
}

json tail_json_points(const std::vector<SweepPoint>& pts) {
  json arr = json::array();
  for (const SweepPoint& pt : pts) {
    arr.push_back({{"eps", pt.eps},
                   {"hits", pt.estimate.hits},
                   {"samples", pt.estimate.samples},
                   {"p_hat", pt.estimate.p_hat},
                   {"ci_low", pt.estimate.ci_low},
                   {"ci_high", pt.estimate.ci_high}});
  }
  return arr;
}

json fit_json(const FitReport& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"residual_rms", f.residual_rms},
          {"points_used", f.points_used},
          {"points_excluded", f.points_excluded},
          {"expected_power", f.expected_power}};
}

json report_json(const BoundReport& r) {
  const char* method = r.method == BoundReport::Method::quadrature ? "quadrature"
                       : r.method == BoundReport::Method::closed_form
                           ? "closed-form"
                           : "monte-carlo";
  return {{"label", r.label},   {"r1", r.r1},
          {"r2", r.r2},         {"lambda", r.lambda},
          {"lhs", r.lhs},       {"rhs", r.rhs},
          {"violation", r.violation}, {"se", r.se},
          {"method", method}};
}

// ---- verify subcommands ------------------------------------------------

json verify_parts(std::int64_t trials, std::uint64_t seed, bool& ok) {
  double max_rel = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    RngStream stream = make_stream(seed, 11, 0, static_cast<std::uint64_t>(t));
    const std::int64_t n =
        1 + static_cast<std::int64_t>(stream.next_uniform() * 100.0);
    const std::int64_t m =
        1 + static_cast<std::int64_t>(stream.next_uniform() * static_cast<double>(n));
    std::vector<double> s(n), tv(n);
    for (auto& x : s) x = sample_gaussian(stream, 0.0, 2.0);
    for (auto& x : tv) x = sample_gaussian(stream, 0.0, 2.0);
    auto [lhs, rhs] = sum_by_parts(s, tv, m);
    max_rel = std::max(max_rel, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  ok = max_rel <= 1e-12;
  return {{"trials", trials}, {"max_abs_violation", max_rel}, {"pass", ok}};
}

json verify_forms(std::int64_t trials, std::uint64_t seed, bool& ok) {
  // per-realization sandwich + deterministic J/I inequalities
  ok = true;
  double worst_sandwich = 0.0, worst_ji = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    RngStream stream = make_stream(seed, 12, 0, static_cast<std::uint64_t>(t));
    const std::int64_t n =
        2 + static_cast<std::int64_t>(stream.next_uniform() * 198.0);
    const double betas[3] = {1.0, 2.0, 4.0};
    const double beta = betas[t % 3];
    HermiteParams p{n, beta};
    const HermiteSample s = sample_hermite(p, stream);
    std::vector<double> v(n);
    for (auto& x : v) x = sample_gaussian(stream, 0.0, 1.0);
    const double h = hermite_form(s, v);
    const double ha = hermite_form_c(s, v, 8.0);
    const double hb = hermite_form_c(s, v, 1.0 / 16.0);
    const double scale = std::max({1.0, std::abs(h), std::abs(ha), std::abs(hb)});
    worst_sandwich = std::max({worst_sandwich, (ha - h) / scale, (h - hb) / scale});
    const double i_v = energy_I(v);
    const double j_v = energy_J(v, beta);
    worst_ji = std::max({worst_ji, j_v - 8.0 * i_v, i_v / 16.0 - j_v});
  }
  if (worst_sandwich > 1e-9 || worst_ji > 0.0) ok = false;
  return {{"trials", trials},
          {"max_sandwich_violation", worst_sandwich},
          {"max_ji_violation", worst_ji},
          {"pass", ok}};
}

json verify_mgf(std::uint64_t seed, bool& ok) {
  const std::vector<double> r8 = {1.0, 2.0, 5.0, 20.0};
  std::vector<double> l8;
  for (int i = -20; i <= 20; ++i) l8.push_back(0.25 * i);
  const auto rep8 = verify_lemma8(r8, l8);
  double v8 = 0.0;
  for (const auto& r : rep8) v8 = std::max(v8, r.violation);

  const std::vector<double> r10 = {0.5, 1.0, 2.0, 10.0, 100.0};
  std::vector<double> l10;
  for (int i = 0; i < 40; ++i) l10.push_back(-10.0 + 10.25 * i / 39.0);
  const auto rep10 = verify_lemma10(r10, l10);
  double v10 = 0.0;
  for (const auto& r : rep10) v10 = std::max(v10, r.violation);

  RngStream stream = make_stream(seed, 13, 0, 0);
  const BoundReport r11 = verify_lemma11(2.0, 2.0, 0.3, 1000000, stream);
  const bool ok11 = r11.violation <= 4.0 * r11.se;

  RngStream zy = make_stream(seed, 13, 1, 0);
  const double lams[3] = {0.5, 1.0, -1.0};
  const auto zyrep = verify_zy_bounds(100.0, 50, 2.0, 10, lams, 200000, zy);
  bool okzy = true;
  for (const auto& r : zyrep) okzy = okzy && r.violation <= 4.0 * r.se;

  ok = v8 <= 1e-8 && v10 <= 1e-12 && ok11 && okzy;
  json reports = json::array();
  for (const auto& r : zyrep) reports.push_back(report_json(r));
  return {{"lemma8_max_violation", v8},
          {"lemma10_max_violation", v10},
          {"lemma11", report_json(r11)},
          {"zy_reports", reports},
          {"pass", ok}};
}

json verify_eigen(std::int64_t trials, std::uint64_t seed, bool& ok) {
  double worst = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    RngStream stream = make_stream(seed, 14, 0, static_cast<std::uint64_t>(t));
    const std::int64_t n =
        1 + static_cast<std::int64_t>(stream.next_uniform() * 49.0);
    SymTridiagonal tri;
    if (t % 2 == 0) {
      tri = sample_hermite({n, 1.0 + 3.0 * stream.next_uniform()}, stream).matrix();
    } else {
      const double kappa = static_cast<double>(n) - 0.5 +
                           4.0 * static_cast<double>(n) * stream.next_uniform();
      tri = laguerre_matrix(sample_laguerre({n, kappa, 1.0 + stream.next_uniform()}, stream));
    }
    const auto dense = dense_eigen_oracle(tri);
    auto [lo, hi] = gershgorin_interval(tri);
    const double scale = 1.0 + std::max(std::abs(lo), std::abs(hi));
    const double tol = 1e-10;
    worst = std::max(worst,
                     std::abs(lambda_max(tri, tol).value - dense.back()) / scale);
    worst = std::max(worst,
                     std::abs(lambda_min(tri, tol).value - dense.front()) / scale);
  }
  ok = worst <= 1e-9;
  return {{"trials", trials}, {"max_scaled_difference", worst}, {"pass", ok}};
}

json verify_vectors(bool& ok) {
  ok = true;
  json out = json::object();
  {
    const auto v = test_vector_left_hermite(10000, 0.01);
    const VectorStats st = vector_stats(v);
    const double a = st.norm2_sq / 100.0;
    const double b = st.grad_sq * 100.0;
    ok = ok && a >= 1.0 / 20.0 && a <= 1.0 / 6.0;
    ok = ok && b >= 1.0 - 1e-9 && b <= 8.0;
    out["left_hermite"] = {{"norm2_over_neps", a}, {"grad_times_neps", b}};
  }
  {
    const auto v = test_vector_right_hermite(10000, 0.04);
    const VectorStats st = vector_stats(v);
    ok = ok && std::abs(st.kweight - 1.0) <= 1e-12;
    out["right_hermite"] = {{"kweight", st.kweight}};
  }
  {
    const auto v = test_vector_left_laguerre(10000, 40000.0, 0.01);
    const VectorStats st = vector_stats(v);
    ok = ok && st.norm2_sq > 0.0;
    out["left_laguerre"] = {{"norm2_sq", st.norm2_sq}};
  }
  out["pass"] = ok;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beta-ensemble soft-edge Monte Carlo toolkit"};
  app.require_subcommand(1);

  std::string format = "json";
  std::string output_path;
  std::uint64_t seed = kDefaultSeed;
  int workers = 0;
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", output_path, "output path (default stdout)");
  app.add_option("--seed", seed, "deterministic seed");
  app.add_option("--workers", workers, "worker threads (0 = hardware)");

  // --- sample ---
  auto* cmd_sample = app.add_subcommand("sample", "emit one ensemble draw");
  std::string ens_name = "hermite";
  std::int64_t n = 10;
  double beta = 2.0, kappa = 0.0;
  cmd_sample->add_option("--ensemble", ens_name)->check(CLI::IsMember({"hermite", "laguerre"}));
  cmd_sample->add_option("--n", n);
  cmd_sample->add_option("--beta", beta);
  cmd_sample->add_option("--kappa", kappa);

  // --- tail ---
  auto* cmd_tail = app.add_subcommand("tail", "tail probability estimate");
  std::string side_name = "upper", extremal_name = "max";
  double eps = 0.1;
  std::int64_t samples = 10000;
  cmd_tail->add_option("--ensemble", ens_name)->check(CLI::IsMember({"hermite", "laguerre"}));
  cmd_tail->add_option("--side", side_name)->check(CLI::IsMember({"upper", "lower"}));
  cmd_tail->add_option("--extremal", extremal_name)->check(CLI::IsMember({"max", "min"}));
  cmd_tail->add_option("--n", n);
  cmd_tail->add_option("--beta", beta);
  cmd_tail->add_option("--kappa", kappa);
  cmd_tail->add_option("--eps", eps);
  cmd_tail->add_option("--samples", samples);

  // --- fit ---
  auto* cmd_fit = app.add_subcommand("fit", "eps sweep + exponent fit");
  std::vector<double> eps_grid;
  double expected_power = 1.5;
  bool enforce_window = true;
  cmd_fit->add_option("--ensemble", ens_name)->check(CLI::IsMember({"hermite", "laguerre"}));
  cmd_fit->add_option("--side", side_name)->check(CLI::IsMember({"upper", "lower"}));
  cmd_fit->add_option("--extremal", extremal_name)->check(CLI::IsMember({"max", "min"}));
  cmd_fit->add_option("--n", n);
  cmd_fit->add_option("--beta", beta);
  cmd_fit->add_option("--kappa", kappa);
  cmd_fit->add_option("--eps", eps_grid)->expected(-1);
  cmd_fit->add_option("--samples", samples);
  cmd_fit->add_option("--power", expected_power);
  cmd_fit->add_flag("--no-window,!--window", enforce_window,
                    "disable the small-deviation window check");

  // --- variance ---
  auto* cmd_var = app.add_subcommand("variance", "variance scaling scan");
  std::vector<std::int64_t> n_grid;
  double kappa_ratio = 0.0;
  cmd_var->add_option("--ensemble", ens_name)->check(CLI::IsMember({"hermite", "laguerre"}));
  cmd_var->add_option("--n", n_grid)->expected(-1);
  cmd_var->add_option("--beta", beta);
  cmd_var->add_option("--kappa-ratio", kappa_ratio);
  cmd_var->add_option("--samples", samples);

  // --- lower-ratio ---
  auto* cmd_ratio = app.add_subcommand("lower-ratio", "deviation rate ratios");
  cmd_ratio->add_option("--side", side_name)->check(CLI::IsMember({"upper", "lower"}));
  cmd_ratio->add_option("--n", n);
  cmd_ratio->add_option("--beta", beta);
  cmd_ratio->add_option("--eps", eps_grid)->expected(-1);
  cmd_ratio->add_option("--samples", samples);

  // --- center ---
  auto* cmd_center = app.add_subcommand("center", "normalized edge centering");
  cmd_center->add_option("--n", n_grid)->expected(-1);
  cmd_center->add_option("--beta", beta);
  cmd_center->add_option("--samples", samples);

  // --- verify ---
  auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
  std::string what;
  std::int64_t trials = 10000;
  cmd_verify->add_option("what", what, "parts|forms|mgf|eigen|vectors")
      ->required()
      ->check(CLI::IsMember({"parts", "forms", "mgf", "eigen", "vectors"}));
  cmd_verify->add_option("--trials", trials);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  workers = workers_from_env(workers);
  const Ensemble ens = ens_name == "hermite" ? Ensemble::hermite : Ensemble::laguerre;
  const Side side = side_name == "upper" ? Side::upper : Side::lower;
  const Extremal extremal = extremal_name == "max" ? Extremal::max : Extremal::min;
  Output out{output_path};

  try {
    if (cmd_sample->parsed()) {
      RngStream stream = make_stream(seed, 10, 0, 0);
      SymTridiagonal t;
      if (ens == Ensemble::hermite)
        t = sample_hermite({n, beta}, stream).matrix();
      else
        t = laguerre_matrix(sample_laguerre({n, kappa, beta}, stream));
      const EigenResult top = lambda_max(t);
      const EigenResult bottom = lambda_min(t);
      if (format == "json") {
        json j = {{"config",
                   {{"ensemble", ensemble_name(ens)}, {"n", n},
                    {"beta", beta}, {"kappa", kappa}, {"seed", seed}}},
                  {"results",
                   {{"diag", t.diag}, {"offdiag", t.offdiag},
                    {"lambda_max", top.value}, {"lambda_min", bottom.value}}}};
        out.write(j.dump(1) + "\n");
      } else {
        std::string text = "index,diag,offdiag\n";
        for (std::int64_t i = 0; i < t.n(); ++i) {
          text += std::to_string(i + 1) + "," + fmt17(t.diag[i]) + ",";
          text += (i + 1 < t.n() ? fmt17(t.offdiag[i]) : "") + "\n";
        }
        text += "lambda_max," + fmt17(top.value) + ",\n";
        text += "lambda_min," + fmt17(bottom.value) + ",\n";
        out.write(text);
      }
      return 0;
    }

    if (cmd_tail->parsed() || cmd_fit->parsed() || cmd_ratio->parsed()) {
      TailQuery q;
      q.ensemble = ens;
      q.side = side;
      q.extremal = extremal;
      q.n = n;
      q.beta = beta;
      q.kappa = kappa;
      q.samples = samples;
      q.seed = seed;
      q.workers = workers;

      if (cmd_tail->parsed()) {
        q.eps = eps;
        validate(q);
        const double grid1[1] = {eps};
        const auto pts = estimate_tail_sweep(q, grid1);
        if (format == "csv") {
          out.write(tail_csv(q, pts));
        } else {
          json j = {{"config",
                     {{"ensemble", ensemble_name(ens)}, {"side", side_name},
                      {"extremal", extremal_name}, {"n", n}, {"beta", beta},
                      {"kappa", kappa}, {"eps", eps}, {"samples", samples},
                      {"seed", seed}}},
                    {"results", tail_json_points(pts)}};
          out.write(j.dump(1) + "\n");
        }
        return 0;
      }

      if (cmd_fit->parsed()) {
        if (eps_grid.empty()) throw std::invalid_argument("fit: --eps grid required");
        const auto pts = estimate_tail_sweep(q, eps_grid, enforce_window);
        const FitReport fit = fit_exponent(pts, expected_power);
        json j = {{"config",
                   {{"ensemble", ensemble_name(ens)}, {"side", side_name},
                    {"extremal", extremal_name}, {"n", n}, {"beta", beta},
                    {"kappa", kappa}, {"eps", eps_grid}, {"samples", samples},
                    {"seed", seed}, {"power", expected_power}}},
                  {"results", tail_json_points(pts)},
                  {"fit", fit_json(fit)}};
        if (format == "csv") {
          std::string text = tail_csv(q, pts);
          text += "slope," + fmt17(fit.slope) + "\n";
          out.write(text);
        } else {
          out.write(j.dump(1) + "\n");
        }
        return 0;
      }

      // lower-ratio
      if (eps_grid.empty())
        throw std::invalid_argument("lower-ratio: --eps grid required");
      for (double e : eps_grid) {
        q.eps = e;
        validate(q);
      }
      const auto ratios =
          lower_bound_ratio(side, n, beta, eps_grid, samples, seed, workers);
      if (format == "csv") {
        std::string text = "eps,ratio,hits,flagged\n";
        for (const auto& r : ratios)
          text += fmt17(r.eps) + "," + fmt17(r.ratio) + "," +
                  std::to_string(r.hits) + "," + (r.flagged ? "1" : "0") + "\n";
        out.write(text);
      } else {
        json arr = json::array();
        for (const auto& r : ratios)
          arr.push_back({{"eps", r.eps}, {"ratio", r.ratio},
                         {"hits", r.hits}, {"flagged", r.flagged}});
        json j = {{"config",
                   {{"side", side_name}, {"n", n}, {"beta", beta},
                    {"eps", eps_grid}, {"samples", samples}, {"seed", seed}}},
                  {"results", arr}};
        out.write(j.dump(1) + "\n");
      }
      return 0;
    }

    if (cmd_var->parsed()) {
      if (n_grid.empty()) throw std::invalid_argument("variance: --n grid required");
      const auto scan = variance_scan(n_grid, beta, samples, seed, ens,
                                      kappa_ratio, workers);
      if (format == "csv") {
        std::string text = "n,mean,variance,samples\n";
        for (const auto& p : scan.points)
          text += std::to_string(p.n) + "," + fmt17(p.mean) + "," +
                  fmt17(p.variance) + "," + std::to_string(p.samples) + "\n";
        text += "slope," + fmt17(scan.fit.slope) + ",,\n";
        out.write(text);
      } else {
        json pts = json::array();
        for (const auto& p : scan.points)
          pts.push_back({{"n", p.n}, {"mean", p.mean},
                         {"variance", p.variance}, {"samples", p.samples}});
        json j = {{"config",
                   {{"ensemble", ensemble_name(ens)}, {"beta", beta},
                    {"kappa_ratio", kappa_ratio}, {"n", n_grid},
                    {"samples", samples}, {"seed", seed}}},
                  {"results", pts},
                  {"fit", fit_json(scan.fit)}};
        out.write(j.dump(1) + "\n");
      }
      return 0;
    }

    if (cmd_center->parsed()) {
      if (n_grid.empty()) throw std::invalid_argument("center: --n grid required");
      const auto pts = tw_center_stability(n_grid, beta, samples, seed, workers);
      if (format == "csv") {
        std::string text = "n,mean,se\n";
        for (const auto& p : pts)
          text += std::to_string(p.n) + "," + fmt17(p.mean) + "," + fmt17(p.se) + "\n";
        out.write(text);
      } else {
        json arr = json::array();
        for (const auto& p : pts)
          arr.push_back({{"n", p.n}, {"mean", p.mean}, {"se", p.se}});
        json j = {{"config",
                   {{"beta", beta}, {"n", n_grid}, {"samples", samples},
                    {"seed", seed}}},
                  {"results", arr}};
        out.write(j.dump(1) + "\n");
      }
      return 0;
    }

    if (cmd_verify->parsed()) {
      bool ok = false;
      json body;
      if (what == "parts") body = verify_parts(trials, seed, ok);
      else if (what == "forms") body = verify_forms(trials, seed, ok);
      else if (what == "mgf") body = verify_mgf(seed, ok);
      else if (what == "eigen") body = verify_eigen(std::min<std::int64_t>(trials, 1000), seed, ok);
      else body = verify_vectors(ok);
      json j = {{"config", {{"verify", what}, {"trials", trials}, {"seed", seed}}},
                {"results", body}};
      out.write(j.dump(1) + "\n");
      return ok ? 0 : 3;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

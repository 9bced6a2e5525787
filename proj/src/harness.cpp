#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bessel_like/asymptotics.hpp"
#include "bessel_like/csv.hpp"
#include "bessel_like/error.hpp"
#include "bessel_like/harness.hpp"
#include "bessel_like/krein.hpp"
#include "bessel_like/mc.hpp"

namespace bessel_like {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + p.string());
  return f;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double grid_stretch(const SolverParams& s, double x_max, double t_first) {
  return s.stretch < 0.0 ? auto_stretch(x_max, t_first) : s.stretch;
}

DtControl dt_control(const SolverParams& s) {
  DtControl d;
  d.scheme = s.scheme;
  d.dt0 = s.dt0;
  d.growth = s.growth;
  return d;
}

CheckResult ratio_check(const ExperimentConfig& c, std::vector<std::filesystem::path>& files) {
  const auto& spec = c.spec;
  const RegimeReport rep = classify(spec, c.tol);
  const double X = c.solver.c * std::sqrt(c.t_grid.back());
  const MeasureTable table = build_measures(spec, X, c.tol);
  const CanonicalGrid grid =
      build_grid(table, c.solver.n, X, grid_stretch(c.solver, X, c.t_grid.front()));
  const DensityField field = solve_density(grid, 0.0, c.t_grid, dt_control(c.solver));

  const auto path = c.out / "ratio.csv";
  auto f = open_out(path);
  const bool excess = rep.regime == Regime::rho_zero_finite || rep.regime == Regime::rho_neg;
  f << (excess ? "t,excess_pde,predict,ratio\n" : "t,p_pde,predict,ratio\n");
  std::vector<double> ratios;
  for (double t : c.t_grid) {
    const AsymptoticPrediction pr = predict(rep, table, t);
    const double p = density_at(field, t, 0.0);
    const double value = excess ? p - 1.0 / rep.m_inf : p;
    ratios.push_back(value / pr.value);
    csv::row(f, {t, value, pr.value, ratios.back()});
  }
  files.push_back(path);

  const double first = std::abs(ratios.front() - 1.0), last = std::abs(ratios.back() - 1.0);
  CheckResult r{"ratio", last <= c.checks.ratio_tol && last <= std::max(first, c.checks.ratio_floor), ""};
  r.detail = fmt("|ratio - 1| = %.4g at t_min, %.4g at t_max", first, last);
  return r;
}

CheckResult krein_check(const ExperimentConfig& c, std::vector<std::filesystem::path>& files) {
  const double s_min = *std::min_element(c.krein_s.begin(), c.krein_s.end());
  const double X = kGreenRadius / std::sqrt(s_min);
  const MeasureTable table = build_measures(c.spec, X, c.tol);
  const MeasureTable dual = build_measures(c.spec.dual(), X, c.tol);

  const auto path = c.out / "krein.csv";
  auto f = open_out(path);
  f << "s,h,h_star,identity_check\n";
  double worst_identity = 0.0, worst_dual = 0.0;
  for (double s : c.krein_s) {
    const HSample h = green_h(table, s);
    const double hb = h_bullet(dual, s);
    const double dual_rel = std::abs(h.h_star - 2.0 * hb) / h.h_star;
    worst_identity = std::max(worst_identity, std::abs(h.h_star * s * h.h - 1.0));
    worst_dual = std::max(worst_dual, dual_rel);
    csv::row(f, {s, h.h, h.h_star, dual_rel});
  }
  files.push_back(path);
  CheckResult r{"krein", worst_identity <= c.checks.identity_tol && worst_dual <= c.checks.dual_tol, ""};
  r.detail = fmt("max |h* s h - 1| = %.3g, max |h* - 2 h_dual|/h* = %.3g", worst_identity, worst_dual);
  return r;
}

CheckResult mc_check(const ExperimentConfig& c, std::vector<std::filesystem::path>& files) {
  const auto& m = c.mc;
  const double y_max = *std::max_element(m.y.begin(), m.y.end());
  const double X = std::max(c.solver.c * std::sqrt(m.t), 2.0 * y_max);
  const MeasureTable table = build_measures(c.spec, X, c.tol);
  const CanonicalGrid grid = build_grid(table, c.solver.n, X, grid_stretch(c.solver, X, m.t));
  const std::vector<double> ts{m.t};
  DtControl dt = dt_control(c.solver);
  const DensityField field = solve_density(grid, 0.0, ts, dt);

  const EndpointSample sample = simulate_paths_parallel(c.spec, 0.0, m.t, m.n_paths, m.dt, m.seed);
  const double bw = m.bandwidth > 0.0 ? m.bandwidth : default_bandwidth(sample, 2.0 * X / c.solver.n);
  std::vector<DensityEstimate> est;
  double worst = 0.0;
  for (double y : m.y) {
    est.push_back(density_estimate(sample, table, y, bw));
    // p(t; 0, y) = p(t; y, 0) by symmetry.
    const double pde = density_at(field, m.t, y);
    worst = std::max(worst, std::abs(est.back().value - pde) / est.back().std_error);
  }
  const auto path = c.out / "mc.csv";
  auto f = open_out(path);
  write_mc_csv(est, f);
  files.push_back(path);
  CheckResult r{"mc", worst <= c.checks.mc_sigmas, ""};
  r.detail = fmt("max |mc - pde| / std_error = %.3g (bandwidth %.3g)", worst, bw);
  return r;
}

}  // namespace

bool CompareReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

CompareReport run_compare(const ExperimentConfig& c) {
  std::filesystem::create_directories(c.out);
  CompareReport rep;
  if (c.checks.ratio) rep.checks.push_back(ratio_check(c, rep.files));
  if (c.checks.krein) rep.checks.push_back(krein_check(c, rep.files));
  if (c.checks.mc) rep.checks.push_back(mc_check(c, rep.files));

  const std::string echo = echo_config(c);
  const auto path = c.out / "stamp.txt";
  auto f = open_out(path);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(echo)));
  f << "config_hash = " << hash << "\nseed = " << c.seed << "\nmc_seed = " << c.mc.seed << "\n\n" << echo;
  rep.files.push_back(path);
  return rep;
}

}  // namespace bessel_like

// Command line front end: one subcommand per module plus the full comparison run.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "bessel_like/asymptotics.hpp"
#include "bessel_like/error.hpp"
#include "bessel_like/harness.hpp"
#include "bessel_like/krein.hpp"
#include "bessel_like/mc.hpp"

using namespace bessel_like;

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2, kNumeric = 3 };

std::ofstream open_csv(const ExperimentConfig& c, const char* name) {
  std::filesystem::create_directories(c.out);
  std::ofstream f(c.out / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (c.out / name).string());
  std::cout << (c.out / name).string() << '\n';
  return f;
}

double radius(const ExperimentConfig& c) { return c.solver.c * std::sqrt(c.t_grid.back()); }

CanonicalGrid grid_for(const ExperimentConfig& c, const MeasureTable& table) {
  const double X = radius(c);
  const double k = c.solver.stretch < 0.0 ? auto_stretch(X, c.t_grid.front()) : c.solver.stretch;
  return build_grid(table, c.solver.n, X, k);
}

DtControl dt_for(const ExperimentConfig& c) {
  DtControl d;
  d.scheme = c.solver.scheme;
  d.dt0 = c.solver.dt0;
  d.growth = c.solver.growth;
  return d;
}

int cmd_measures(const ExperimentConfig& c) {
  auto f = open_csv(c, "measures.csv");
  write_measures_csv(build_measures(c.spec, radius(c), c.tol), f);
  return kPass;
}

int cmd_green(const ExperimentConfig& c) {
  const double s_min = *std::min_element(c.krein_s.begin(), c.krein_s.end());
  const MeasureTable table = build_measures(c.spec, kGreenRadius / std::sqrt(s_min), c.tol);
  std::vector<HSample> out;
  for (double s : c.krein_s) out.push_back(green_h(table, s));
  auto f = open_csv(c, "green.csv");
  write_h_csv(out, f);
  return kPass;
}

int cmd_density(const ExperimentConfig& c) {
  const MeasureTable table = build_measures(c.spec, radius(c), c.tol);
  const DensityField field = solve_density(grid_for(c, table), 0.0, c.t_grid, dt_for(c));
  auto f = open_csv(c, "density.csv");
  write_density_csv(field, f);
  return kPass;
}

int cmd_spectral(const ExperimentConfig& c) {
  const MeasureTable table = build_measures(c.spec, radius(c), c.tol);
  const CanonicalGrid grid = grid_for(c, table);
  {
    auto f = open_csv(c, "sigma.csv");
    write_sigma_csv(spectral_sigma(grid), f);
  }
  auto f = open_csv(c, "sigma_star.csv");
  write_sigma_csv(spectral_sigma_star(grid), f);
  return kPass;
}

int cmd_mc(const ExperimentConfig& c) {
  const auto& m = c.mc;
  const double y_max = *std::max_element(m.y.begin(), m.y.end());
  const MeasureTable table = build_measures(c.spec, std::max(radius(c), 2.0 * y_max), c.tol);
  const EndpointSample sample = simulate_paths_parallel(c.spec, 0.0, m.t, m.n_paths, m.dt, m.seed);
  const double bw = m.bandwidth > 0.0 ? m.bandwidth : default_bandwidth(sample);
  std::vector<DensityEstimate> est;
  for (double y : m.y) est.push_back(density_estimate(sample, table, y, bw));
  auto f = open_csv(c, "mc.csv");
  write_mc_csv(est, f);
  return kPass;
}

int cmd_predict(const ExperimentConfig& c) {
  const RegimeReport rep = classify(c.spec, c.tol);
  const MeasureTable table = build_measures(c.spec, radius(c), c.tol);
  std::vector<AsymptoticPrediction> rows;
  for (double t : c.t_grid) rows.push_back(predict(rep, table, t));
  auto f = open_csv(c, "predict.csv");
  write_prediction_csv(rows, f);
  return kPass;
}

int cmd_compare(const ExperimentConfig& c) {
  const CompareReport rep = run_compare(c);
  for (const auto& f : rep.files) std::cout << f.string() << '\n';
  for (const auto& k : rep.checks)
    std::cout << (k.passed ? "PASS " : "FAIL ") << k.name << ": " << k.detail << '\n';
  return rep.passed() ? kPass : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-time heat kernel asymptotics of one-dimensional diffusions"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  double tol = 0.0;
  app.add_option("--config", config_path, "Experiment configuration file")->required()->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the config)");
  auto* tol_opt = app.add_option("--tol", tol, "Measure table tolerance")->check(CLI::PositiveNumber);

  using Cmd = int (*)(const ExperimentConfig&);
  const std::pair<const char*, Cmd> cmds[] = {
      {"measures", cmd_measures}, {"green", cmd_green},     {"density", cmd_density},
      {"spectral", cmd_spectral}, {"mc", cmd_mc},           {"predict", cmd_predict},
      {"compare", cmd_compare},
  };
  const char* help[] = {"W, s, m table",           "Green's value h and dual h*", "transition density from 0",
                        "spectral functions",      "Monte Carlo density",         "asymptotic predictions",
                        "full comparison run"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(cmds); ++i)
    subs.push_back(app.add_subcommand(cmds[i].first, help[i])->fallthrough());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    ExperimentConfig c = load_config(config_path);
    if (*out_opt) c.out = out_dir;
    if (*seed_opt) c.seed = c.mc.seed = seed;
    if (*tol_opt) c.tol = tol;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return cmds[i].second(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool usage = e.kind() == ErrorKind::config || e.kind() == ErrorKind::validation;
    return usage ? kUsage : kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}

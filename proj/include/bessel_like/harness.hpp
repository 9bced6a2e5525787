#pragma once

// Plain-text experiment configuration and the comparison runner behind the CLI.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bessel_like/density.hpp"
#include "bessel_like/drift.hpp"

namespace bessel_like {

struct SolverParams {
  std::size_t n = 2000;
  /// Grid radius x_max = c sqrt(t_max).
  double c = 8.0;
  /// Negative selects auto_stretch.
  double stretch = -1.0;
  Scheme scheme = Scheme::implicit_euler;
  double dt0 = 0.0;
  double growth = 1.01;
};

struct McParams {
  std::size_t n_paths = 100000;
  double dt = 1e-3;
  double t = 1.0;
  std::uint64_t seed = 1;
  /// 0 selects default_bandwidth.
  double bandwidth = 0.0;
  std::vector<double> y{0.0};
};

struct CheckParams {
  bool ratio = true;
  bool krein = true;
  bool mc = false;
  /// |ratio(t_max) - 1| bound.
  double ratio_tol = 0.3;
  /// Below this level |ratio - 1| counts as converged and the trend test is waived.
  double ratio_floor = 1e-3;
  double identity_tol = 1e-12;
  double dual_tol = 1e-4;
  double mc_sigmas = 3.0;
};

struct ExperimentConfig {
  std::vector<std::pair<std::string, std::string>> spec_pairs;
  DriftSpec spec;
  std::vector<double> t_grid;
  SolverParams solver;
  std::vector<double> krein_s{1e-3, 1e-2, 1e-1, 1.0};
  McParams mc;
  CheckParams checks;
  /// Measure table tolerance.
  double tol = 1e-10;
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;
};

/// [section] headers and key = value lines; '#' starts a comment. Unknown and duplicate
/// keys are ConfigErrors quoting the line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text of a config with every default filled in; parse_config(echo) round trips.
std::string echo_config(const ExperimentConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CompareReport {
  std::vector<CheckResult> checks;
  std::vector<std::filesystem::path> files;
  bool passed() const;
};

/// Writes ratio.csv, krein.csv, mc.csv (when requested) and stamp.txt into config.out.
CompareReport run_compare(const ExperimentConfig& config);

}  // namespace bessel_like

#pragma once

// Monte Carlo oracle: Euler-Maruyama paths of dX = (1/2) b(X) dt + dB reflected at 0,
// and a boundary-corrected kernel estimate of the speed-measure density.

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "bessel_like/drift.hpp"
#include "bessel_like/measures.hpp"

namespace bessel_like {

struct EndpointSample {
  double t = 0.0;
  double x0 = 0.0;
  std::vector<double> endpoints;
  std::size_t n_paths = 0;
  /// Step actually used: t / ceil(t / requested dt).
  double dt = 0.0;
  std::uint64_t seed = 0;
  /// Half steps taken without drift because b was not finite at the current point.
  std::size_t retries = 0;
};

/// Seed of path i: splitmix64 applied to seed + (i + 1) * golden gamma.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path);

/// Serial reference.
EndpointSample simulate_paths(const DriftSpec& spec, double x0, double t, std::size_t n_paths,
                              double dt, std::uint64_t seed);

/// OpenMP version; bit-identical to simulate_paths for any thread count.
EndpointSample simulate_paths_parallel(const DriftSpec& spec, double x0, double t,
                                       std::size_t n_paths, double dt, std::uint64_t seed);

struct DensityEstimate {
  double y = 0.0;
  double value = 0.0;      // speed-measure density
  double std_error = 0.0;
  double lebesgue = 0.0;   // value * 2 W(y)
  double bandwidth = 0.0;
};

/// 1.06 sd n^{-1/5}, at least min_bandwidth.
double default_bandwidth(const EndpointSample& sample, double min_bandwidth = 0.0);

/// Epanechnikov estimate with reflection at 0, divided by m'(y) = 2 W(y).
DensityEstimate density_estimate(const EndpointSample& sample, const MeasureTable& table, double y,
                                 double bandwidth);

/// Rows y,p_hat,std_err.
void write_mc_csv(std::span<const DensityEstimate> rows, std::ostream& os);

namespace detail {
struct PathSetup {
  double x0, h;
  std::size_t steps;
};
PathSetup path_setup(double x0, double t, double dt);
/// Endpoint of one path; `retries` is incremented for every singular half step.
double simulate_one(const DriftSpec& spec, const PathSetup& setup, std::uint64_t seed,
                    std::size_t& retries);
}  // namespace detail

}  // namespace bessel_like

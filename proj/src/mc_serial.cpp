#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <numeric>
#include <boost/random/mersenne_twister.hpp>

#include "bessel_like/csv.hpp"
#include "bessel_like/error.hpp"
#include "bessel_like/mc.hpp"

namespace bessel_like {

namespace {

constexpr int kMaxRetriesPerStep = 30;
constexpr std::size_t kBlock = 4096;

double epanechnikov(double u) { return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0; }

}  // namespace

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path) {
  std::uint64_t z = seed + (path + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

PathSetup path_setup(double x0, double t, double dt) {
  if (!(x0 >= 0.0)) throw DomainError("simulate_paths needs x0 >= 0");
  if (!(t > 0.0)) throw DomainError("simulate_paths needs t > 0");
  if (!(dt > 0.0) || dt > t / 10.0 * (1.0 + 1e-12)) throw ValidationError("simulate_paths needs 0 < dt <= t/10");
  const auto steps = static_cast<std::size_t>(std::ceil(t / dt * (1.0 - 1e-12)));
  return {x0, t / static_cast<double>(steps), steps};
}

double simulate_one(const DriftSpec& spec, const PathSetup& setup, std::uint64_t seed,
                    std::size_t& retries) {
  boost::random::mt19937_64 eng(seed);
  boost::random::normal_distribution<double> normal;
  double X = setup.x0;
  const double h = setup.h;
  const double sq = std::sqrt(h);
  for (std::size_t k = 0; k < setup.steps; ++k) {
    double left = h, root = sq;
    for (int r = 0;; ++r) {
      const double b = spec.b_unchecked(X);
      if (std::isfinite(b)) {
        X = std::abs(X + 0.5 * b * left + root * normal(eng));
        break;
      }
      if (r == kMaxRetriesPerStep) throw NumericError("simulate_paths: drift singular after repeated step halving");
      left *= 0.5;
      root = std::sqrt(left);
      X = std::abs(X + root * normal(eng));
      ++retries;
    }
  }
  return X;
}

}  // namespace detail

EndpointSample simulate_paths(const DriftSpec& spec, double x0, double t, std::size_t n_paths,
                              double dt, std::uint64_t seed) {
  const auto setup = detail::path_setup(x0, t, dt);
  EndpointSample out{t, x0, std::vector<double>(n_paths), n_paths, setup.h, seed, 0};
  for (std::size_t i = 0; i < n_paths; ++i)
    out.endpoints[i] = detail::simulate_one(spec, setup, path_seed(seed, i), out.retries);
  return out;
}

double default_bandwidth(const EndpointSample& sample, double min_bandwidth) {
  const auto& e = sample.endpoints;
  if (e.size() < 2) throw ValidationError("default_bandwidth needs at least two endpoints");
  const double n = static_cast<double>(e.size());
  const double mean = std::accumulate(e.begin(), e.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : e) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return std::max(1.06 * sd * std::pow(n, -0.2), min_bandwidth);
}

DensityEstimate density_estimate(const EndpointSample& sample, const MeasureTable& table, double y,
                                 double bandwidth) {
  if (!(bandwidth > 0.0)) throw ValidationError("density_estimate needs bandwidth > 0");
  if (!(y >= 0.0)) throw DomainError("density_estimate needs y >= 0");
  if (y > table.x_max()) throw RangeError("density_estimate: y beyond the measure table");
  const auto& e = sample.endpoints;
  if (e.empty()) throw ValidationError("density_estimate needs a non-empty sample");

  // Block partial sums reduced in index order.
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t b0 = 0; b0 < e.size(); b0 += kBlock) {
    double s1 = 0.0, s2 = 0.0;
    const std::size_t b1 = std::min(e.size(), b0 + kBlock);
    for (std::size_t i = b0; i < b1; ++i) {
      const double c = (epanechnikov((y - e[i]) / bandwidth) + epanechnikov((y + e[i]) / bandwidth)) / bandwidth;
      s1 += c;
      s2 += c * c;
    }
    sum += s1;
    sum2 += s2;
  }
  const double n = static_cast<double>(e.size());
  const double mean = sum / n;
  const double var = std::max(sum2 / n - mean * mean, 0.0);
  const double scale = 2.0 * table.W(y);

  DensityEstimate out;
  out.y = y;
  out.lebesgue = mean;
  out.value = mean / scale;
  out.std_error = std::sqrt(var / n) / scale;
  out.bandwidth = bandwidth;
  return out;
}

void write_mc_csv(std::span<const DensityEstimate> rows, std::ostream& os) {
  os << "y,p_hat,std_err\n";
  for (const auto& r : rows) csv::row(os, {r.y, r.value, r.std_error});
}

}  // namespace bessel_like

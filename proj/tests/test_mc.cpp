#include <doctest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "bessel_like/density.hpp"
#include "bessel_like/error.hpp"
#include "bessel_like/mc.hpp"

using namespace bessel_like;
using std::numbers::pi;

namespace {

DriftSpec bm() { return make_example(ExampleId::bessel, {.rho = 1.0}); }
DriftSpec ex1() { return make_example(ExampleId::ex1, {}); }
DriftSpec ex3(double a) { return make_example(ExampleId::ex3, {.alpha = a}); }

double pde_at_zero(const DriftSpec& sp, double t) {
  const double X = 12 * std::sqrt(t) + 10;
  const MeasureTable tb = build_measures(sp, X);
  const CanonicalGrid g = build_grid(tb, 4000, X, auto_stretch(X, 1e-2));
  DtControl c;
  c.scheme = Scheme::tr_bdf2;
  c.dt0 = 1e-5;
  const std::vector<double> ts{t};
  return density_at(solve_density(g, 0.0, ts, c), t, 0.0);
}

// One shared million-path Brownian sample.
const EndpointSample& bm_million() {
  static const EndpointSample s = simulate_paths_parallel(bm(), 0.0, 1.0, 1000000, 1e-3, 7);
  return s;
}

}  // namespace

TEST_CASE("folded normal mean for reflecting Brownian motion") {
  const EndpointSample& s = bm_million();
  REQUIRE(s.endpoints.size() == 1000000);
  double sum = 0.0, sum2 = 0.0;
  bool nonneg = true;
  for (double v : s.endpoints) {
    sum += v;
    sum2 += v * v;
    nonneg = nonneg && v >= 0.0;
  }
  CHECK(nonneg);
  const double n = static_cast<double>(s.n_paths);
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - std::sqrt(2 / pi)) <= 3 * se);
  CHECK(std::sqrt(2 / pi) == doctest::Approx(0.79788).epsilon(1e-5));
  CHECK(std::abs(sum2 / n - 1.0) <= 0.01);
  CHECK(s.retries == 0);
}

TEST_CASE("kernel estimate of the reflecting Brownian density") {
  const EndpointSample& s = bm_million();
  const MeasureTable tb = build_measures(bm(), 10.0);
  const DensityEstimate d0 = density_estimate(s, tb, 0.0, 0.02);
  CHECK(std::abs(d0.value - 1 / std::sqrt(2 * pi)) <= 3 * d0.std_error);
  CHECK(1 / std::sqrt(2 * pi) == doctest::Approx(0.39894).epsilon(1e-5));
  const DensityEstimate d1 = density_estimate(s, tb, 1.0, 0.02);
  const double p1 = std::exp(-0.5) / std::sqrt(2 * pi);
  CHECK(std::abs(d1.value - p1) <= 3 * d1.std_error);
  CHECK(p1 == doctest::Approx(0.241971).epsilon(1e-6));
  for (const auto& d : {d0, d1}) {
    CHECK(d.value == d.lebesgue / (2 * tb.W(d.y)));
    CHECK(d.bandwidth == 0.02);
    CHECK(d.std_error > 0.0);
  }
  // The default bandwidth follows the normal reference rule.
  const double h = default_bandwidth(s);
  CHECK(h == doctest::Approx(1.06 * std::sqrt(1 - 2 / pi) * std::pow(1e6, -0.2)).epsilon(0.01));
  CHECK(default_bandwidth(s, 0.5) == 0.5);
  const DensityEstimate dd = density_estimate(s, tb, 0.0, h);
  CHECK(std::abs(dd.value - 1 / std::sqrt(2 * pi)) <= 3 * dd.std_error);
}

TEST_CASE("speed-measure conversion uses 2 W(y)") {
  const EndpointSample s = simulate_paths(ex1(), 0.0, 1.0, 20000, 1e-2, 3);
  const MeasureTable tb = build_measures(ex1(), 100.0);
  for (double y : {0.0, 0.5, 1.5, 3.0}) {
    const DensityEstimate d = density_estimate(s, tb, y, 0.1);
    CHECK(d.value == d.lebesgue / (2 * tb.W(y)));
  }
}

TEST_CASE("halving dt stays inside the statistical band") {
  const EndpointSample& fine = bm_million();
  const EndpointSample coarse = simulate_paths_parallel(bm(), 0.0, 1.0, 1000000, 2e-3, 7);
  const MeasureTable tb = build_measures(bm(), 10.0);
  const DensityEstimate a = density_estimate(fine, tb, 0.0, 0.02);
  const DensityEstimate b = density_estimate(coarse, tb, 0.0, 0.02);
  CHECK(std::abs(a.value - b.value) <= 3 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("paths are reproducible and independent of the thread count") {
  const EndpointSample a = simulate_paths(ex1(), 0.5, 2.0, 3000, 1e-2, 11);
  const EndpointSample b = simulate_paths(ex1(), 0.5, 2.0, 3000, 1e-2, 11);
  CHECK(a.endpoints == b.endpoints);
  const int before = omp_get_max_threads();
  for (int threads : {1, 3, 8}) {
    omp_set_num_threads(threads);
    const EndpointSample p = simulate_paths_parallel(ex1(), 0.5, 2.0, 3000, 1e-2, 11);
    CHECK(p.endpoints == a.endpoints);
    CHECK(p.retries == a.retries);
  }
  omp_set_num_threads(before);
  const EndpointSample c = simulate_paths(ex1(), 0.5, 2.0, 3000, 1e-2, 12);
  CHECK(c.endpoints != a.endpoints);
  // Path i only depends on its own seed, so a prefix reproduces.
  const EndpointSample d = simulate_paths(ex1(), 0.5, 2.0, 100, 1e-2, 11);
  CHECK(std::equal(d.endpoints.begin(), d.endpoints.end(), a.endpoints.begin()));
  CHECK(path_seed(11, 0) != path_seed(11, 1));
  CHECK(path_seed(11, 5) == path_seed(11, 5));
}

TEST_CASE("sample bookkeeping") {
  const EndpointSample e = simulate_paths(ex1(), 0.0, 1.0, 0, 1e-3, 1);
  CHECK(e.endpoints.empty());
  CHECK(e.n_paths == 0);
  const EndpointSample s = simulate_paths(ex1(), 0.25, 1.0, 10, 0.03, 5);
  CHECK(s.dt == doctest::Approx(1.0 / 34).epsilon(1e-15));
  CHECK(s.t == 1.0);
  CHECK(s.x0 == 0.25);
  CHECK(s.seed == 5);
  CHECK(s.n_paths == 10);
}

TEST_CASE("Example 1 median grows diffusively") {
  const EndpointSample s = simulate_paths_parallel(ex1(), 0.0, 100.0, 4000, 1e-1, 2);
  std::vector<double> v = s.endpoints;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  const double med = v[v.size() / 2];
  CHECK(med >= 0.05 * std::sqrt(100.0));
  CHECK(med <= 10 * std::sqrt(100.0));
}

TEST_CASE("Monte Carlo against the PDE") {
  for (const auto& sp : {ex1(), ex3(-2.0)})
    for (double t : {1.0, 10.0}) {
      const double p = pde_at_zero(sp, t);
      const EndpointSample s = simulate_paths_parallel(sp, 0.0, t, 200000, t / 1000, 21);
      const MeasureTable tb = build_measures(sp, 20.0 * std::sqrt(t));
      const DensityEstimate d = density_estimate(s, tb, 0.0, default_bandwidth(s));
      CHECK(std::abs(d.value - p) <= 3 * d.std_error);
    }
}

TEST_CASE("singular drift points are stepped over without drift") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const DriftSpec thin = DriftSpec::custom(0.0, [nan](double x) { return x < 1.001 ? nan : 0.0; }, 1.0);
  const EndpointSample s = simulate_paths(thin, 1.0005, 1.0, 2000, 1e-2, 4);
  CHECK(s.retries > 0);
  for (double v : s.endpoints) CHECK(std::isfinite(v));
  const DriftSpec wide = DriftSpec::custom(0.0, [nan](double x) { return x < 50.0 ? nan : 0.0; }, 1.0);
  CHECK_THROWS_AS(simulate_paths(wide, 2.0, 1.0, 10, 1e-2, 4), NumericError);
  CHECK_THROWS_AS(simulate_paths_parallel(wide, 2.0, 1.0, 10, 1e-2, 4), NumericError);
}

TEST_CASE("Monte Carlo errors") {
  CHECK_THROWS_AS(simulate_paths(bm(), 0.0, 1.0, 10, 0.2, 1), ValidationError);
  CHECK_THROWS_AS(simulate_paths(bm(), 0.0, 1.0, 10, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(simulate_paths(bm(), -1.0, 1.0, 10, 0.01, 1), DomainError);
  CHECK_THROWS_AS(simulate_paths(bm(), 0.0, 0.0, 10, 0.01, 1), DomainError);
  const EndpointSample s = simulate_paths(bm(), 0.0, 1.0, 10, 0.01, 1);
  const MeasureTable tb = build_measures(bm(), 10.0);
  CHECK_THROWS_AS(density_estimate(s, tb, 11.0, 0.1), RangeError);
  CHECK_THROWS_AS(density_estimate(s, tb, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(density_estimate(s, tb, -1.0, 0.1), DomainError);
  const EndpointSample e = simulate_paths(bm(), 0.0, 1.0, 0, 0.01, 1);
  CHECK_THROWS_AS(density_estimate(e, tb, 0.0, 0.1), ValidationError);
  CHECK_THROWS_AS(default_bandwidth(e), ValidationError);
}

TEST_CASE("MC CSV") {
  std::vector<DensityEstimate> rows(1);
  rows[0].y = 0.5;
  rows[0].value = 0.25;
  rows[0].std_error = 0.125;
  std::ostringstream os;
  write_mc_csv(rows, os);
  CHECK(os.str() == "y,p_hat,std_err\n0.5,0.25,0.125\n");
}

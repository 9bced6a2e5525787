#include <exception>

#include "bessel_like/mc.hpp"

namespace bessel_like {

EndpointSample simulate_paths_parallel(const DriftSpec& spec, double x0, double t,
                                       std::size_t n_paths, double dt, std::uint64_t seed) {
  const auto setup = detail::path_setup(x0, t, dt);
  EndpointSample out{t, x0, std::vector<double>(n_paths), n_paths, setup.h, seed, 0};
  std::size_t retries = 0;
  std::exception_ptr failure;
  const auto n = static_cast<long long>(n_paths);
#pragma omp parallel for schedule(static) reduction(+ : retries)
  for (long long i = 0; i < n; ++i) {
    try {
      out.endpoints[i] = detail::simulate_one(spec, setup, path_seed(seed, i), retries);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  out.retries = retries;
  return out;
}

}  // namespace bessel_like

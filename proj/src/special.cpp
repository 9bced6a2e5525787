#include "bessel_like/special.hpp"

#include <cmath>
#include <numbers>

#include "bessel_like/error.hpp"

namespace bessel_like {

namespace {

void check(double nu, double z) {
  if (!(nu > -1.0)) throw ValidationError("modified_bessel_I needs nu > -1");
  if (!(z >= 0.0)) throw DomainError("modified_bessel_I needs z >= 0");
}

// Hankel expansion of e^{-z} I_nu(z) for large z, summed to the smallest term.
double hankel_scaled(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = -term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * z);
    if ((2.0 * k - 1) * (2.0 * k - 1) > mu && std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

double bessel_i_reduced(double nu, double z) {
  check(nu, z);
  const double q = 0.25 * z * z;
  double term = 1.0 / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double bessel_i_scaled(double nu, double z) {
  check(nu, z);
  if (z <= kBesselSeriesMax) {
    if (z == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 ? 0.0 : INFINITY);
    return bessel_i_reduced(nu, z) * std::exp(nu * std::log(0.5 * z) - z);
  }
  return hankel_scaled(nu, z);
}

double modified_bessel_I(double nu, double z) {
  check(nu, z);
  if (z <= kBesselSeriesMax) {
    if (z == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 ? 0.0 : INFINITY);
    return bessel_i_reduced(nu, z) * std::pow(0.5 * z, nu);
  }
  if (z > 700.0) throw RangeError("modified_bessel_I overflows; use bessel_i_scaled");
  return hankel_scaled(nu, z) * std::exp(z);
}

}  // namespace bessel_like

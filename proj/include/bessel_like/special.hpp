#pragma once

namespace bessel_like {

/// Modified Bessel function of the first kind I_nu(z), nu > -1, z >= 0.
double modified_bessel_I(double nu, double z);

/// e^{-z} I_nu(z); finite for every z.
double bessel_i_scaled(double nu, double z);

/// (z/2)^{-nu} I_nu(z) = sum_k (z/2)^{2k} / (k! Gamma(k + nu + 1)), smooth at z = 0.
/// Only meaningful on the series range (z <= kBesselSeriesMax).
double bessel_i_reduced(double nu, double z);

inline constexpr double kBesselSeriesMax = 25.0;

}  // namespace bessel_like

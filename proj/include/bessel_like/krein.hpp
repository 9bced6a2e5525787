#pragma once

// Green's function value h(s) = G_s(0,0), the Krein dual h* = 1/(s h), the
// spectral measures sigma and sigma*, and the Stieltjes/Tauberian utilities.

#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "bessel_like/density.hpp"
#include "bessel_like/measures.hpp"

namespace bessel_like {

enum class HMethod { ode_two_solution, laplace_of_density };

struct HSample {
  double s = 0.0;
  double h = 0.0;
  double h_star = 0.0;
  HMethod method = HMethod::ode_two_solution;
  /// max |log w(x) - log w(0)| over the checkpoints (ODE route only).
  double wronskian_drift = 0.0;
  /// psi(0) / psi(x_max) (ODE route only).
  double decay = 0.0;
  double x_max = 0.0;
};

/// Default truncation radius c / sqrt(s) of green_h.
inline constexpr double kGreenRadius = 16.0;

/// Riccati form of the two-solution construction: phi from the reflecting end,
/// psi backward from x_max. x_max = 0 picks min(table range, kGreenRadius / sqrt(s)).
HSample green_h(const MeasureTable& table, double s, double x_max = 0.0);

double dual_h_star(const HSample& sample);
double dual_h_star(double s, double h);

/// Green's value at 0 of the dual diffusion; table_dual built from spec.dual().
double h_bullet(const MeasureTable& table_dual, double s, double x_max = 0.0);

/// int_0^inf e^{-st} p(t;0,0) dt from a density field with source 0. Below the first
/// stored time the reflected short-time kernel 1/(W(0) sqrt(2 pi t)) is used; beyond the
/// last one p follows `tail_shape` (scaled to match), or stays constant if none is given.
HSample laplace_h(const DensityField& field, double s,
                  const std::function<double(double)>& tail_shape = {});

/// Step spectral function: atoms (lambda_k, w_k) plus a constant term of the
/// characteristic function (nonzero for sigma*, whose string starts with a gap).
struct SpectralStep {
  std::vector<double> lambda;
  std::vector<double> weight;
  double offset = 0.0;
  double x_max = 0.0;

  /// sum of weights with lambda_k <= lam.
  double sigma(double lam) const;
  /// offset + sum_k w_k / (s + lambda_k).
  double characteristic(double s) const;
  /// sum_k w_k exp(-lambda_k t).
  double laplace(double t) const;
};

/// Eigen-decomposition of the discrete d/dm d/ds on the grid.
SpectralStep spectral_sigma(const CanonicalGrid& grid);
/// Same on the dual string of `grid` (masses ds, gaps dm); needs a reflecting grid.
SpectralStep spectral_sigma_star(const CanonicalGrid& grid);

/// sum_k w_k / (lam + lambda_k)^(n+1).
double stieltjes_Hn(const SpectralStep& sigma, int n, double lam);

/// Gamma(n+1-alpha) Gamma(alpha+1) / Gamma(n+1).
double tauberian_constant(int n, double alpha);

void write_h_csv(std::span<const HSample> samples, std::ostream& os);
void write_sigma_csv(const SpectralStep& sigma, std::ostream& os);

}  // namespace bessel_like

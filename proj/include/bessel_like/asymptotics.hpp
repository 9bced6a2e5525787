#pragma once

// Exact Bessel transition density and the long-time predictors for each regime.

#include <functional>
#include <ostream>
#include <span>
#include <string>

#include "bessel_like/drift.hpp"
#include "bessel_like/measures.hpp"

namespace bessel_like {

/// Density of the Bessel process of dimension rho > 0 with respect to m(dy) = 2 y^{rho-1} dy.
double bessel_exact_density(double rho, double t, double x, double y);

/// 1 / (2^{rho/2} Gamma(rho/2) t^{rho/2}), the large-t value of the Bessel density.
double bessel_large_t(double rho, double t);

enum class PredictionKind {
  leading_density,  // p(t) itself
  correction,       // p(t) - 1/m_inf
};

struct AsymptoticPrediction {
  Regime regime = Regime::indeterminate;
  PredictionKind kind = PredictionKind::leading_density;
  std::string provenance;
  std::function<double(double)> value_at;
  double t = 0.0;
  double value = 0.0;
};

/// Leading term from the exact m of `table`; m(sqrt t) beyond the table uses the
/// analytic form of the spec. Throws ValidationError for an indeterminate regime.
AsymptoticPrediction predict(const RegimeReport& report, const MeasureTable& table, double t);

struct ClosedFormParams {
  double alpha = 0.0;
  double beta = 0.5;
  /// Limit of the integral of the perturbation eta.
  double A = 0.0;
  /// Needed by the correction case of ex3.
  double m_inf = 0.0;
};

/// Displayed asymptote of the worked examples (bessel excluded); t > e.
/// Ex3 with alpha < -1 returns the correction p - 1/m_inf.
double example_closed_form(ExampleId id, const ClosedFormParams& params, double t);

/// (2^{rho/2+1} / ((2 - rho) Gamma((2 - rho)/2)^2)) sqrt(lam) W(1/sqrt(lam)).
double sigma_star_asymptote(const MeasureTable& table, double rho, double lam);

/// The rho < 0 correction written through sqrt(t) W(sqrt(t)) instead of m; used as a cross-check.
double rho_neg_correction_via_W(const MeasureTable& table, double rho, double m_inf, double t);

/// Rows t,prediction,provenance.
void write_prediction_csv(std::span<const AsymptoticPrediction> rows, std::ostream& os);

}  // namespace bessel_like

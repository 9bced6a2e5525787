#include "bessel_like/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "bessel_like/csv.hpp"
#include "bessel_like/error.hpp"
#include "bessel_like/special.hpp"

namespace bessel_like {

namespace {

double m_at(const MeasureTable& table, double x) {
  if (x <= table.x_max()) return table.m(x);
  if (auto m = table.spec().analytic_m(x)) return *m;
  throw RangeError("predict: sqrt(t) beyond the measure table and no analytic m");
}

double W_at(const MeasureTable& table, double x) {
  if (x <= table.x_max()) return table.W(x);
  if (auto lw = table.spec().analytic_log_W(x)) return std::exp(*lw);
  throw RangeError("W beyond the measure table and no analytic form");
}

// 2^{|rho|/2} Gamma(|rho|/2 + 1).
double regime_coefficient(double rho) {
  const double a = 0.5 * std::abs(rho);
  return std::pow(2.0, a) * std::tgamma(a + 1.0);
}

}  // namespace

double bessel_exact_density(double rho, double t, double x, double y) {
  if (!(rho > 0.0)) throw ValidationError("bessel_exact_density needs rho > 0");
  if (!(t > 0.0)) throw DomainError("bessel_exact_density needs t > 0");
  if (!(x >= 0.0 && y >= 0.0)) throw DomainError("bessel_exact_density needs x, y >= 0");
  const double nu = 0.5 * rho - 1.0;
  const double z = x * y / t;
  if (z <= kBesselSeriesMax) {
    // (xy)^{-nu} I_nu(z) = (2t)^{-nu} (z/2)^{-nu} I_nu(z).
    return std::exp(-(x * x + y * y) / (2.0 * t) - (nu + 1.0) * std::log(2.0 * t)) *
           bessel_i_reduced(nu, z);
  }
  return std::exp(-(x - y) * (x - y) / (2.0 * t) - nu * std::log(x * y)) / (2.0 * t) *
         bessel_i_scaled(nu, z);
}

double bessel_large_t(double rho, double t) {
  if (!(rho > 0.0)) throw ValidationError("bessel_large_t needs rho > 0");
  return 1.0 / (std::pow(2.0, 0.5 * rho) * std::tgamma(0.5 * rho) * std::pow(t, 0.5 * rho));
}

AsymptoticPrediction predict(const RegimeReport& report, const MeasureTable& table, double t) {
  if (!(t > 0.0)) throw DomainError("predict needs t > 0");
  AsymptoticPrediction out;
  out.regime = report.regime;
  out.t = t;
  const double c = regime_coefficient(report.rho);
  switch (report.regime) {
    case Regime::rho_pos:
    case Regime::rho_zero_minf:
      out.kind = PredictionKind::leading_density;
      out.provenance = "1/(2^(rho/2) Gamma(rho/2+1) m(sqrt t))";
      out.value_at = [table, c](double tt) { return 1.0 / (c * m_at(table, std::sqrt(tt))); };
      break;
    case Regime::rho_neg:
    case Regime::rho_zero_finite: {
      if (!(report.m_inf > 0.0) || !std::isfinite(report.m_inf))
        throw ValidationError("predict: finite-mass regime without a total mass");
      out.kind = PredictionKind::correction;
      out.provenance = "(1 - m(sqrt t)/m_inf)/(2^(|rho|/2) Gamma(|rho|/2+1) m_inf)";
      const double M = report.m_inf;
      out.value_at = [table, c, M](double tt) {
        return (1.0 - m_at(table, std::sqrt(tt)) / M) / (c * M);
      };
      break;
    }
    case Regime::indeterminate:
      throw ValidationError("predict: regime indeterminate");
  }
  out.value = out.value_at(t);
  return out;
}

double example_closed_form(ExampleId id, const ClosedFormParams& p, double t) {
  if (!(t > std::exp(1.0))) throw DomainError("example_closed_form needs t > e");
  const double L = std::log(std::sqrt(t));
  switch (id) {
    case ExampleId::ex1:
      return 0.5 * std::exp(-p.A) / L;
    case ExampleId::ex2:
      if (!(p.beta > 0.0 && p.beta < 1.0)) throw ValidationError("ex2 needs 0 < beta < 1");
      if (p.alpha == 0.0) throw ValidationError("ex2 needs alpha != 0");
      if (p.alpha < 0.0) throw ValidationError("ex2 closed form unsupported for alpha < 0");
      return 0.5 * p.alpha * std::exp(-p.A) * std::pow(L, -p.beta) *
             std::exp(-p.alpha / (1.0 - p.beta) * std::pow(L, 1.0 - p.beta));
    case ExampleId::ex3:
      if (p.alpha > -1.0) return 0.5 * (p.alpha + 1.0) * std::exp(-(p.A + 1.0)) * std::pow(L, -(p.alpha + 1.0));
      if (p.alpha == -1.0) {
        if (!(std::log(L) > 0.0)) throw DomainError("ex3 with alpha = -1 needs log log sqrt(t) > 0");
        return 0.5 * std::exp(-(p.A + 1.0)) / std::log(L);
      }
      if (!(p.m_inf > 0.0)) throw ValidationError("ex3 with alpha < -1 needs m_inf");
      return -2.0 / (p.alpha + 1.0) * std::exp(p.A + 1.0) * std::pow(L, p.alpha + 1.0) /
             (p.m_inf * p.m_inf);
    case ExampleId::bessel:
      break;
  }
  throw ValidationError("example_closed_form: no displayed asymptote for bessel");
}

double sigma_star_asymptote(const MeasureTable& table, double rho, double lam) {
  if (!(rho < 2.0)) throw ValidationError("sigma_star_asymptote needs rho < 2");
  if (!(lam > 0.0)) throw DomainError("sigma_star_asymptote needs lam > 0");
  const double g = std::tgamma(0.5 * (2.0 - rho));
  const double coef = std::pow(2.0, 0.5 * rho + 1.0) / ((2.0 - rho) * g * g);
  return coef * std::sqrt(lam) * W_at(table, 1.0 / std::sqrt(lam));
}

double rho_neg_correction_via_W(const MeasureTable& table, double rho, double m_inf, double t) {
  if (!(rho < 0.0)) throw ValidationError("rho_neg_correction_via_W needs rho < 0");
  const double r = std::sqrt(t);
  const double coef = std::pow(2.0, 0.5 * rho + 1.0) / (std::abs(rho) * std::tgamma(0.5 * (2.0 - rho)));
  return coef * r * W_at(table, r) / (m_inf * m_inf);
}

void write_prediction_csv(std::span<const AsymptoticPrediction> rows, std::ostream& os) {
  os << "t,prediction,provenance\n";
  for (const auto& r : rows) os << csv::num(r.t) << ',' << csv::num(r.value) << ",\"" << r.provenance << "\"\n";
}

}  // namespace bessel_like

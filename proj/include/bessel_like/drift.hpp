#pragma once

// Drift model b(x) = (rho - 1 + eps(x)) / x * 1(x >= cutoff) + eta(x) of a
// diffusion on [0, inf) with generator (1/2)(d^2/dx^2 + b(x) d/dx) and a
// reflecting boundary at 0.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bessel_like {

enum class Family {
  bessel,      // pure Bessel drift (rho - 1)/x, truncated below 1 when rho <= 0
  ex1,         // -1/x above 1
  ex2,         // (-1/x + alpha/(x (log x)^beta)) above 1
  ex3,         // (-1/x + alpha/(x log x)) above e
  parametric,  // any member of the (rho, eps, cutoff) family, e.g. a dual
  target_m,    // drift reconstructed from a prescribed speed measure
  custom,      // user supplied eps handle
};

enum class EpsKind { none, log_power, log_inverse, custom };

enum class MassStatus { finite, infinite, indeterminate };

/// Integrable perturbation eta with the declared limit A of its integral from 1.
struct Perturbation {
  std::function<double(double)> eta;
  double limit = 0.0;
  /// Optional closed form of the integral of eta from 1 to x.
  std::function<double(double)> antiderivative;
  /// Points where eta is not smooth; quadrature splits there.
  std::vector<double> breakpoints;
};

/// eta = A / (hi - lo) on [lo, hi], zero elsewhere. Integral converges to A.
Perturbation box_perturbation(double A, double lo, double hi);

/// Speed-measure profile m(t) and its first two derivatives.
struct TargetMeasure {
  std::function<double(double)> m;
  std::function<double(double)> dm;
  std::function<double(double)> d2m;
  /// Points where m'' jumps.
  std::vector<double> breakpoints;
};

struct TargetOptions {
  bool autoscale = false;
  double rho = 0.0;
};

class DriftSpec {
 public:
  Family family() const noexcept { return family_; }
  double rho() const noexcept { return rho_; }
  EpsKind eps_kind() const noexcept { return eps_kind_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double cutoff() const noexcept { return cutoff_; }
  bool closed_indicator() const noexcept { return closed_indicator_; }
  bool has_eta() const noexcept { return static_cast<bool>(eta_.eta); }
  double eta_limit() const noexcept { return eta_.limit; }
  /// Multiplicative constant applied to a reconstructed target measure.
  double target_scale() const noexcept { return target_scale_; }

  /// b(x) without argument checks; x must be positive.
  double b_unchecked(double x) const;
  /// b(e^L) with eps evaluated from L, exact next to a cutoff of 1 where x rounds to 1.
  double b_of_log(double L) const;
  double eps(double x) const;
  double eta(double x) const;

  /// log W(x) = integral of b from 1 to x, closed form when available.
  double log_W(double x) const;
  std::optional<double> analytic_log_W(double x) const;
  /// log W as a function of log x; lets tails be integrated far past DBL_MAX.
  std::optional<double> analytic_log_W_of_log(double log_x) const;
  /// log(x W(x)) as a function of log x, without the cancellation of log W + log x.
  std::optional<double> analytic_log_xW_of_log(double log_x) const;
  /// log W by quadrature even when a closed form exists.
  double quadrature_log_W(double x) const;
  /// m(x) = 2 * integral of W from 0 to x.
  std::optional<double> analytic_m(double x) const;
  std::optional<MassStatus> analytic_mass_status() const;
  std::optional<double> analytic_m_infinity() const;

  /// True when W and 1/W are both integrable at 0 (regular reflecting boundary).
  bool regular_at_zero() const;
  /// True when 1/W is integrable at 0; false means 0 is an entrance boundary.
  bool scale_finite_at_zero() const;
  /// Sorted positive points where b is not smooth.
  std::vector<double> breakpoints() const;

  /// Drift -b, the generator (1/2)(d^2/dx^2 - b d/dx).
  DriftSpec dual() const;
  DriftSpec with_eta(Perturbation eta) const;

  /// Built-in parametric families; throws ValidationError on bad parameters.
  static DriftSpec parametric(Family family, double rho, EpsKind eps, double alpha, double beta,
                              double cutoff, bool closed_indicator);
  static DriftSpec custom(double rho, std::function<double(double)> eps, double cutoff,
                          std::vector<double> breakpoints = {});

 private:
  friend DriftSpec from_target_m(const TargetMeasure&, const TargetOptions&);

  double F(double u) const;        // antiderivative of (rho-1+eps)/u, up to a constant
  double F_of_log(double L) const;
  double eps_part_of_log(double L) const;
  double eps_at_log(double L) const;
  double clamp(double u) const { return cutoff_ > 0.0 && u < cutoff_ ? cutoff_ : u; }
  bool on(double x) const { return closed_indicator_ ? x >= cutoff_ : x > cutoff_; }

  Family family_ = Family::parametric;
  double rho_ = 1.0;
  EpsKind eps_kind_ = EpsKind::none;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double cutoff_ = 0.0;
  bool closed_indicator_ = true;
  std::function<double(double)> eps_fn_;
  Perturbation eta_;
  double eta_sign_ = 1.0;

  // target_m family
  TargetMeasure target_;
  double target_scale_ = 1.0;
  double target_sign_ = 1.0;
};

enum class ExampleId { bessel, ex1, ex2, ex3 };

struct ExampleParams {
  std::optional<double> rho;
  std::optional<double> alpha;
  std::optional<double> beta;
};

double eval_b(const DriftSpec& spec, double x);
double integral_b(const DriftSpec& spec, double x);
DriftSpec make_example(ExampleId id, const ExampleParams& params);

/// Drift whose speed measure reproduces m (exactly when m'(1) = 2).
DriftSpec from_target_m(const TargetMeasure& m, const TargetOptions& opts = {});

enum class Regime { rho_pos, rho_zero_minf, rho_zero_finite, rho_neg, indeterminate };

struct RegimeReport {
  double rho = 0.0;
  bool m_inf_finite = false;
  Regime regime = Regime::indeterminate;
  MassStatus mass_status = MassStatus::indeterminate;
  /// Total mass when finite.
  double m_inf = 0.0;
};

Regime regime_of(double rho, bool m_inf_finite);
RegimeReport classify(const DriftSpec& spec, double tol = 1e-10);
std::string_view regime_name(Regime r);

/// key=value block; exact round trip for the parametric families.
std::string to_text(const DriftSpec& spec);
DriftSpec spec_from_text(std::string_view text);
/// Same as spec_from_text but from already split pairs (used by the config parser).
DriftSpec spec_from_pairs(const std::vector<std::pair<std::string, std::string>>& kv);

std::string_view family_name(Family f);

}  // namespace bessel_like

#include "bessel_like/drift.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "bessel_like/error.hpp"
#include "bessel_like/measures.hpp"
#include "bessel_like/quadrature.hpp"

namespace bessel_like {

namespace {

constexpr double kIntegralTol = 1e-12;

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

bool is_zero_rho(double rho) { return std::abs(rho) <= 1e-12; }

}  // namespace

Perturbation box_perturbation(double A, double lo, double hi) {
  if (!(lo >= 0.0 && hi > lo)) throw ValidationError("box perturbation needs 0 <= lo < hi");
  const double level = A / (hi - lo);
  Perturbation p;
  p.limit = A;
  p.eta = [=](double x) { return x >= lo && x <= hi ? level : 0.0; };
  p.antiderivative = [=](double x) {
    auto cum = [&](double u) { return level * (std::clamp(u, lo, hi) - lo); };
    return cum(x) - cum(1.0);
  };
  p.breakpoints = {lo, hi};
  return p;
}

// ---------------------------------------------------------------------------
// evaluation

double DriftSpec::eps(double x) const {
  if (family_ == Family::target_m || !on(x)) return 0.0;
  switch (eps_kind_) {
    case EpsKind::none:
      return 0.0;
    case EpsKind::log_power:
      return alpha_ / std::pow(std::log(x), beta_);
    case EpsKind::log_inverse:
      return alpha_ / std::log(x);
    case EpsKind::custom:
      return eps_fn_(x);
  }
  return 0.0;
}

double DriftSpec::eta(double x) const { return has_eta() ? eta_sign_ * eta_.eta(x) : 0.0; }

double DriftSpec::b_unchecked(double x) const {
  double base = 0.0;
  if (family_ == Family::target_m) {
    // b = -1/x + f''(log x) / (f'(log x) x) with f(u) = m(e^u).
    const double d1 = target_.dm(x), d2 = target_.d2m(x);
    const double f1 = x * d1;
    const double f2 = x * d1 + x * x * d2;
    base = target_sign_ * (-1.0 / x + f2 / (f1 * x));
  } else if (on(x)) {
    const double c = rho_ - 1.0 + eps(x);
    base = c == 0.0 ? 0.0 : c / x;
  }
  return base + eta(x);
}

double DriftSpec::b_of_log(double L) const {
  const double x = std::exp(L);
  if (family_ == Family::target_m || eps_kind_ == EpsKind::custom || cutoff_ <= 0.0) return b_unchecked(x);
  const double Lc = std::log(cutoff_);
  if (closed_indicator_ ? L < Lc : L <= Lc) return eta(x);
  const double c = rho_ - 1.0 + eps_at_log(L);
  return (c == 0.0 ? 0.0 : c / x) + eta(x);
}

double DriftSpec::eps_part_of_log(double L) const {
  switch (eps_kind_) {
    case EpsKind::none:
    case EpsKind::custom:
      return 0.0;
    case EpsKind::log_power:
      return alpha_ * std::pow(L, 1.0 - beta_) / (1.0 - beta_);
    case EpsKind::log_inverse:
      return alpha_ * std::log(L);
  }
  return 0.0;
}

double DriftSpec::F_of_log(double L) const { return (rho_ - 1.0) * L + eps_part_of_log(L); }

double DriftSpec::F(double u) const { return F_of_log(std::log(u)); }

std::optional<double> DriftSpec::analytic_log_W(double x) const {
  double eta_part = 0.0;
  if (has_eta()) {
    if (!eta_.antiderivative) return std::nullopt;
    eta_part = eta_sign_ * eta_.antiderivative(x);
  }
  if (family_ == Family::target_m)
    return target_sign_ * std::log(target_.dm(x) / target_.dm(1.0)) + eta_part;
  if (eps_kind_ == EpsKind::custom) return std::nullopt;
  return F(clamp(x)) - F(clamp(1.0)) + eta_part;
}

std::optional<double> DriftSpec::analytic_log_W_of_log(double log_x) const {
  if (has_eta() || family_ == Family::target_m || eps_kind_ == EpsKind::custom)
    return std::nullopt;
  const double Lc = cutoff_ > 0.0 ? std::log(cutoff_) : -std::numeric_limits<double>::infinity();
  return F_of_log(std::max(log_x, Lc)) - F_of_log(std::max(0.0, Lc));
}

std::optional<double> DriftSpec::analytic_log_xW_of_log(double log_x) const {
  if (has_eta() || family_ == Family::target_m || eps_kind_ == EpsKind::custom)
    return std::nullopt;
  const double Lc = cutoff_ > 0.0 ? std::log(cutoff_) : -std::numeric_limits<double>::infinity();
  const double base = F_of_log(std::max(0.0, Lc));
  if (log_x <= Lc) return F_of_log(Lc) - base + log_x;
  return rho_ * log_x + (eps_part_of_log(log_x) - base);
}

double DriftSpec::eps_at_log(double L) const {
  switch (eps_kind_) {
    case EpsKind::none:
      return 0.0;
    case EpsKind::log_power:
      return alpha_ / std::pow(L, beta_);
    case EpsKind::log_inverse:
      return alpha_ / L;
    case EpsKind::custom:
      return eps_fn_(std::exp(L));
  }
  return 0.0;
}

double DriftSpec::quadrature_log_W(double x) const {
  if (!(x > 0.0)) throw DomainError("integral of b requires x > 0");
  std::vector<double> pts = breakpoints();
  pts.push_back(1.0);
  pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  const double lo = std::min(1.0, x), hi = std::max(1.0, x);
  quad::Result total;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    if (a < lo || b > hi || !(b > a)) continue;
    // Above the cutoff the power part is integrated in log x, where eps is exact.
    const bool log_form = family_ != Family::target_m && on(0.5 * (a + b)) && a > 0.0;
    quad::Result r;
    if (log_form) {
      auto g = [this](double L) {
        const double u = std::exp(L);
        return rho_ - 1.0 + eps_at_log(L) + eta(u) * u;
      };
      r = quad::integrate(g, std::log(a), std::log(b), kIntegralTol);
    } else {
      auto f = [this](double u) { return b_unchecked(u); };
      r = quad::integrate(f, a, b, kIntegralTol);
    }
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
  }
  if (!std::isfinite(total.value) || total.error > 1e3 * kIntegralTol * std::max(total.l1, 1e-300)) {
    std::ostringstream os;
    os << "integral of b from 1 to " << x << " did not converge; achieved error " << total.error
       << " relative to L1 " << total.l1;
    throw NumericError(os.str());
  }
  return x >= 1.0 ? total.value : -total.value;
}

double DriftSpec::log_W(double x) const {
  if (auto a = analytic_log_W(x)) return *a;
  return quadrature_log_W(x);
}

std::optional<double> DriftSpec::analytic_m(double x) const {
  if (has_eta() || eps_kind_ == EpsKind::custom) return std::nullopt;
  if (family_ == Family::target_m) {
    if (target_sign_ < 0.0) return std::nullopt;
    return target_scale_ * (target_.m(x) - target_.m(0.0));
  }
  if (x <= 0.0) return 0.0;
  const double rho = rho_;
  if (cutoff_ == 0.0) return 2.0 / rho * std::pow(x, rho);  // pure power, rho > 0

  const double c = cutoff_;
  const double base = clamp(1.0);
  const double W0 = std::exp(F(c) - F(base));
  if (x <= c) return 2.0 * W0 * x;
  const double head = 2.0 * W0 * c;
  switch (eps_kind_) {
    case EpsKind::none: {
      const double scale = std::pow(base, 1.0 - rho);
      if (is_zero_rho(rho)) return head + 2.0 * scale * std::log(x / c);
      return head + 2.0 * scale * (std::pow(x, rho) - std::pow(c, rho)) / rho;
    }
    case EpsKind::log_inverse: {
      if (!is_zero_rho(rho)) return std::nullopt;
      const double Lc = std::log(c), L = std::log(x);
      const double a = alpha_;
      const double pre = c * std::pow(Lc, -a);
      if (std::abs(a + 1.0) < 1e-14) return head + 2.0 * pre * std::log(L / Lc);
      return head + 2.0 * pre * (std::pow(L, a + 1.0) - std::pow(Lc, a + 1.0)) / (a + 1.0);
    }
    case EpsKind::log_power: {
      if (!is_zero_rho(rho) || c != 1.0 || alpha_ >= 0.0) return std::nullopt;
      const double p = 1.0 - beta_;
      const double k = -alpha_ / p;
      const double L = std::log(x);
      const double J = std::pow(k, -1.0 / p) / p * boost::math::tgamma_lower(1.0 / p, k * std::pow(L, p));
      return head + 2.0 * J;
    }
    case EpsKind::custom:
      break;
  }
  return std::nullopt;
}

std::optional<MassStatus> DriftSpec::analytic_mass_status() const {
  if (family_ == Family::target_m) return std::nullopt;
  if (rho_ > 1e-12) return MassStatus::infinite;
  if (rho_ < -1e-12) return MassStatus::finite;
  switch (eps_kind_) {
    case EpsKind::none:
      return MassStatus::infinite;
    case EpsKind::log_inverse:
      return alpha_ < -1.0 ? MassStatus::finite : MassStatus::infinite;
    case EpsKind::log_power:
      return alpha_ < 0.0 ? MassStatus::finite : MassStatus::infinite;
    case EpsKind::custom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> DriftSpec::analytic_m_infinity() const {
  if (has_eta() || family_ == Family::target_m || eps_kind_ == EpsKind::custom) return std::nullopt;
  if (analytic_mass_status() != MassStatus::finite || cutoff_ == 0.0) return std::nullopt;
  const double c = cutoff_;
  const double base = clamp(1.0);
  const double W0 = std::exp(F(c) - F(base));
  const double head = 2.0 * W0 * c;
  switch (eps_kind_) {
    case EpsKind::none:
      return head + 2.0 * std::pow(base, 1.0 - rho_) * std::pow(c, rho_) / std::abs(rho_);
    case EpsKind::log_inverse:
      if (!is_zero_rho(rho_)) return std::nullopt;
      return head + 2.0 * c * std::log(c) / std::abs(alpha_ + 1.0);
    case EpsKind::log_power: {
      if (!is_zero_rho(rho_) || c != 1.0) return std::nullopt;
      const double p = 1.0 - beta_;
      const double k = -alpha_ / p;
      return head + 2.0 * std::pow(k, -1.0 / p) * std::tgamma(1.0 + 1.0 / p);
    }
    case EpsKind::custom:
      break;
  }
  return std::nullopt;
}

bool DriftSpec::regular_at_zero() const {
  if (family_ == Family::target_m || cutoff_ > 0.0) return true;
  return rho_ > 0.0 && rho_ < 2.0;
}

bool DriftSpec::scale_finite_at_zero() const {
  if (family_ == Family::target_m || cutoff_ > 0.0) return true;
  return rho_ < 2.0;
}

std::vector<double> DriftSpec::breakpoints() const {
  std::vector<double> out;
  if (family_ != Family::target_m && cutoff_ > 0.0) out.push_back(cutoff_);
  for (double p : eta_.breakpoints)
    if (p > 0.0) out.push_back(p);
  if (family_ == Family::target_m)
    for (double p : target_.breakpoints)
      if (p > 0.0) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// construction

DriftSpec DriftSpec::parametric(Family family, double rho, EpsKind eps, double alpha, double beta,
                                double cutoff, bool closed_indicator) {
  if (!std::isfinite(rho) || !std::isfinite(alpha) || !std::isfinite(beta) ||
      !std::isfinite(cutoff))
    throw ValidationError("drift parameters must be finite");
  if (cutoff < 0.0) throw ValidationError("cutoff must be >= 0");
  if (eps == EpsKind::custom) throw ValidationError("use DriftSpec::custom for eps handles");
  if (cutoff == 0.0) {
    if (eps != EpsKind::none) throw ValidationError("log perturbations need a cutoff >= 1");
    if (rho <= 0.0)
      throw ValidationError("pure Bessel drift with rho <= 0 makes 0 non-regular; use cutoff 1");
  }
  if (eps == EpsKind::log_power) {
    if (cutoff < 1.0) throw ValidationError("alpha/(log x)^beta needs cutoff >= 1");
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("beta must satisfy 0 < beta < 1");
  }
  if (eps == EpsKind::log_inverse && cutoff <= 1.0)
    throw ValidationError("alpha/log x needs cutoff > 1");
  DriftSpec s;
  s.family_ = family;
  s.rho_ = rho;
  s.eps_kind_ = eps;
  s.alpha_ = eps == EpsKind::none ? 0.0 : alpha;
  s.beta_ = eps == EpsKind::log_power ? beta : 0.0;
  s.cutoff_ = cutoff;
  s.closed_indicator_ = closed_indicator;
  return s;
}

DriftSpec DriftSpec::custom(double rho, std::function<double(double)> eps, double cutoff,
                            std::vector<double> breakpoints) {
  if (!eps) throw ValidationError("custom eps handle is empty");
  if (!(cutoff > 0.0)) throw ValidationError("custom drift needs a positive cutoff");
  DriftSpec s;
  s.family_ = Family::custom;
  s.rho_ = rho;
  s.eps_kind_ = EpsKind::custom;
  s.eps_fn_ = std::move(eps);
  s.cutoff_ = cutoff;
  s.closed_indicator_ = true;
  s.eta_.breakpoints = std::move(breakpoints);
  return s;
}

DriftSpec DriftSpec::dual() const {
  DriftSpec d = *this;
  d.eta_sign_ = -eta_sign_;
  if (family_ == Family::target_m) {
    d.target_sign_ = -target_sign_;
    d.rho_ = 2.0 - rho_;
    return d;
  }
  d.rho_ = 2.0 - rho_;
  d.alpha_ = -alpha_;
  if (eps_kind_ == EpsKind::custom) {
    auto f = eps_fn_;
    d.eps_fn_ = [f](double x) { return -f(x); };
  }
  if (family_ != Family::bessel && family_ != Family::custom) d.family_ = Family::parametric;
  return d;
}

DriftSpec DriftSpec::with_eta(Perturbation eta) const {
  if (!eta.eta) throw ValidationError("perturbation handle is empty");
  if (!std::isfinite(eta.limit)) throw ValidationError("perturbation limit A must be finite");
  DriftSpec s = *this;
  s.eta_ = std::move(eta);
  s.eta_sign_ = 1.0;
  return s;
}

double eval_b(const DriftSpec& spec, double x) {
  if (!(x > 0.0)) throw DomainError("b(x) requires x > 0");
  return spec.b_unchecked(x);
}

double integral_b(const DriftSpec& spec, double x) {
  if (!(x > 0.0)) throw DomainError("integral of b requires x > 0");
  return spec.log_W(x);
}

DriftSpec make_example(ExampleId id, const ExampleParams& params) {
  switch (id) {
    case ExampleId::bessel: {
      if (!params.rho) throw ValidationError("bessel example requires rho");
      const double rho = *params.rho;
      return DriftSpec::parametric(Family::bessel, rho, EpsKind::none, 0.0, 0.0,
                                   rho > 0.0 ? 0.0 : 1.0, true);
    }
    case ExampleId::ex1:
      return DriftSpec::parametric(Family::ex1, 0.0, EpsKind::none, 0.0, 0.0, 1.0, true);
    case ExampleId::ex2: {
      if (!params.alpha || !params.beta) throw ValidationError("ex2 requires alpha and beta");
      if (*params.alpha == 0.0) throw ValidationError("ex2 requires alpha != 0");
      if (!(*params.beta > 0.0 && *params.beta < 1.0))
        throw ValidationError("ex2 requires 0 < beta < 1");
      return DriftSpec::parametric(Family::ex2, 0.0, EpsKind::log_power, *params.alpha,
                                   *params.beta, 1.0, false);
    }
    case ExampleId::ex3: {
      if (!params.alpha) throw ValidationError("ex3 requires alpha");
      return DriftSpec::parametric(Family::ex3, 0.0, EpsKind::log_inverse, *params.alpha, 0.0,
                                   std::numbers::e, false);
    }
  }
  throw ValidationError("unknown example id");
}

DriftSpec from_target_m(const TargetMeasure& m, const TargetOptions& opts) {
  if (!m.m || !m.dm || !m.d2m) throw ValidationError("target measure needs m, m', m''");
  const double d1 = m.dm(1.0);
  if (!(d1 > 0.0) || !std::isfinite(d1)) throw ValidationError("target m'(1) must be positive");
  double scale = 1.0;
  if (std::abs(d1 - 2.0) > 1e-12 * 2.0) {
    if (!opts.autoscale)
      throw ValidationError("target m'(1) = " + fmt_double(d1) +
                            " != 2; enable autoscaling or renormalise m");
    scale = 2.0 / d1;
  }
  // Monotonicity: m' > 0 on a wide geometric sample.
  for (int k = -60; k <= 120; ++k) {
    const double x = std::pow(10.0, k / 10.0);
    const double v = m.dm(x);
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("target m is not strictly increasing near x = " + fmt_double(x));
  }
  DriftSpec s;
  s.family_ = Family::target_m;
  s.rho_ = opts.rho;
  s.eps_kind_ = EpsKind::none;
  s.cutoff_ = 0.0;
  s.target_ = m;
  s.target_scale_ = scale;
  return s;
}

// ---------------------------------------------------------------------------
// classification

Regime regime_of(double rho, bool m_inf_finite) {
  if (rho > 1e-12) return Regime::rho_pos;
  if (rho < -1e-12) return Regime::rho_neg;
  return m_inf_finite ? Regime::rho_zero_finite : Regime::rho_zero_minf;
}

RegimeReport classify(const DriftSpec& spec, double tol) {
  RegimeReport r;
  r.rho = spec.rho();
  const MassResult mass = m_infinity(spec, tol);
  r.mass_status = mass.status;
  if (mass.status == MassStatus::indeterminate) {
    r.regime = Regime::indeterminate;
    return r;
  }
  r.m_inf_finite = mass.status == MassStatus::finite;
  r.m_inf = r.m_inf_finite ? mass.value : std::numeric_limits<double>::infinity();
  r.regime = regime_of(r.rho, r.m_inf_finite);
  if ((r.regime == Regime::rho_pos && r.m_inf_finite) ||
      (r.regime == Regime::rho_neg && !r.m_inf_finite))
    r.regime = Regime::indeterminate;
  return r;
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::rho_pos: return "rho_pos";
    case Regime::rho_zero_minf: return "rho_zero_minf";
    case Regime::rho_zero_finite: return "rho_zero_finite";
    case Regime::rho_neg: return "rho_neg";
    case Regime::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

// ---------------------------------------------------------------------------
// serialization

std::string_view family_name(Family f) {
  switch (f) {
    case Family::bessel: return "bessel";
    case Family::ex1: return "ex1";
    case Family::ex2: return "ex2";
    case Family::ex3: return "ex3";
    case Family::parametric: return "parametric";
    case Family::target_m: return "target_m";
    case Family::custom: return "custom";
  }
  return "custom";
}

namespace {

std::string_view eps_name(EpsKind k) {
  switch (k) {
    case EpsKind::none: return "none";
    case EpsKind::log_power: return "log_power";
    case EpsKind::log_inverse: return "log_inverse";
    case EpsKind::custom: return "custom";
  }
  return "custom";
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw ValidationError("spec key '" + key + "' has non-numeric value '" + v + "'");
  return out;
}

}  // namespace

std::string to_text(const DriftSpec& spec) {
  if (spec.family() == Family::target_m || spec.family() == Family::custom ||
      spec.eps_kind() == EpsKind::custom || spec.has_eta())
    throw ValidationError("only built-in parametric drifts can be serialized");
  std::ostringstream os;
  os << "family=" << family_name(spec.family()) << '\n';
  os << "rho=" << fmt_double(spec.rho()) << '\n';
  os << "eps=" << eps_name(spec.eps_kind()) << '\n';
  os << "alpha=" << fmt_double(spec.alpha()) << '\n';
  os << "beta=" << fmt_double(spec.beta()) << '\n';
  os << "cutoff=" << fmt_double(spec.cutoff()) << '\n';
  os << "indicator=" << (spec.closed_indicator() ? "closed" : "open") << '\n';
  return os.str();
}

DriftSpec spec_from_pairs(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : kv) {
    static const char* known[] = {"family", "rho", "eps", "alpha", "beta", "cutoff", "indicator"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* s) { return k == s; }) ==
        std::end(known))
      throw ValidationError("unknown spec key '" + k + "'");
    if (!m.emplace(k, v).second) throw ValidationError("duplicate spec key '" + k + "'");
  }
  const auto fam_it = m.find("family");
  if (fam_it == m.end()) throw ValidationError("spec needs a family key");
  const std::string fam = fam_it->second;
  auto num = [&](const char* key) -> std::optional<double> {
    auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    return parse_double(key, it->second);
  };

  Family family{};
  DriftSpec base;
  if (fam == "bessel") {
    family = Family::bessel;
    base = make_example(ExampleId::bessel, {num("rho"), std::nullopt, std::nullopt});
  } else if (fam == "ex1") {
    family = Family::ex1;
    base = make_example(ExampleId::ex1, {});
  } else if (fam == "ex2") {
    family = Family::ex2;
    base = make_example(ExampleId::ex2, {std::nullopt, num("alpha"), num("beta")});
  } else if (fam == "ex3") {
    family = Family::ex3;
    base = make_example(ExampleId::ex3, {std::nullopt, num("alpha"), std::nullopt});
  } else if (fam == "parametric") {
    family = Family::parametric;
    if (!num("rho") || !num("cutoff")) throw ValidationError("parametric spec needs rho and cutoff");
    base = DriftSpec::parametric(Family::parametric, *num("rho"), EpsKind::none, 0.0, 0.0,
                                 *num("cutoff"), true);
  } else {
    throw ValidationError("unknown family '" + fam + "'");
  }

  EpsKind eps = base.eps_kind();
  if (auto it = m.find("eps"); it != m.end()) {
    if (it->second == "none") eps = EpsKind::none;
    else if (it->second == "log_power") eps = EpsKind::log_power;
    else if (it->second == "log_inverse") eps = EpsKind::log_inverse;
    else throw ValidationError("unknown eps form '" + it->second + "'");
  }
  bool closed = base.closed_indicator();
  if (auto it = m.find("indicator"); it != m.end()) {
    if (it->second == "closed") closed = true;
    else if (it->second == "open") closed = false;
    else throw ValidationError("indicator must be closed or open");
  }
  return DriftSpec::parametric(family, num("rho").value_or(base.rho()), eps,
                               num("alpha").value_or(base.alpha()),
                               num("beta").value_or(base.beta()),
                               num("cutoff").value_or(base.cutoff()), closed);
}

DriftSpec spec_from_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ValidationError("spec line without '=': " + t);
    kv.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return spec_from_pairs(kv);
}

}  // namespace bessel_like

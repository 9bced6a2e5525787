#include "bessel_like/krein.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "bessel_like/csv.hpp"
#include "bessel_like/error.hpp"

namespace bessel_like {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr double kOdeAbs = 1e-18;
constexpr double kOdeRel = 1e-13;
constexpr double kMinDecay = 1e8;
constexpr double kMaxWronskianDrift = 1e-8;
constexpr int kCheckpointsPerSegment = 24;
// (log x)^p segments start here instead of at the singular point.
constexpr double kPowerLogStart = 1e-12;

enum class Var { x, log_x, power_log_x };

struct Segment {
  double a, b;
  Var var;
  double p = 1.0;  // power_log_x integrates in v = (log x)^p
};

// eps(x) ~ (log x)^{-beta} blows up at a cutoff of 1; v = (log x)^{1 - beta} makes
// eps dx/dv bounded.
std::optional<double> log_power_at_one(const DriftSpec& spec) {
  if (spec.cutoff() != 1.0 || spec.eps_kind() == EpsKind::none) return std::nullopt;
  return spec.eps_kind() == EpsKind::log_power ? 1.0 - spec.beta() : 0.5;
}

std::vector<Segment> segments(const DriftSpec& spec, double lo, double hi) {
  std::vector<double> pts{lo, hi};
  if (lo < 1.0 && hi > 1.0) pts.push_back(1.0);
  for (double p : spec.breakpoints())
    if (p > lo && p < hi) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Segment g{pts[i], pts[i + 1], pts[i + 1] > 2.0 * pts[i] ? Var::log_x : Var::x};
    if (const auto p = log_power_at_one(spec); p && pts[i] == 1.0) g.var = Var::power_log_x, g.p = *p;
    out.push_back(g);
  }
  return out;
}

// Checkpoints of a segment in its integration variable, both ends included.
std::vector<double> checkpoints(const Segment& g) {
  std::vector<double> v(kCheckpointsPerSegment + 1);
  auto var = [&g](double x) {
    switch (g.var) {
      case Var::log_x: return std::log(x);
      case Var::power_log_x: return x == 1.0 ? kPowerLogStart : std::pow(std::log(x), g.p);
      default: return x;
    }
  };
  const double a = var(g.a), b = var(g.b);
  for (int k = 0; k <= kCheckpointsPerSegment; ++k) v[k] = a + (b - a) * k / kCheckpointsPerSegment;
  v.back() = b;
  return v;
}

double to_x(const Segment& g, double v) {
  switch (g.var) {
    case Var::log_x: return std::exp(v);
    case Var::power_log_x: return std::exp(std::pow(v, 1.0 / g.p));
    default: return v;
  }
}

// dx / dv
double jacobian(const Segment& g, double v) {
  switch (g.var) {
    case Var::log_x: return std::exp(v);
    case Var::power_log_x: {
      const double L = std::pow(v, 1.0 / g.p);
      return std::exp(L) * L / (g.p * v);
    }
    default: return 1.0;
  }
}

// Integrate `rhs` (written in x) over one segment from v0 to v1 in the segment variable.
template <class Rhs>
void advance(const DriftSpec& spec, const Segment& seg, Rhs rhs_x, State& y, double v0, double v1,
             double abs_tol) {
  auto sys = [&](const State& st, State& d, double v) {
    const double x = to_x(seg, v);
    const double bx = seg.var == Var::power_log_x ? spec.b_of_log(std::pow(v, 1.0 / seg.p)) : spec.b_unchecked(x);
    rhs_x(st, d, x, bx);
    const double j = jacobian(seg, v);
    d[0] *= j;
    d[1] *= j;
  };
  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(abs_tol, kOdeRel);
  const double h0 = (v1 - v0) / 64.0;
  ode::integrate_adaptive(stepper, sys, y, v0, v1, h0);
}

}  // namespace

HSample green_h(const MeasureTable& table, double s, double x_max) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("green_h requires s > 0");
  const DriftSpec& spec = table.spec();
  if (!spec.regular_at_zero())
    throw ValidationError("green_h needs a regular boundary at 0 (entrance boundaries unsupported)");
  const double X = x_max > 0.0 ? x_max : std::min(table.x_max(), kGreenRadius / std::sqrt(s));
  if (X > table.x_max() * (1.0 + 1e-12)) throw RangeError("green_h: x_max beyond the measure table");

  // Start slightly off the origin; the first-order string correction carries R to 0.
  const double delta = std::min({1e-9, 1e-9 / std::sqrt(s), 1e-6 * X});
  auto b = [&spec](double x) { return spec.b_unchecked(x); };
  // r and q shrink with s near the origin.
  const double abs_tol = kOdeAbs * std::min(1.0, s);

  // r = -psi'/psi and log psi, backward from X; characteristic root at X.
  auto rhs_r = [&](const State& st, State& d, double, double bx) {
    const double r = st[0];
    d[0] = r * r - bx * r - 2.0 * s;
    d[1] = -r;
  };
  // q = phi'/phi and log phi, forward.
  auto rhs_q = [&](const State& st, State& d, double, double bx) {
    const double q = st[0];
    d[0] = 2.0 * s - bx * q - q * q;
    d[1] = q;
  };

  const auto segs = segments(spec, delta, X);
  std::vector<std::vector<double>> cps;
  for (const auto& g : segs) cps.push_back(checkpoints(g));

  // Backward pass, storing (r, log psi) at every checkpoint.
  std::vector<std::vector<State>> back(segs.size());
  const double bX = b(X);
  State y{0.5 * (bX + std::sqrt(bX * bX + 8.0 * s)), 0.0};
  for (std::size_t k = segs.size(); k-- > 0;) {
    const auto& v = cps[k];
    back[k].assign(v.size(), State{});
    back[k].back() = y;
    for (std::size_t j = v.size() - 1; j-- > 0;) {
      advance(spec, segs[k], rhs_r, y, v[j + 1], v[j], abs_tol);
      back[k][j] = y;
    }
  }
  const double r_delta = back[0][0][0];
  const double log_decay = back[0][0][1];

  const double W_delta = std::exp(table.log_W(delta));
  const double R_delta = W_delta * r_delta;
  const double R0 = R_delta + s * table.m(delta) - R_delta * R_delta * table.integrate_inv_W(0.0, delta);
  if (!(R0 > 0.0) || !std::isfinite(R0)) throw NumericError("green_h: non-positive Green's value");

  // Forward pass with the Wronskian log w = log phi + log psi + log W + log(q + r).
  State z{s * table.m(delta) / W_delta, 0.0};
  double log_w0 = 0.0, drift = 0.0;
  bool first = true;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto& v = cps[k];
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j > 0) advance(spec, segs[k], rhs_q, z, v[j - 1], v[j], abs_tol);
      const double x = j == 0 ? segs[k].a : j + 1 == v.size() ? segs[k].b : to_x(segs[k], v[j]);
      const double lw = z[1] + back[k][j][1] + table.log_W(x) + std::log(z[0] + back[k][j][0]);
      if (first) {
        log_w0 = lw;
        first = false;
      }
      drift = std::max(drift, std::abs(lw - log_w0));
    }
  }

  HSample out;
  out.s = s;
  out.h = 1.0 / R0;
  out.h_star = dual_h_star(s, out.h);
  out.method = HMethod::ode_two_solution;
  out.wronskian_drift = drift;
  out.decay = std::exp(std::min(log_decay, 700.0));
  out.x_max = X;
  if (!(drift <= kMaxWronskianDrift)) {
    std::ostringstream os;
    os << "green_h: Wronskian drift " << drift << " exceeds " << kMaxWronskianDrift << " at s = " << s;
    throw NumericError(os.str());
  }
  if (!(log_decay >= std::log(kMinDecay))) {
    std::ostringstream os;
    os << "green_h: decaying solution shrinks only by " << out.decay << " over [0, " << X
       << "] at s = " << s << "; increase x_max";
    throw TruncationError(os.str());
  }
  return out;
}

double dual_h_star(double s, double h) { return 1.0 / (s * h); }
double dual_h_star(const HSample& sample) { return dual_h_star(sample.s, sample.h); }

double h_bullet(const MeasureTable& table_dual, double s, double x_max) {
  return green_h(table_dual, s, x_max).h;
}

HSample laplace_h(const DensityField& field, double s, const std::function<double(double)>& tail_shape) {
  if (!(s > 0.0)) throw DomainError("laplace_h requires s > 0");
  if (field.source != 0) throw ValidationError("laplace_h needs a field with source at 0");
  const auto& T = field.times;
  if (T.size() < 2) throw ValidationError("laplace_h needs at least two stored times");
  std::vector<double> p(T.size());
  for (std::size_t k = 0; k < T.size(); ++k) p[k] = field.values[k][0];
  for (double v : p)
    if (!(v > 0.0)) throw NumericError("laplace_h: non-positive density sample");

  const double W0 = field.grid->table.W(0.0);
  const double t0 = T.front();
  double total = std::erf(std::sqrt(s * t0)) / std::sqrt(2.0 * s) / W0;

  // Log-log linear interpolation between stored times, Gauss-Legendre in log t.
  using GL = boost::math::quadrature::gauss<double, 10>;
  for (std::size_t k = 0; k + 1 < T.size(); ++k) {
    const double u0 = std::log(T[k]), u1 = std::log(T[k + 1]);
    const double lp0 = std::log(p[k]), lp1 = std::log(p[k + 1]);
    auto f = [&](double u) {
      const double lp = lp0 + (lp1 - lp0) * (u - u0) / (u1 - u0);
      const double t = std::exp(u);
      return std::exp(lp + u - s * t);
    };
    total += GL::integrate(f, u0, u1);
  }

  const double tN = T.back();
  const double pN = p.back();
  std::function<double(double)> tail = [&](double t) {
    return tail_shape ? pN * tail_shape(t) / tail_shape(tN) : pN;
  };
  if (!tail_shape) {
    total += pN * std::exp(-s * tN) / s;
  } else {
    // Truncate 50 e-foldings of exp(-s t) past tN.
    const double uN = std::log(tN), uE = std::log(tN + 50.0 / s);
    auto f = [&](double u) {
      const double t = std::exp(u);
      return tail(t) * t * std::exp(-s * t);
    };
    total += boost::math::quadrature::gauss<double, 30>::integrate(f, uN, uE);
  }

  HSample out;
  out.s = s;
  out.h = total;
  out.h_star = dual_h_star(s, total);
  out.method = HMethod::laplace_of_density;
  out.x_max = field.grid->x_max;
  return out;
}

double stieltjes_Hn(const SpectralStep& sigma, int n, double lam) {
  if (n < 0) throw ValidationError("stieltjes_Hn needs n >= 0");
  double sum = 0.0;
  for (std::size_t k = 0; k < sigma.lambda.size(); ++k)
    sum += sigma.weight[k] / std::pow(lam + sigma.lambda[k], n + 1);
  return sum;
}

double tauberian_constant(int n, double alpha) {
  if (n < 0 || !(alpha >= 0.0 && alpha < n + 1.0))
    throw ValidationError("tauberian_constant needs n >= 0 and 0 <= alpha < n + 1");
  if (n > 150)
    return std::exp(std::lgamma(n + 1.0 - alpha) + std::lgamma(alpha + 1.0) - std::lgamma(n + 1.0));
  return std::tgamma(n + 1.0 - alpha) * std::tgamma(alpha + 1.0) / std::tgamma(n + 1.0);
}

void write_h_csv(std::span<const HSample> samples, std::ostream& os) {
  os << "s,h,h_star\n";
  for (const auto& h : samples) csv::row(os, {h.s, h.h, h.h_star});
}

void write_sigma_csv(const SpectralStep& sigma, std::ostream& os) {
  os << "lambda,sigma\n";
  double cum = 0.0;
  for (std::size_t k = 0; k < sigma.lambda.size(); ++k) {
    cum += sigma.weight[k];
    csv::row(os, {sigma.lambda[k], cum});
  }
}

}  // namespace bessel_like

#include "bessel_like/measures.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bessel_like/csv.hpp"
#include "bessel_like/error.hpp"
#include "bessel_like/quadrature.hpp"

namespace bessel_like {

namespace {

constexpr double kLogOverflow = 700.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Pure power law near the origin (cutoff 0): W = C x^(rho-1) is singular or
// vanishing at 0 and is integrated in closed form on the first cell.
bool power_law_origin(const DriftSpec& spec) {
  return spec.family() != Family::target_m && spec.cutoff() == 0.0 && spec.rho() != 1.0;
}

double log_W_at_origin(const DriftSpec& spec) {
  if (spec.family() != Family::target_m && spec.cutoff() == 0.0) {
    if (spec.rho() == 1.0) return spec.log_W(1e-300);
    return spec.rho() > 1.0 ? -kInf : kInf;
  }
  return spec.log_W(0.0 + std::numeric_limits<double>::denorm_min());
}

struct Builder {
  const DriftSpec& spec;
  double tol;
  bool closed;
  std::vector<double> x, logW, IW, IinvW;  // IW[i], IinvW[i]: integrals over cell i
  double achieved = 0.0;

  double local_log_W(double a, double la, double u) const {
    if (closed) return *spec.analytic_log_W(u);
    auto f = [this](double v) { return spec.b_unchecked(v); };
    return la + quad::kronrod61(f, a, u).value;
  }

  double node_log_W(double u, double a, double la) const {
    const double v = closed ? *spec.analytic_log_W(u) : local_log_W(a, la, u);
    if (!std::isfinite(v) || std::abs(v) > kLogOverflow) {
      std::ostringstream os;
      os << "W leaves the representable range at x = " << u << " (log W = " << v << ")";
      throw RangeError(os.str());
    }
    return v;
  }

  void cell(double a, double la, double b, double lb, int depth) {
    auto W = [&](double u) { return std::exp(local_log_W(a, la, u)); };
    auto iW = [&](double u) { return std::exp(-local_log_W(a, la, u)); };
    const quad::Result rw = quad::kronrod61(W, a, b);
    const quad::Result ri = quad::kronrod61(iW, a, b);
    const double ew = rw.error / std::max(std::abs(rw.value), 1e-300);
    const double ei = ri.error / std::max(std::abs(ri.value), 1e-300);
    if ((ew > tol || ei > tol) && depth < 40 && b - a > 1e-13 * b) {
      const double mid = a > 0.0 ? std::sqrt(a * b) : 0.5 * (a + b);
      const double lm = node_log_W(mid, a, la);
      cell(a, la, mid, lm, depth + 1);
      cell(mid, lm, b, lb, depth + 1);
      return;
    }
    achieved = std::max({achieved, ew, ei});
    x.push_back(b);
    logW.push_back(lb);
    IW.push_back(rw.value);
    IinvW.push_back(ri.value);
  }
};

}  // namespace

MeasureTable build_measures(const DriftSpec& spec, double x_max, double tol) {
  if (!(x_max > spec.cutoff()) || !std::isfinite(x_max))
    throw ValidationError("x_max must be finite and exceed the cutoff");
  if (!(tol > 0.0 && tol <= 1e-4)) throw ValidationError("tol must lie in (0, 1e-4]");
  if (!spec.regular_at_zero() && !(spec.cutoff() == 0.0 && spec.rho() >= 2.0))
    throw ValidationError("the origin is not a regular or entrance boundary for this drift");

  // Seed nodes: geometric from a small scale up to x_max plus breakpoints and x = 1.
  const double scale = spec.cutoff() > 0.0 ? std::min(spec.cutoff(), 1.0) : 1.0;
  std::vector<double> seeds;
  for (double u = 1e-6 * scale; u < x_max; u *= std::pow(2.0, 0.25)) seeds.push_back(u);
  seeds.push_back(1.0);
  for (double p : spec.breakpoints()) seeds.push_back(p);
  seeds.push_back(x_max);
  std::sort(seeds.begin(), seeds.end());
  std::vector<double> nodes;
  for (double u : seeds) {
    if (u <= 0.0 || u > x_max) continue;
    if (!nodes.empty() && u <= nodes.back() * (1.0 + 1e-12)) continue;
    nodes.push_back(u);
  }
  if (nodes.back() < x_max) nodes.push_back(x_max);
  else nodes.back() = x_max;

  Builder bld{spec, tol, spec.analytic_log_W(1.0).has_value(), {}, {}, {}, {}};

  // Node log W by accumulation from x = 1 when no closed form exists.
  std::vector<double> seed_logW(nodes.size());
  const std::size_t i1 =
      static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), 1.0) - nodes.begin());
  if (bld.closed) {
    for (std::size_t i = 0; i < nodes.size(); ++i) seed_logW[i] = bld.node_log_W(nodes[i], 0, 0);
  } else {
    if (i1 < nodes.size()) seed_logW[i1] = 0.0;
    for (std::size_t i = i1 + 1; i < nodes.size(); ++i)
      seed_logW[i] = bld.node_log_W(nodes[i], nodes[i - 1], seed_logW[i - 1]);
    for (std::size_t i = std::min(i1, nodes.size()); i-- > 0;)
      seed_logW[i] = bld.node_log_W(nodes[i], nodes[i + 1], seed_logW[i + 1]);
  }

  // First cell [0, nodes[0]].
  const double x1 = nodes[0], l1 = seed_logW[0];
  bld.x.push_back(0.0);
  bld.logW.push_back(log_W_at_origin(spec));
  if (power_law_origin(spec)) {
    const double rho = spec.rho();
    const double w1 = std::exp(l1);
    bld.x.push_back(x1);
    bld.logW.push_back(l1);
    bld.IW.push_back(w1 * x1 / rho);
    bld.IinvW.push_back(rho < 2.0 ? x1 / (w1 * (2.0 - rho)) : kInf);
  } else {
    // W is bounded away from 0 and infinity near the origin; anchor at x1.
    auto W = [&](double u) { return std::exp(bld.local_log_W(x1, l1, u)); };
    auto iW = [&](double u) { return 1.0 / W(u); };
    const quad::Result rw = quad::kronrod61(W, 0.0, x1);
    const quad::Result ri = quad::kronrod61(iW, 0.0, x1);
    bld.x.push_back(x1);
    bld.logW.push_back(l1);
    bld.IW.push_back(rw.value);
    bld.IinvW.push_back(ri.value);
  }
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    bld.cell(nodes[i], seed_logW[i], nodes[i + 1], seed_logW[i + 1], 0);

  auto data = std::make_shared<MeasureTable::Data>();
  data->spec = spec;
  data->x = std::move(bld.x);
  data->logW = std::move(bld.logW);
  data->tol = tol;
  data->achieved = bld.achieved;
  const std::size_t n = data->x.size();
  data->M.assign(n, 0.0);
  data->S.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) data->M[i + 1] = data->M[i] + 2.0 * bld.IW[i];
  const std::size_t j1 = static_cast<std::size_t>(
      std::lower_bound(data->x.begin(), data->x.end(), 1.0 - 1e-15) - data->x.begin());
  if (j1 < n) {
    data->S[j1] = 0.0;
    for (std::size_t i = j1; i + 1 < n; ++i) data->S[i + 1] = data->S[i] + bld.IinvW[i];
    for (std::size_t i = j1; i-- > 0;) data->S[i] = data->S[i + 1] - bld.IinvW[i];
  } else {
    // Table ends below 1: anchor through the closed interval [x_max, 1].
    auto iW = [&](double u) { return std::exp(-spec.log_W(u)); };
    data->S[n - 1] = -quad::integrate(iW, data->x[n - 1], 1.0, 1e-13).value;
    for (std::size_t i = n - 1; i-- > 0;) data->S[i] = data->S[i + 1] - bld.IinvW[i];
  }
  data->mass = m_infinity(spec, std::max(tol, 1e-12));
  return MeasureTable(std::move(data));
}

std::size_t MeasureTable::cell_of(double x) const {
  const auto& g = data_->x;
  auto it = std::upper_bound(g.begin(), g.end(), x);
  std::size_t i = it == g.begin() ? 0 : static_cast<std::size_t>(it - g.begin()) - 1;
  return std::min(i, g.size() - 2);
}

double MeasureTable::local_log_W(std::size_t cell, double x) const {
  const DriftSpec& sp = data_->spec;
  if (auto a = sp.analytic_log_W(x)) return *a;
  // Anchor at the right node on the first cell (log W may be infinite at 0).
  const bool right = cell == 0;
  const double xa = right ? data_->x[1] : data_->x[cell];
  const double la = right ? data_->logW[1] : data_->logW[cell];
  auto f = [&sp](double v) { return sp.b_unchecked(v); };
  return la + quad::kronrod61(f, xa, x).value;
}

double MeasureTable::cell_integral(std::size_t cell, double a, double b, bool inverse) const {
  if (b <= a) return 0.0;
  const DriftSpec& sp = data_->spec;
  if (cell == 0 && power_law_origin(sp)) {
    const double rho = sp.rho();
    const double x1 = data_->x[1];
    const double w1 = std::exp(data_->logW[1]);
    if (!inverse) return w1 / std::pow(x1, rho - 1.0) * (std::pow(b, rho) - std::pow(a, rho)) / rho;
    if (rho >= 2.0 && a == 0.0) return kInf;
    const double p = 2.0 - rho;
    return std::pow(x1, rho - 1.0) / w1 *
           (p == 0.0 ? std::log(b / a) : (std::pow(b, p) - std::pow(a, p)) / p);
  }
  const double sign = inverse ? -1.0 : 1.0;
  auto f = [&](double u) { return std::exp(sign * local_log_W(cell, u)); };
  return quad::kronrod61(f, a, b).value;
}

double MeasureTable::log_W(double x) const {
  if (x < 0.0) throw DomainError("W(x) requires x >= 0");
  if (x > x_max()) {
    if (auto a = data_->spec.analytic_log_W(x)) return *a;
    throw RangeError("x beyond the measure table and no closed-form tail");
  }
  if (x == 0.0) return data_->logW[0];
  return local_log_W(cell_of(x), x);
}

double MeasureTable::W(double x) const { return std::exp(log_W(x)); }

double MeasureTable::m(double x) const {
  if (x < 0.0) throw DomainError("m(x) requires x >= 0");
  if (x > x_max()) {
    if (auto a = data_->spec.analytic_m(x)) return *a;
    throw RangeError("x beyond the measure table and no closed-form tail for m");
  }
  const std::size_t i = cell_of(x);
  return data_->M[i] + 2.0 * cell_integral(i, data_->x[i], x, false);
}

double MeasureTable::s(double x, double anchor) const {
  auto S = [this](double u) {
    if (u < 0.0) throw DomainError("s(x) requires x >= 0");
    if (u > x_max()) throw RangeError("x beyond the measure table for s");
    const std::size_t i = cell_of(u);
    if (i == 0) return data_->S[1] - cell_integral(0, u, data_->x[1], true);
    return data_->S[i] + cell_integral(i, data_->x[i], u, true);
  };
  return S(x) - S(anchor);
}

double MeasureTable::integrate_W(double a, double b) const {
  if (a > b) return -integrate_W(b, a);
  if (a < 0.0 || b > x_max() * (1.0 + 1e-14)) throw RangeError("integrate_W outside the table");
  b = std::min(b, x_max());
  const std::size_t ia = cell_of(a), ib = cell_of(b);
  if (ia == ib) return cell_integral(ia, a, b, false);
  return cell_integral(ia, a, data_->x[ia + 1], false) +
         0.5 * (data_->M[ib] - data_->M[ia + 1]) + cell_integral(ib, data_->x[ib], b, false);
}

double MeasureTable::integrate_inv_W(double a, double b) const {
  if (a > b) return -integrate_inv_W(b, a);
  if (a < 0.0 || b > x_max() * (1.0 + 1e-14)) throw RangeError("integrate_inv_W outside the table");
  b = std::min(b, x_max());
  const std::size_t ia = cell_of(a), ib = cell_of(b);
  if (ia == ib) return cell_integral(ia, a, b, true);
  return cell_integral(ia, a, data_->x[ia + 1], true) + (data_->S[ib] - data_->S[ia + 1]) +
         cell_integral(ib, data_->x[ib], b, true);
}

double eval_W(const MeasureTable& table, double x) { return table.W(x); }
double eval_m(const MeasureTable& table, double x) { return table.m(x); }
double eval_s(const MeasureTable& table, double x, double anchor) { return table.s(x, anchor); }

// ---------------------------------------------------------------------------
// total mass

namespace {

MassResult numeric_mass(const DriftSpec& spec, double tol) {
  MassResult r;
  if (!spec.regular_at_zero()) {
    r.status = MassStatus::indeterminate;
    r.method = "origin not regular";
    return r;
  }
  double x0 = std::max(1.0, spec.cutoff());
  for (double p : spec.breakpoints()) x0 = std::max(x0, p);
  x0 *= std::numbers::e;
  auto W = [&spec](double u) { return std::exp(spec.log_W(u)); };
  const auto bps = spec.breakpoints();
  const double head = 2.0 * quad::integrate_split(W, 0.0, x0, bps, 1e-13).value;
  const double m_cut = 2.0 * quad::integrate_split(W, 0.0, std::max(spec.cutoff(), 1.0), bps, 1e-13).value;

  // Tail integrand in v = log log x when W has a log-space closed form, which turns
  // algebraic tails in log x into exponential ones.
  std::function<double(double)> g;
  double lo = 0.0;
  const bool log_space = spec.analytic_log_xW_of_log(std::log(x0)).has_value();
  if (log_space) {
    g = [&spec](double v) {
      const double L = std::exp(v);
      if (!std::isfinite(L)) return 0.0;
      const double e = *spec.analytic_log_xW_of_log(L) + v;
      return e < -kLogOverflow ? 0.0 : 2.0 * std::exp(std::min(e, kLogOverflow));
    };
    lo = std::log(std::log(x0));
  } else {
    g = [&spec](double u) {
      const double lw = spec.log_W(u);
      return lw < -kLogOverflow ? 0.0 : 2.0 * std::exp(lw);
    };
    lo = x0;
  }

  try {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    const double tail = integrator.integrate(g, lo, kInf, std::min(tol, 1e-10), &err, &l1, &levels);
    if (std::isfinite(tail) && err <= tol * (head + tail) && tail >= 0.0) {
      r.status = MassStatus::finite;
      r.value = head + tail;
      r.error = err;
      r.method = "tail_quadrature";
      return r;
    }
  } catch (const std::exception&) {
    // Not convergent as an improper integral; fall through to the bound test.
  }

  // Divergence certificate: partial mass exceeding 1e6 times the mass up to the cutoff.
  double partial = head;
  double a = lo;
  const double cap = log_space ? 700.0 : 1e300;
  for (double b = log_space ? a + 1.0 : 2.0 * a; a < cap; a = b, b = log_space ? b + 1.0 : 2.0 * b) {
    partial += quad::integrate(g, a, std::min(b, cap), 1e-10).value;
    if (partial > 1e6 * m_cut) {
      r.status = MassStatus::infinite;
      r.value = partial;
      r.method = "partial_sum_bound";
      return r;
    }
    if (!std::isfinite(partial)) break;
  }
  r.status = MassStatus::indeterminate;
  r.value = partial;
  r.method = "inconclusive";
  return r;
}

}  // namespace

MassResult m_infinity(const DriftSpec& spec, double tol, MassMethod method) {
  if (method == MassMethod::quadrature) return numeric_mass(spec, tol);
  MassResult r;
  if (auto v = spec.analytic_m_infinity()) {
    r.status = MassStatus::finite;
    r.value = *v;
    r.method = "analytic";
    return r;
  }
  if (auto st = spec.analytic_mass_status()) {
    if (*st == MassStatus::infinite) {
      r.status = MassStatus::infinite;
      r.value = kInf;
      r.method = "analytic";
      return r;
    }
    if (method == MassMethod::analytic) {
      r.status = MassStatus::finite;
      r.method = "analytic_status_only";
      MassResult q = numeric_mass(spec, tol);
      r.value = q.value;
      r.error = q.error;
      return r;
    }
    MassResult q = numeric_mass(spec, tol);
    if (q.status != MassStatus::finite) {
      // The tail is known to converge; report the quadrature failure honestly.
      q.status = MassStatus::indeterminate;
    }
    return q;
  }
  if (method == MassMethod::analytic) {
    r.status = MassStatus::indeterminate;
    r.method = "no closed form";
    return r;
  }
  return numeric_mass(spec, tol);
}

double regular_variation_index(const MeasureTable& table, double lambda, std::optional<double> x) {
  if (!(lambda > 0.0) || lambda == 1.0) throw DomainError("lambda must be positive and != 1");
  const double xm = table.x_max();
  const double at = x.value_or(lambda > 1.0 ? xm / lambda : xm);
  return (table.log_W(lambda * at) - table.log_W(at)) / std::log(lambda);
}

void write_measures_csv(const MeasureTable& table, std::ostream& os) {
  os << "x,W,s,m\n";
  const auto x = table.grid();
  const auto lw = table.log_W_vals();
  const auto S = table.s_vals();
  const auto M = table.m_vals();
  for (std::size_t i = 0; i < x.size(); ++i) csv::row(os, {x[i], std::exp(lw[i]), S[i], M[i]});
}

}  // namespace bessel_like

#include "bessel_like/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace bessel_like::quad {

namespace gk = boost::math::quadrature;

// Error is |K61 - G30| on the embedded Gauss nodes (odd Kronrod indices).
Result kronrod61(const std::function<double(double)>& f, double a, double b) {
  const auto& xk = gk::gauss_kronrod<double, 61>::abscissa();
  const auto& wk = gk::gauss_kronrod<double, 61>::weights();
  const auto& wg = gk::gauss<double, 30>::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double f0 = f(c);
  double K = wk[0] * f0, G = 0.0, L1 = wk[0] * std::abs(f0);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double fl = f(c - h * xk[i]), fr = f(c + h * xk[i]);
    K += wk[i] * (fl + fr);
    L1 += wk[i] * (std::abs(fl) + std::abs(fr));
    if (i % 2 == 1) G += wg[i / 2] * (fl + fr);
  }
  Result r;
  r.value = K * h;
  r.error = std::abs((K - G) * h);
  r.l1 = L1 * std::abs(h);
  return r;
}

Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 unsigned max_depth) {
  Result r;
  if (a == b) return r;
  const bool log_var = a > 0.0 && b > 4.0 * a;
  auto g = [&f](double L) {
    const double x = std::exp(L);
    return f(x) * x;
  };
  const double lo = log_var ? std::log(a) : a, hi = log_var ? std::log(b) : b;
  if (log_var)
    r.value = gk::gauss_kronrod<double, 31>::integrate(g, lo, hi, max_depth, rel_tol, &r.error, &r.l1);
  else
    r.value = gk::gauss_kronrod<double, 31>::integrate(f, lo, hi, max_depth, rel_tol, &r.error, &r.l1);
  if (r.error <= 10.0 * rel_tol * r.l1) return r;

  // Endpoint singularities: tanh-sinh clusters nodes at both ends.
  thread_local gk::tanh_sinh<double> ts;
  Result t;
  try {
    if (log_var)
      t.value = ts.integrate(g, lo, hi, rel_tol, &t.error, &t.l1);
    else
      t.value = ts.integrate(f, lo, hi, rel_tol, &t.error, &t.l1);
  } catch (const std::exception&) {
    return r;
  }
  t.error *= std::abs(t.value);  // tanh_sinh reports a relative estimate
  return t.error < r.error ? t : r;
}

Result integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> breakpoints, double rel_tol) {
  const double sign = a <= b ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  Result total;
  double left = lo;
  auto add = [&](double x0, double x1) {
    if (x1 <= x0) return;
    const Result part = integrate(f, x0, x1, rel_tol);
    total.value += part.value;
    total.error += part.error;
    total.l1 += part.l1;
  };
  for (double p : breakpoints) {
    if (p > left && p < hi) {
      add(left, p);
      left = p;
    }
  }
  add(left, hi);
  total.value *= sign;
  return total;
}

}  // namespace bessel_like::quad

#include "bessel_like/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bessel_like/csv.hpp"
#include "bessel_like/error.hpp"

namespace bessel_like {

namespace {

constexpr double kFloor = 1e-290;

double interp(std::span<const double> xs, std::span<const double> ys, double v) {
  auto it = std::upper_bound(xs.begin(), xs.end(), v);
  std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - xs.begin()), 1, xs.size() - 1);
  const double w = (v - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

// Thomas algorithm for a symmetric tridiagonal system: diag a, off-diagonal b.
void thomas(std::span<const double> a, std::span<const double> b, std::vector<double>& rhs,
            std::vector<double>& work) {
  const std::size_t n = a.size();
  work.resize(n);
  double piv = a[0];
  if (!(piv > 0.0)) throw NumericError("tridiagonal solve: non-positive pivot");
  rhs[0] /= piv;
  for (std::size_t i = 1; i < n; ++i) {
    work[i] = b[i - 1] / piv;
    piv = a[i] - b[i - 1] * work[i];
    if (!(piv > 0.0) || !std::isfinite(piv)) throw NumericError("tridiagonal solve: pivot breakdown");
    rhs[i] = (rhs[i] - b[i - 1] * rhs[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= work[i + 1] * rhs[i + 1];
}

}  // namespace

std::size_t CanonicalGrid::cell_at(double v) const {
  if (v == 0.0) return 0;
  auto it = std::lower_bound(x.begin(), x.end(), v);
  for (auto k : {it, it == x.begin() ? it : it - 1}) {
    if (k != x.end() && std::abs(*k - v) <= 1e-12 * std::max(1.0, v))
      return static_cast<std::size_t>(k - x.begin());
  }
  std::ostringstream os;
  os << "x = " << v << " is not a cell centre; pass it as a grid source";
  throw ValidationError(os.str());
}

double auto_stretch(double x_max, double t_first) {
  if (!(x_max > 0.0 && t_first > 0.0)) throw ValidationError("auto_stretch needs x_max, t > 0");
  return std::log1p(x_max / (0.05 * std::sqrt(t_first)));
}

CanonicalGrid build_grid(const MeasureTable& table, std::size_t n, double x_max, double stretch,
                         std::span<const double> sources, Boundary right) {
  if (n < 16) throw ValidationError("grid needs at least 16 cells");
  if (!(x_max > 0.0) || x_max > table.x_max() * (1.0 + 1e-12))
    throw ValidationError("grid x_max must lie inside the measure table");
  if (!(stretch >= 0.0) || !std::isfinite(stretch)) throw ValidationError("stretch must be >= 0");

  std::vector<double> f(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double r = static_cast<double>(j) / static_cast<double>(n);
    f[j] = stretch == 0.0 ? x_max * r : x_max * std::expm1(stretch * r) / std::expm1(stretch);
  }
  f[n] = x_max;

  // Piecewise-linear warp with knots at the faces of each source cell.
  std::vector<double> src(sources.begin(), sources.end());
  std::sort(src.begin(), src.end());
  std::vector<double> kb{0.0}, kt{0.0};
  for (double y : src) {
    if (y == 0.0) continue;
    if (!(y > 0.0 && y < x_max)) throw ValidationError("grid source outside (0, x_max)");
    std::size_t k = 1;
    double best = std::abs(0.5 * (f[1] + f[2]) - y);
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double d = std::abs(0.5 * (f[i] + f[i + 1]) - y);
      if (d < best) best = d, k = i;
    }
    const double h = std::min(f[k + 1] - f[k], y);
    const double lo = y - 0.5 * h, hi = y + 0.5 * h;
    if (f[k] <= kb.back() || lo <= kt.back() || hi >= x_max)
      throw ValidationError("grid sources are too close together for this resolution");
    kb.insert(kb.end(), {f[k], f[k + 1]});
    kt.insert(kt.end(), {lo, hi});
  }
  kb.push_back(x_max);
  kt.push_back(x_max);
  if (kb.size() > 2)
    for (std::size_t j = 1; j < n; ++j) f[j] = interp(kb, kt, f[j]);

  CanonicalGrid g{table, f, {}, {}, {}, 0.0, x_max, right};
  g.x.resize(n);
  g.dm.resize(n);
  g.ds.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    g.x[i] = 0.5 * (f[i] + f[i + 1]);
    g.dm[i] = 2.0 * table.integrate_W(f[i], f[i + 1]);
  }
  for (double y : src)
    if (y > 0.0) g.x[g.cell_at(y)] = y;  // remove the rounding of the midpoint
  for (std::size_t i = 0; i + 1 < n; ++i) g.ds[i] = table.integrate_inv_W(g.x[i], g.x[i + 1]);
  g.ds_end = table.integrate_inv_W(g.x[n - 1], x_max);
  for (std::size_t i = 0; i < n; ++i) {
    const bool bad_m = !(g.dm[i] > kFloor) || !std::isfinite(g.dm[i]);
    const bool bad_s = i + 1 < n && (!(g.ds[i] > kFloor) || !std::isfinite(g.ds[i]));
    if (bad_m || bad_s) {
      std::ostringstream os;
      os << "degenerate grid cell " << i << " at x = " << g.x[i] << " (dm = " << g.dm[i]
         << (i + 1 < n ? ", ds = " + std::to_string(g.ds[i]) : std::string()) << ")";
      throw NumericError(os.str());
    }
  }
  return g;
}

std::size_t DensityField::time_index(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::abs(times[k] - t) <= 1e-12 * times[k]) return k;
  std::ostringstream os;
  os << "t = " << t << " was not computed";
  throw RangeError(os.str());
}

DensityField solve_density(const CanonicalGrid& grid, double y0, std::span<const double> t_list,
                           const DtControl& ctl) {
  if (t_list.empty()) throw ValidationError("t_list is empty");
  if (!(t_list[0] > 0.0)) throw ValidationError("t_list must start above 0");
  for (std::size_t k = 1; k < t_list.size(); ++k)
    if (!(t_list[k] > t_list[k - 1])) throw ValidationError("t_list must be increasing");
  if (!(ctl.growth >= 1.0)) throw ValidationError("dt growth must be >= 1");
  if (ctl.dt0 < 0.0) throw ValidationError("dt0 must be >= 0");

  const std::size_t n = grid.size();
  DensityField out;
  out.grid = std::make_shared<const CanonicalGrid>(grid);
  out.source = grid.cell_at(y0);
  out.y0 = y0;
  out.times.assign(t_list.begin(), t_list.end());

  // Unknowns are the cumulative masses U_i = sum_{j <= i} dm_j u_j, evolved by
  //   D dU/dt = -A U + g,  D = diag(ds),
  // a tridiagonal system on the dual string. The reflecting end pins U_{n-1} = 1.
  const bool absorbing = grid.right == Boundary::absorbing;
  const std::size_t m = absorbing ? n : n - 1;
  std::vector<double> D(m), Ad(m), Ao(m > 0 ? m - 1 : 0), g(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    D[i] = i + 1 < n ? grid.ds[i] : grid.ds_end;
    Ad[i] = 1.0 / grid.dm[i] + (i + 1 < n ? 1.0 / grid.dm[i + 1] : 0.0);
    if (i + 1 < m) Ao[i] = -1.0 / grid.dm[i + 1];
  }
  if (!absorbing) g[m - 1] = 1.0 / grid.dm[n - 1];

  std::vector<double> U(m), rhs(m), work, a(m), b(Ao.size()), Ustage(m);
  for (std::size_t i = 0; i < m; ++i) U[i] = i >= out.source ? 1.0 : 0.0;

  auto apply_A = [&](const std::vector<double>& v, std::size_t i) {
    double r = Ad[i] * v[i];
    if (i > 0) r += Ao[i - 1] * v[i - 1];
    if (i + 1 < m) r += Ao[i] * v[i + 1];
    return r;
  };
  // One theta step of length h from `from`, result in rhs.
  auto theta_step = [&](const std::vector<double>& from, double h, double theta) {
    for (std::size_t i = 0; i < m; ++i) {
      rhs[i] = D[i] * from[i] + h * g[i];
      if (theta < 1.0) rhs[i] -= (1.0 - theta) * h * apply_A(from, i);
    }
    for (std::size_t i = 0; i < m; ++i) a[i] = D[i] + theta * h * Ad[i];
    for (std::size_t i = 0; i + 1 < m; ++i) b[i] = theta * h * Ao[i];
    thomas(a, b, rhs, work);
  };
  const double gam = 2.0 - std::sqrt(2.0);
  auto trbdf2_step = [&](double h) {
    theta_step(U, gam * h, 0.5);
    Ustage = rhs;
    const double w = (1.0 - gam) / (2.0 - gam);
    const double c1 = 1.0 / (gam * (2.0 - gam));
    const double c0 = (1.0 - gam) * (1.0 - gam) / (gam * (2.0 - gam));
    for (std::size_t i = 0; i < m; ++i) {
      rhs[i] = D[i] * (c1 * Ustage[i] - c0 * U[i]) + w * h * g[i];
      a[i] = D[i] + w * h * Ad[i];
    }
    for (std::size_t i = 0; i + 1 < m; ++i) b[i] = w * h * Ao[i];
    thomas(a, b, rhs, work);
  };
  auto density = [&](std::vector<double>& u) {
    u.resize(n);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double cur = i < m ? U[i] : 1.0;
      u[i] = (cur - prev) / grid.dm[i];
      prev = cur;
    }
  };
  auto mass_of = [&](const std::vector<double>& u) {
    // Neumaier-compensated sum of u_i dm_i.
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = u[i] * grid.dm[i];
      const double t2 = sum + v;
      comp += std::abs(sum) >= std::abs(v) ? (sum - t2) + v : (v - t2) + sum;
      sum = t2;
    }
    return sum + comp;
  };

  double t = 0.0;
  double dt = ctl.dt0 > 0.0 ? ctl.dt0 : t_list[0] / 200.0;
  std::size_t next = 0;
  std::vector<double> u;
  while (next < t_list.size()) {
    const double target = t_list[next];
    double h = std::min(dt, target - t);
    const bool lands = h >= target - t || target - t - h <= 1e-12 * target;
    if (lands) h = target - t;
    const bool startup = out.steps < static_cast<std::size_t>(std::max(ctl.startup_steps, 0));
    switch (startup ? Scheme::implicit_euler : ctl.scheme) {
      case Scheme::implicit_euler:
        theta_step(U, h, 1.0);
        U.swap(rhs);
        break;
      case Scheme::crank_nicolson:
        theta_step(U, h, 0.5);
        U.swap(rhs);
        break;
      case Scheme::tr_bdf2:
        trbdf2_step(h);
        U.swap(rhs);
        break;
    }
    t = lands ? target : t + h;
    ++out.steps;

    if (!absorbing) {
      density(u);
      out.max_mass_defect = std::max(out.max_mass_defect, std::abs(mass_of(u) - 1.0));
    }
    if (lands) {
      density(u);
      const double mass = mass_of(u);
      out.values.push_back(u);
      out.mass.push_back(mass);
      if (absorbing && 1.0 - mass > ctl.leak_bound) out.leakage_flag = true;
      ++next;
    }
    if (!lands || h >= dt) dt *= ctl.growth;
  }
  return out;
}

double density_at(const DensityField& field, double t, double x) {
  const std::size_t k = field.time_index(t);
  const CanonicalGrid& g = *field.grid;
  if (!(x >= 0.0) || x > g.x_max) throw RangeError("density_at: x outside the grid");
  const auto& v = field.values[k];
  const std::size_t n = g.size();
  if (x <= g.x[0]) return v[0];
  if (x >= g.x[n - 1]) {
    if (g.right == Boundary::reflecting) return v[n - 1];
    const double w = g.table.integrate_inv_W(g.x[n - 1], x) / g.ds_end;
    return (1.0 - w) * v[n - 1];
  }
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(g.x.begin(), g.x.end(), x) - g.x.begin()) - 1;
  if (x == g.x[i]) return v[i];
  const double w = g.table.integrate_inv_W(g.x[i], x) / g.ds[i];
  return v[i] + w * (v[i + 1] - v[i]);
}

void write_density_csv(const DensityField& field, std::ostream& os) {
  os << "t,x,p\n";
  const CanonicalGrid& g = *field.grid;
  for (std::size_t k = 0; k < field.times.size(); ++k)
    for (std::size_t i = 0; i < g.size(); ++i) csv::row(os, {field.times[k], g.x[i], field.values[k][i]});
}

}  // namespace bessel_like

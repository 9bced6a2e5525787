#pragma once

// Scale function, speed measure and total mass of the diffusion generated by a
// DriftSpec: W(x) = exp(int_1^x b), s(x; c) = int_c^x du / W(u),
// m(x) = 2 int_0^x W(u) du, and m_inf = m(+inf).

#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bessel_like/drift.hpp"

namespace bessel_like {

struct MassResult {
  MassStatus status = MassStatus::indeterminate;
  /// Total mass when finite; otherwise the largest partial mass computed.
  double value = 0.0;
  /// Achieved absolute error estimate for finite values.
  double error = 0.0;
  /// Which route decided the status ("analytic", "tail_quadrature", "partial_sum_bound", ...).
  std::string method;
};

enum class MassMethod { automatic, analytic, quadrature };

struct MeasureData {
  DriftSpec spec;
  std::vector<double> x, logW, S, M;
  double tol = 0.0;
  double achieved = 0.0;
  MassResult mass;
};

/// Tabulated W, s, m on an adaptive grid. Immutable and cheap to copy.
class MeasureTable {
 public:
  const DriftSpec& spec() const { return data_->spec; }
  std::span<const double> grid() const { return data_->x; }
  std::span<const double> log_W_vals() const { return data_->logW; }
  /// s anchored at x = 1; -inf at the origin for entrance boundaries.
  std::span<const double> s_vals() const { return data_->S; }
  std::span<const double> m_vals() const { return data_->M; }
  double x_max() const { return data_->x.back(); }
  double tol() const { return data_->tol; }
  /// Largest per-cell relative quadrature error estimate observed while building.
  double achieved_tol() const { return data_->achieved; }
  const MassResult& m_inf() const { return data_->mass; }

  double log_W(double x) const;
  double W(double x) const;
  double m(double x) const;
  /// s(x; c) = int_c^x du / W(u).
  double s(double x, double anchor = 1.0) const;
  /// int_a^b W and int_a^b 1/W for 0 <= a <= b <= x_max, exact up to the table tolerance.
  double integrate_W(double a, double b) const;
  double integrate_inv_W(double a, double b) const;

  using Data = MeasureData;
  explicit MeasureTable(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

 private:
  std::size_t cell_of(double x) const;
  double local_log_W(std::size_t cell, double x) const;
  double cell_integral(std::size_t cell, double a, double b, bool inverse) const;

  std::shared_ptr<const Data> data_;
};

MeasureTable build_measures(const DriftSpec& spec, double x_max, double tol = 1e-10);

double eval_W(const MeasureTable& table, double x);
double eval_m(const MeasureTable& table, double x);
double eval_s(const MeasureTable& table, double x, double anchor = 1.0);

MassResult m_infinity(const DriftSpec& spec, double tol = 1e-10,
                      MassMethod method = MassMethod::automatic);

/// log(W(lambda x) / W(x)) / log(lambda), at the given x or at the largest usable one.
double regular_variation_index(const MeasureTable& table, double lambda,
                               std::optional<double> x = std::nullopt);

/// Node dump with the fixed header `x,W,s,m`.
void write_measures_csv(const MeasureTable& table, std::ostream& os);

}  // namespace bessel_like

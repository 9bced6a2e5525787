#pragma once

// Transition density p(t; x, y) with respect to the speed measure, from the
// canonical form d/dm d/ds discretised as a string of point masses.

#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "bessel_like/measures.hpp"

namespace bessel_like {

enum class Boundary { reflecting, absorbing };

/// Cell-centred string on [0, x_max]. Cell i spans [faces[i], faces[i+1]] and
/// carries mass dm[i]; ds[i] is the scale gap between centres i and i+1.
struct CanonicalGrid {
  MeasureTable table;
  std::vector<double> faces;
  std::vector<double> x;      // cell centres
  std::vector<double> dm;
  std::vector<double> ds;     // size n-1
  double ds_end = 0.0;        // s(x_max) - s(x[n-1]), used by the absorbing end
  double x_max = 0.0;
  Boundary right = Boundary::reflecting;

  std::size_t size() const { return x.size(); }
  /// Index of the cell whose centre is x (0 for x = 0); ValidationError otherwise.
  std::size_t cell_at(double x) const;
};

/// Grading exponent that resolves a diffusive length sqrt(t_first) near the origin.
double auto_stretch(double x_max, double t_first);

/// Faces f_j = x_max (e^{k j/n} - 1)/(e^k - 1) (uniform for stretch 0), warped so that
/// every point of `sources` is a cell centre.
CanonicalGrid build_grid(const MeasureTable& table, std::size_t n, double x_max, double stretch,
                         std::span<const double> sources = {},
                         Boundary right = Boundary::reflecting);

/// Startup steps are always implicit Euler. tr_bdf2 is the L-stable second-order choice.
enum class Scheme { implicit_euler, crank_nicolson, tr_bdf2 };

struct DtControl {
  Scheme scheme = Scheme::implicit_euler;
  /// First step; 0 picks t_list[0] / 200.
  double dt0 = 0.0;
  /// dt multiplies by this factor after each step (1 keeps it constant).
  double growth = 1.01;
  /// Implicit Euler steps taken before the chosen scheme starts.
  int startup_steps = 4;
  /// Mass loss above this level is flagged on absorbing runs.
  double leak_bound = 1e-3;
};

struct DensityField {
  std::shared_ptr<const CanonicalGrid> grid;
  std::size_t source = 0;
  double y0 = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[k][i] = p(times[k]; x_i, y0)
  std::vector<double> mass;                 // sum_i values[k][i] dm_i
  double max_mass_defect = 0.0;             // max |mass - 1| over every step (reflecting runs)
  bool leakage_flag = false;
  std::size_t steps = 0;

  std::size_t time_index(double t) const;
};

DensityField solve_density(const CanonicalGrid& grid, double y0, std::span<const double> t_list,
                           const DtControl& dt = {});

/// p(t; x, y0), linear in s(x) between centres.
double density_at(const DensityField& field, double t, double x);

/// Rows t,x,p for every stored time and centre.
void write_density_csv(const DensityField& field, std::ostream& os);

}  // namespace bessel_like

#include "bessel_like/csv.hpp"

#include <cmath>
#include <cstdio>

namespace bessel_like::csv {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << num(v);
    first = false;
  }
  os << '\n';
}

}  // namespace bessel_like::csv

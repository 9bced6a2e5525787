#pragma once

#include <initializer_list>
#include <ostream>
#include <string>

namespace bessel_like::csv {

/// 17 significant digits, the round-trip precision of a double.
std::string num(double v);

/// Writes one comma separated row of numbers followed by a newline.
void row(std::ostream& os, std::initializer_list<double> values);

}  // namespace bessel_like::csv

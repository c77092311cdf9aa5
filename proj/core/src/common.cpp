#include "vextrace/common.hpp"

#include <cmath>

namespace vextrace {

double unit_sphere_area(int m) {
  if (m < 0) throw std::invalid_argument("unit_sphere_area: negative dimension");
  if (m == 0) return 2.0;  // S^0 = two points with counting measure
  const double half = 0.5 * static_cast<double>(m + 1);
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

}  // namespace vextrace

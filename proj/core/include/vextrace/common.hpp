#pragma once

#include <stdexcept>
#include <string>

namespace vextrace {

inline constexpr double kPi = 3.14159265358979323846;

/// Surface measure of the unit sphere S^m embedded in R^{m+1},
/// i.e. unit_sphere_area(1) = 2*pi (circle), unit_sphere_area(2) = 4*pi.
double unit_sphere_area(int m);

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// An integral whose convergence precondition fails.
struct divergence_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// An iterative scheme exhausted its refinement or iteration budget.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A hypothesis required by the operation does not hold for the given data.
struct hypothesis_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace vextrace

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vextrace/common.hpp"

namespace vextrace {

/// Settings for the adaptive integrators. The truncation radius for
/// half-space integrals is derived from the kernel decay when left at 0.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  double truncation_radius = 0.0;  // 0 = automatic from the decay exponent
  int max_depth = 48;              // per-panel bisection depth
  int max_panels = 1 << 19;

  void validate() const;
};

/// y-radial integrand on the half-space, reduced to (rho, t) with
/// rho = |y| >= 0 and t >= 0. The decay exponent alpha promises
/// |g(rho,t)| <= C (rho^2 + t^2)^{-alpha/2} for large radius; alpha > N
/// is required for convergence of the weighted integral.
struct RadialKernel {
  std::function<double(double, double)> g;
  double decay_exponent = 0.0;
  bool logarithmic = false;  // integrand carries a ln factor
};

/// Radial integrand on the boundary R^{N-1}, reduced to rho = |y|.
/// Convergence needs decay_exponent > N - 1.
struct BoundaryKernel {
  std::function<double(double)> g;
  double decay_exponent = 0.0;
  bool logarithmic = false;
};

/// omega_{N-2} * int_0^inf int_0^inf g(rho,t) rho^{N-2} drho dt.
/// The reported error bounds discretization plus truncation error.
IntegralEstimate halfspace_integral(const RadialKernel& kernel, int N,
                                    const QuadratureSpec& spec = {});

/// omega_{N-2} * int_0^inf g(rho) rho^{N-2} drho.
IntegralEstimate boundary_integral(const BoundaryKernel& kernel, int N,
                                   const QuadratureSpec& spec = {});

/// Average over the unit sphere S^{m-1} of the monomial
/// prod_i y_i^{exponents[i]}; the moment of the constant 1 is 1.
/// Odd moments vanish. Exact rational evaluation:
///   prod_i (exponents[i]-1)!! / prod_{j=0}^{A-1} (m + 2j),  A = sum/2.
double sphere_moment(std::span<const int> exponents, int m);

/// Upper bound for int over {|x| > R} in the half-space of |x|^{-alpha}:
///   (omega_{N-1}/2) * R^{N-alpha} / (alpha - N).
/// Throws divergence_error when alpha <= N.
double tail_bound(double decay_exponent, int N, double R);

// ---------------------------------------------------------------------------
// Generic adaptive panel integrators (Gauss-Kronrod 7/15, deterministic
// subdivision and summation order). These are the building blocks behind the
// half-space reductions and the direct left-hand-side evaluations.
// ---------------------------------------------------------------------------

IntegralEstimate integrate_interval(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol,
                                    int max_depth = 48, int max_panels = 1 << 19);

IntegralEstimate integrate_box(const std::function<double(double, double)>& f,
                               double x0, double x1, double y0, double y1,
                               double rel_tol, int max_depth = 48,
                               int max_panels = 1 << 19);

}  // namespace vextrace

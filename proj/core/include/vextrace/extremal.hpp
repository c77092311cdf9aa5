#pragma once

#include <string>

#include <json.hpp>

#include "vextrace/common.hpp"
#include "vextrace/quadrature.hpp"

namespace vextrace {

/// Parameters of the half-space trace bubble V(y,t) = r^{-beta},
/// r = sqrt((1+t)^2 + |y|^2), beta = (N-p)/(p-1).
struct BubbleParams {
  int N = 0;
  double p = 0.0;

  BubbleParams() = default;
  BubbleParams(int N_, double p_);

  double beta() const { return (N - p) / (p - 1.0); }
  double p_star() const { return (N - 1) * p / (N - p); }
  /// Radial decay exponent of |grad V|^p: e = p (N-1)/(p-1). Note e - N = beta.
  double gradient_decay() const { return p * (N - 1) / (p - 1.0); }
};

double bubble_value(const BubbleParams& params, double rho, double t);

/// |grad V_eps| = (N-p)/(p-1) eps^{(N-p)/(p(p-1))} ((eps+t)^2 + rho^2)^{-(N-1)/(2(p-1))}.
double bubble_gradient_norm(const BubbleParams& params, double rho, double t,
                            double eps = 1.0);

/// Energy-invariant rescaling V_eps(y,t) = eps^{-(N-p)/p} V(y/eps, t/eps),
/// under which int |grad V_eps|^p is independent of eps and the gradient
/// matches bubble_gradient_norm.
struct RescaledBubble {
  BubbleParams params;
  double eps = 1.0;

  double operator()(double rho, double t) const;
  double d_rho(double rho, double t) const;
  double d_t(double rho, double t) const;
};

RescaledBubble rescale_bubble(const BubbleParams& params, double eps);

struct TableEntry {
  double value = 0.0;
  double error = 0.0;
  bool available = false;
  std::string condition;  // names the violated convergence condition if any
};

/// Base bubble integrals every expansion coefficient is assembled from.
/// G* integrals carry the weight |grad V|^p over the half-space, S* are
/// boundary integrals of V^{p_*}; *_log variants carry an extra ln|grad V|.
struct BubbleIntegralTable {
  BubbleParams params;
  TableEntry g0;        // int |grad V|^p
  TableEntry g1;        // int t |grad V|^p
  TableEntry g2;        // int t^2 |grad V|^p
  TableEntry gy;        // int |y|^2 |grad V|^p
  TableEntry gyr;       // int (|y|^2/r^2) |grad V|^p
  TableEntry gty;       // int (t |y|^2/r^2) |grad V|^p
  TableEntry gt2y;      // int (t^2 |y|^2/r^2) |grad V|^p
  TableEntry gy4r;      // int (y_1^4/r^2) |grad V|^p
  TableEntry gy22r;     // int (y_1^2 y_2^2/r^2) |grad V|^p
  TableEntry g1_log;    // int t |grad V|^p ln|grad V|
  TableEntry g2_log;    // int t^2 |grad V|^p ln|grad V|
  TableEntry gty_log;   // int (t |y|^2/r^2) |grad V|^p ln|grad V|
  TableEntry gt2y_log;  // int (t^2 |y|^2/r^2) |grad V|^p ln|grad V|
  TableEntry vp;        // int V^p
  TableEntry s0;        // int_boundary V^{p_*}
  TableEntry sy;        // int_boundary |y|^2 V^{p_*}

  nlohmann::json to_json() const;
};

BubbleIntegralTable bubble_integral_table(const BubbleParams& params,
                                          const QuadratureSpec& spec = {});

/// Sharp half-space trace constant via quadrature of the extremal:
/// Kbar^{-1} = (int |grad V|^p)^{1/p} / (int_b V^{p_*})^{1/p_*}.
double trace_constant(int N, double p, const QuadratureSpec& spec = {});

/// Independent Beta-function route: with beta = (N-p)/(p-1),
///   S0 = omega_{N-2} (1/2) B((N-1)/2, (beta+1)/2),  G0 = beta^{p-1} S0,
/// so Kbar^{-1} = beta^{(p-1)/p} S0^{1/p - 1/p_*}.
double trace_constant_closed_form(int N, double p);

/// Normalization of Z = C V with int |grad Z|^p = int_b Z^{p_*}
/// = Kbar^{-p p_*/(p_*-p)}.
struct NormalizedProfile {
  double C = 0.0;
  double grad_energy = 0.0;  // int |grad Z|^p
  double trace_mass = 0.0;   // int_b Z^{p_*}
  double target = 0.0;       // Kbar^{-p p_*/(p_*-p)}
};

NormalizedProfile normalized_profile(int N, double p, const QuadratureSpec& spec = {});

}  // namespace vextrace

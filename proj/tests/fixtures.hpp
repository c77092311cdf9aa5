// Shared configuration builders for the unit and acceptance suites.
#pragma once

#include <cmath>
#include <vector>

#include "vextrace/fermi.hpp"
#include "vextrace/fields.hpp"

namespace vextrace::fixtures {

inline TaylorModel model_with(int N, double value, double dt = 0.0, double dtt = 0.0,
                              double lap_y_per_axis = 0.0) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(N);
  g[N - 1] = dt;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(N, N);
  h(N - 1, N - 1) = dtt;
  for (int i = 0; i + 1 < N; ++i) h(i, i) = lap_y_per_axis;
  return TaylorModel(value, g, h);
}

inline PolynomialField paraboloid(int m, double curvature) {
  std::vector<std::pair<std::vector<int>, double>> terms;
  for (int i = 0; i < m; ++i) {
    std::vector<int> idx(m, 0);
    idx[i] = 2;
    terms.push_back({idx, 0.5 * curvature});
  }
  return PolynomialField(m, terms);
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, i / double(n - 1)));
  return g;
}

/// Flat critical configuration at (N, p) with generous chart radius.
inline ProblemConfig base_config(int N, double p) {
  ProblemConfig c;
  c.dimension = N;
  c.p_model = TaylorModel::constant(N, p);
  c.r_model = TaylorModel::constant(N, critical_trace_exponent(p, N));
  c.h_model = TaylorModel::constant(N, 1.0);
  c.f_model = TaylorModel::constant(N, 1.0);
  c.geometry = GeometrySpec::flat(N, 1.0);
  c.epsilon_grid = log_grid(1e-3, 1e-1, 12);
  c.s_grid = {1.0};
  return c;
}

/// Verification config (a): flat, dt p(0) = 0.1, r with D^2_y r = -0.5 I.
inline ProblemConfig config_dtp(int N = 6, double p = 2.0, double dtp = 0.1) {
  ProblemConfig c = base_config(N, p);
  c.p_model = model_with(N, p, dtp);
  Eigen::MatrixXd hr = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i + 1 < N; ++i) hr(i, i) = -0.5;
  c.r_model = TaylorModel(c.r_model.value(), Eigen::VectorXd::Zero(N), hr);
  return c;
}

/// Verification config (b): curved paraboloid boundary, constant p.
inline ProblemConfig config_curved(int N = 6, double p = 2.0, double curvature = 0.5) {
  ProblemConfig c = base_config(N, p);
  c.geometry = GeometrySpec::from_psi(N, paraboloid(N - 1, curvature), 0.9);
  return c;
}

/// Verification config (c): flat, constant p, dt f(0) = 1.
inline ProblemConfig config_dtf(int N = 6, double p = 2.0) {
  ProblemConfig c = base_config(N, p);
  c.f_model = model_with(N, 1.0, 1.0);
  return c;
}

}  // namespace vextrace::fixtures

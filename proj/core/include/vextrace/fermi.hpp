#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vextrace/common.hpp"

namespace vextrace {

/// Polynomial on R^{d} stored as (multi-index, coefficient) terms, with
/// analytic value/gradient/Hessian. Used for boundary graphs psi.
class PolynomialField {
 public:
  PolynomialField() = default;
  PolynomialField(int vars, std::vector<std::pair<std::vector<int>, double>> terms);

  int vars() const { return vars_; }
  const std::vector<std::pair<std::vector<int>, double>>& terms() const { return terms_; }

  double value(const Eigen::VectorXd& y) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& y) const;

  nlohmann::json to_json() const;
  static PolynomialField from_json(const nlohmann::json& j);

 private:
  int vars_ = 0;
  std::vector<std::pair<std::vector<int>, double>> terms_;
};

/// Boundary chart data at the critical point: the graph function psi with
/// psi(0) = 0 and grad psi(0) = 0, its Hessian, and the chart cutoff radius.
/// The second fundamental form in these coordinates is h = D^2 psi(0); the
/// mean curvature is reported in the average convention
///   H = trace(D^2 psi(0)) / (N-1),
/// while the Jacobian expansion J = 1 - (trace h) t + O(t^2+|y|^2) carries
/// the trace. Both are exposed to keep the two roles separate.
class GeometrySpec {
 public:
  GeometrySpec() = default;

  static GeometrySpec flat(int N, double delta = 0.25);
  static GeometrySpec from_hessian(int N, Eigen::MatrixXd psi_hessian, double delta = 0.25);
  static GeometrySpec from_psi(int N, PolynomialField psi, double delta = 0.25);

  int dimension() const { return N_; }
  double delta() const { return delta_; }
  bool has_psi() const { return psi_.has_value(); }
  const PolynomialField& psi() const;

  const Eigen::MatrixXd& second_fundamental_form() const { return hessian_; }
  double mean_curvature() const { return hessian_.trace() / (N_ - 1); }
  double curvature_trace() const { return hessian_.trace(); }
  bool is_flat() const;

  /// True when psi (or the Hessian-only model) is invariant under rotations
  /// of y, so chart quantities reduce to functions of (|y|, t). Decided at
  /// construction.
  bool is_y_radial() const { return y_radial_; }

  /// The chart used by integral evaluations: the stored psi, or the
  /// osculating quadratic y -> y'Hy/2 when only the Hessian was given.
  const PolynomialField& effective_psi() const { return effective_psi_; }

  nlohmann::json to_json() const;
  static GeometrySpec from_json(const nlohmann::json& j);

 private:
  void finalize();

  int N_ = 0;
  Eigen::MatrixXd hessian_;  // (N-1) x (N-1)
  double delta_ = 0.25;
  std::optional<PolynomialField> psi_;
  PolynomialField effective_psi_;
  bool y_radial_ = true;
};

/// Phi(y,t) = (y, psi(y)) + t nu(y) with nu the unit inward normal.
Eigen::VectorXd chart_map(const GeometrySpec& spec, const Eigen::VectorXd& y, double t);

/// nu(y) = (-grad psi(y), 1) / sqrt(1 + |grad psi(y)|^2).
Eigen::VectorXd unit_inward_normal(const GeometrySpec& spec, const Eigen::VectorXd& y);

/// det DPhi(y,t) by central finite differences (step 1e-5 * delta).
/// Throws numerical_error when the determinant is not positive (chart not
/// injective at that point).
double jacobian_det(const GeometrySpec& spec, const Eigen::VectorXd& y, double t);

struct CurvatureData {
  double H = 0.0;       // mean curvature, average convention
  Eigen::MatrixXd h;    // second fundamental form = D^2 psi(0)
};

CurvatureData curvature_data(const GeometrySpec& spec);

/// Empirical orders (log-log slopes against the box size) of the residuals
///   |JPhi(y,t) - (1 - trace(h) t)|            -> jacobian_order
///   |grad-squared via the exact pullback metric
///        - ((dt v)^2 + sum (delta^{ij} + 2 h^{ij} t) di v dj v)| -> metric_order
/// over a family of shrinking sample boxes. Both are ~2 for C^2 graphs; a
/// residual below 1e-14 everywhere reports +infinity (vacuously exact).
struct ExpansionOrders {
  double jacobian_order = 0.0;
  double metric_order = 0.0;
};

ExpansionOrders expansion_residual_check(const GeometrySpec& spec, int levels = 6,
                                         int directions = 8);

/// Chart data on the ray y = rho * e1 for y-radial geometries:
/// the Jacobian determinant and the inverse-metric radial form
/// q = (g^{-1})_{11}, so that |grad u|^2 = (dt v)^2 + q (drho v)^2 for
/// y-radial v. Exact (analytic psi derivatives).
struct RadialChartData {
  double jacobian = 1.0;
  double metric_q = 1.0;
  double boundary_area_element = 1.0;  // sqrt(1 + |grad psi|^2) at t = 0
};

RadialChartData radial_chart_data(const GeometrySpec& spec, double rho, double t);

}  // namespace vextrace

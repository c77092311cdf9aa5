#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <json.hpp>

#include "vextrace/common.hpp"
#include "vextrace/fermi.hpp"

namespace vextrace {

/// Second-order local model of a scalar field at the origin of the Fermi
/// chart. Coordinates are (y, t) with y in R^{N-1} tangential and the last
/// component the inward-normal direction t.
class TaylorModel {
 public:
  TaylorModel() = default;
  TaylorModel(double value, Eigen::VectorXd gradient, Eigen::MatrixXd hessian);

  static TaylorModel constant(int N, double value);

  double value() const { return value_; }
  const Eigen::VectorXd& gradient() const { return gradient_; }
  const Eigen::MatrixXd& hessian() const { return hessian_; }
  int dimension() const { return static_cast<int>(gradient_.size()); }

  double operator()(const Eigen::VectorXd& yt) const;
  /// Evaluation on the ray y = rho * e1 (used by the radial reductions).
  double at_radial(double rho, double t) const;

  double dt() const { return gradient_[dimension() - 1]; }
  double dtt() const { return hessian_(dimension() - 1, dimension() - 1); }
  Eigen::VectorXd tangential_gradient() const { return gradient_.head(dimension() - 1); }
  Eigen::MatrixXd tangential_hessian() const {
    return hessian_.topLeftCorner(dimension() - 1, dimension() - 1);
  }
  double tangential_laplacian() const { return tangential_hessian().trace(); }

  /// True when the model is invariant under rotations of y: zero tangential
  /// gradient, isotropic tangential Hessian, no mixed y-t second derivatives.
  bool is_y_radial(double tol = 1e-12) const;

  nlohmann::json to_json() const;
  static TaylorModel from_json(const nlohmann::json& j, int N);

 private:
  double value_ = 0.0;
  Eigen::VectorXd gradient_;
  Eigen::MatrixXd hessian_;
};

/// (N-1) p / (N - p); requires 1 < p < N.
double critical_trace_exponent(double p_value, int N);

struct ProblemConfig {
  int dimension = 0;
  TaylorModel p_model, r_model, h_model, f_model;
  GeometrySpec geometry;
  std::vector<double> epsilon_grid;
  std::vector<double> s_grid;

  double p0() const { return p_model.value(); }
  double p_star0() const { return critical_trace_exponent(p_model.value(), dimension); }

  nlohmann::json to_json() const;
  static ProblemConfig from_json(const nlohmann::json& j);
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const;
  const ValidationCheck* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Runs every hypothesis check the expansion machinery relies on. Findings
/// are report entries, not errors; ties with strict bounds are failures.
/// The positive-semidefiniteness of D^2 p is only demanded when the case-4
/// machinery is requested.
ValidationReport validate_config(const ProblemConfig& config, bool for_case4 = false);

}  // namespace vextrace

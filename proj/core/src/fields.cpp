#include "vextrace/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vextrace {

TaylorModel::TaylorModel(double value, Eigen::VectorXd gradient, Eigen::MatrixXd hessian)
    : value_(value), gradient_(std::move(gradient)), hessian_(std::move(hessian)) {
  const int n = static_cast<int>(gradient_.size());
  if (n < 2) throw std::invalid_argument("TaylorModel: needs at least 2 coordinates");
  if (hessian_.rows() != n || hessian_.cols() != n)
    throw std::invalid_argument("TaylorModel: Hessian size mismatch");
  const double scale = hessian_.norm();
  if ((hessian_ - hessian_.transpose()).norm() > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("TaylorModel: Hessian must be symmetric");
  hessian_ = 0.5 * (hessian_ + hessian_.transpose());
}

TaylorModel TaylorModel::constant(int N, double value) {
  return TaylorModel(value, Eigen::VectorXd::Zero(N), Eigen::MatrixXd::Zero(N, N));
}

double TaylorModel::operator()(const Eigen::VectorXd& yt) const {
  if (yt.size() != gradient_.size())
    throw std::invalid_argument("TaylorModel: evaluation point size mismatch");
  return value_ + gradient_.dot(yt) + 0.5 * yt.dot(hessian_ * yt);
}

double TaylorModel::at_radial(double rho, double t) const {
  const int n = dimension();
  // value + g_1 rho + g_t t + 1/2 (h_11 rho^2 + 2 h_1t rho t + h_tt t^2)
  return value_ + gradient_[0] * rho + gradient_[n - 1] * t +
         0.5 * (hessian_(0, 0) * rho * rho + 2.0 * hessian_(0, n - 1) * rho * t +
                hessian_(n - 1, n - 1) * t * t);
}

bool TaylorModel::is_y_radial(double tol) const {
  const int n = dimension();
  const int m = n - 1;
  if (tangential_gradient().norm() > tol) return false;
  const double c = hessian_(0, 0);
  for (int i = 0; i < m; ++i) {
    if (std::abs(hessian_(i, n - 1)) > tol) return false;
    for (int j = 0; j < m; ++j) {
      const double want = (i == j) ? c : 0.0;
      if (std::abs(hessian_(i, j) - want) > tol * std::max(1.0, std::abs(c))) return false;
    }
  }
  return true;
}

nlohmann::json TaylorModel::to_json() const {
  nlohmann::json h = nlohmann::json::array();
  for (int i = 0; i < hessian_.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < hessian_.cols(); ++j) row.push_back(hessian_(i, j));
    h.push_back(row);
  }
  nlohmann::json g = nlohmann::json::array();
  for (int i = 0; i < gradient_.size(); ++i) g.push_back(gradient_[i]);
  return {{"value", value_}, {"grad", g}, {"hess", h}};
}

TaylorModel TaylorModel::from_json(const nlohmann::json& j, int N) {
  const double v = j.at("value").get<double>();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(N);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(N, N);
  if (j.contains("grad")) {
    const auto& jg = j.at("grad");
    if (static_cast<int>(jg.size()) != N)
      throw std::invalid_argument("TaylorModel: grad length must equal N");
    for (int i = 0; i < N; ++i) g[i] = jg.at(i).get<double>();
  }
  if (j.contains("hess")) {
    const auto& jh = j.at("hess");
    if (static_cast<int>(jh.size()) != N)
      throw std::invalid_argument("TaylorModel: hess must be N x N");
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) h(i, k) = jh.at(i).at(k).get<double>();
  }
  return TaylorModel(v, std::move(g), std::move(h));
}

double critical_trace_exponent(double p_value, int N) {
  if (!(p_value > 1.0) || !(p_value < static_cast<double>(N)))
    throw std::domain_error("critical_trace_exponent: requires 1 < p < N");
  return (N - 1) * p_value / (N - p_value);
}

nlohmann::json ProblemConfig::to_json() const {
  return {{"N", dimension},
          {"p", p_model.to_json()},
          {"r", r_model.to_json()},
          {"h", h_model.to_json()},
          {"f", f_model.to_json()},
          {"geometry", geometry.to_json()},
          {"epsilon_grid", epsilon_grid},
          {"s_grid", s_grid}};
}

ProblemConfig ProblemConfig::from_json(const nlohmann::json& j) {
  ProblemConfig c;
  c.dimension = j.at("N").get<int>();
  if (c.dimension < 3) throw std::invalid_argument("ProblemConfig: N must be >= 3");
  c.p_model = TaylorModel::from_json(j.at("p"), c.dimension);
  c.r_model = TaylorModel::from_json(j.at("r"), c.dimension);
  c.h_model = TaylorModel::from_json(j.at("h"), c.dimension);
  c.f_model = TaylorModel::from_json(j.at("f"), c.dimension);
  if (j.contains("geometry")) {
    c.geometry = GeometrySpec::from_json(j.at("geometry"));
    if (c.geometry.dimension() != c.dimension)
      throw std::invalid_argument("ProblemConfig: geometry dimension mismatch");
  } else {
    c.geometry = GeometrySpec::flat(c.dimension);
  }
  c.epsilon_grid = j.value("epsilon_grid", std::vector<double>{});
  c.s_grid = j.value("s_grid", std::vector<double>{});
  for (double e : c.epsilon_grid)
    if (!(e > 0.0 && e < 1.0))
      throw std::invalid_argument("ProblemConfig: epsilon_grid values must lie in (0,1)");
  if (!c.s_grid.empty() &&
      std::none_of(c.s_grid.begin(), c.s_grid.end(), [](double s) { return s == 1.0; }))
    throw std::invalid_argument("ProblemConfig: s_grid must contain 1");
  if (!std::is_sorted(c.epsilon_grid.begin(), c.epsilon_grid.end()) ||
      !std::is_sorted(c.s_grid.begin(), c.s_grid.end()))
    throw std::invalid_argument("ProblemConfig: grids must be sorted");
  return c;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"message", c.message}});
  return {{"checks", arr}, {"all_passed", all_passed()}};
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

ValidationReport validate_config(const ProblemConfig& config, bool for_case4) {
  ValidationReport rep;
  const int N = config.dimension;
  const double p = config.p_model.value();
  auto add = [&rep](std::string name, bool ok, std::string msg) {
    rep.checks.push_back({std::move(name), ok, std::move(msg)});
  };

  const bool range_ok = (p > 1.0 && p < static_cast<double>(N));
  add("exponent-range", range_ok, "1 < p(0) < N with p(0) = " + fmt(p) + ", N = " + fmt(N));

  if (range_ok) {
    const double ps = critical_trace_exponent(p, N);
    const double dev = std::abs(config.r_model.value() - ps);
    add("criticality", dev <= 1e-10,
        "|r(0) - p_*(0)| = " + fmt(dev) + " (p_* = " + fmt(ps) + ")");

    const double bound42 = std::min(std::sqrt(static_cast<double>(N)),
                                    static_cast<double>(N) * N / (3.0 * N - 2.0));
    add("thm42-exponent-bound", p < bound42,
        "p(0) = " + fmt(p) + " vs min{sqrt(N), N^2/(3N-2)} = " + fmt(bound42));

    add("boundary-expansion-bound", p < 0.5 * (N - 1),
        "p(0) = " + fmt(p) + " vs (N-1)/2 = " + fmt(0.5 * (N - 1)));
  }

  add("p-local-min-gradient", config.p_model.tangential_gradient().norm() <= 1e-12,
      "|grad_y p(0)| = " + fmt(config.p_model.tangential_gradient().norm()));

  add("r-critical-gradient", config.r_model.gradient().norm() <= 1e-12,
      "|grad r(0)| = " + fmt(config.r_model.gradient().norm()));

  // r lives on the boundary: normal derivative data must be zero by convention.
  const int n = config.r_model.dimension();
  double r_normal = std::abs(config.r_model.gradient()[n - 1]);
  for (int i = 0; i < n; ++i) r_normal = std::max(r_normal, std::abs(config.r_model.hessian()(i, n - 1)));
  add("r-tangential-only", r_normal <= 1e-12,
      "normal components of the r model = " + fmt(r_normal));

  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(config.r_model.tangential_hessian());
    const double max_eig = es.eigenvalues().maxCoeff();
    add("r-hessian-nsd", max_eig <= 1e-12,
        "max eigenvalue of D^2_y r(0) = " + fmt(max_eig));
  }

  if (for_case4) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(config.p_model.hessian());
    const double min_eig = es.eigenvalues().minCoeff();
    add("p-hessian-psd", min_eig >= -1e-12,
        "min eigenvalue of D^2 p(0) = " + fmt(min_eig));
  }

  bool eps_ok = !config.epsilon_grid.empty();
  for (double e : config.epsilon_grid) eps_ok = eps_ok && e > 0.0 && e < 1.0;
  add("epsilon-grid", eps_ok, "epsilon grid nonempty with values in (0,1)");

  const bool s_ok = std::any_of(config.s_grid.begin(), config.s_grid.end(),
                                [](double s) { return s == 1.0; });
  add("s-grid", s_ok, "s grid contains 1");

  return rep;
}

}  // namespace vextrace

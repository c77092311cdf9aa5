#include "vextrace/fermi.hpp"

#include <algorithm>
#include <cmath>

namespace vextrace {

namespace {

double pow_int(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

Eigen::MatrixXd fd_chart_derivative(const GeometrySpec& spec, const Eigen::VectorXd& y,
                                    double t, double step) {
  const int N = spec.dimension();
  Eigen::MatrixXd D(N, N);
  for (int j = 0; j < N - 1; ++j) {
    Eigen::VectorXd yp = y, ym = y;
    yp[j] += step;
    ym[j] -= step;
    D.col(j) = (chart_map(spec, yp, t) - chart_map(spec, ym, t)) / (2.0 * step);
  }
  D.col(N - 1) = (chart_map(spec, y, t + step) - chart_map(spec, y, t - step)) / (2.0 * step);
  return D;
}

}  // namespace

PolynomialField::PolynomialField(int vars,
                                 std::vector<std::pair<std::vector<int>, double>> terms)
    : vars_(vars), terms_(std::move(terms)) {
  if (vars_ < 1) throw std::invalid_argument("PolynomialField: needs at least one variable");
  for (const auto& [idx, c] : terms_) {
    (void)c;
    if (static_cast<int>(idx.size()) != vars_)
      throw std::invalid_argument("PolynomialField: multi-index length mismatch");
    for (int k : idx)
      if (k < 0) throw std::invalid_argument("PolynomialField: negative exponent");
  }
}

double PolynomialField::value(const Eigen::VectorXd& y) const {
  double s = 0.0;
  for (const auto& [idx, c] : terms_) {
    double t = c;
    for (int i = 0; i < vars_; ++i) t *= pow_int(y[i], idx[i]);
    s += t;
  }
  return s;
}

Eigen::VectorXd PolynomialField::gradient(const Eigen::VectorXd& y) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(vars_);
  for (const auto& [idx, c] : terms_) {
    for (int j = 0; j < vars_; ++j) {
      if (idx[j] == 0) continue;
      double t = c * idx[j] * pow_int(y[j], idx[j] - 1);
      for (int i = 0; i < vars_; ++i)
        if (i != j) t *= pow_int(y[i], idx[i]);
      g[j] += t;
    }
  }
  return g;
}

Eigen::MatrixXd PolynomialField::hessian(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(vars_, vars_);
  for (const auto& [idx, c] : terms_) {
    for (int j = 0; j < vars_; ++j) {
      if (idx[j] == 0) continue;
      // diagonal
      if (idx[j] >= 2) {
        double t = c * idx[j] * (idx[j] - 1) * pow_int(y[j], idx[j] - 2);
        for (int i = 0; i < vars_; ++i)
          if (i != j) t *= pow_int(y[i], idx[i]);
        h(j, j) += t;
      }
      for (int l = j + 1; l < vars_; ++l) {
        if (idx[l] == 0) continue;
        double t = c * idx[j] * idx[l] * pow_int(y[j], idx[j] - 1) * pow_int(y[l], idx[l] - 1);
        for (int i = 0; i < vars_; ++i)
          if (i != j && i != l) t *= pow_int(y[i], idx[i]);
        h(j, l) += t;
        h(l, j) += t;
      }
    }
  }
  return h;
}

nlohmann::json PolynomialField::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [idx, c] : terms_)
    terms.push_back({{"index", idx}, {"coeff", c}});
  return {{"vars", vars_}, {"terms", terms}};
}

PolynomialField PolynomialField::from_json(const nlohmann::json& j) {
  std::vector<std::pair<std::vector<int>, double>> terms;
  for (const auto& t : j.at("terms"))
    terms.emplace_back(t.at("index").get<std::vector<int>>(), t.at("coeff").get<double>());
  return PolynomialField(j.at("vars").get<int>(), std::move(terms));
}

GeometrySpec GeometrySpec::flat(int N, double delta) {
  return from_hessian(N, Eigen::MatrixXd::Zero(N - 1, N - 1), delta);
}

GeometrySpec GeometrySpec::from_hessian(int N, Eigen::MatrixXd psi_hessian, double delta) {
  if (N < 3) throw std::invalid_argument("GeometrySpec: N must be >= 3");
  if (psi_hessian.rows() != N - 1 || psi_hessian.cols() != N - 1)
    throw std::invalid_argument("GeometrySpec: Hessian must be (N-1)x(N-1)");
  const double scale = psi_hessian.norm();
  if ((psi_hessian - psi_hessian.transpose()).norm() > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("GeometrySpec: Hessian must be symmetric");
  if (!(delta > 0.0)) throw std::invalid_argument("GeometrySpec: delta must be positive");
  GeometrySpec g;
  g.N_ = N;
  g.hessian_ = 0.5 * (psi_hessian + psi_hessian.transpose());
  g.delta_ = delta;
  g.finalize();
  return g;
}

GeometrySpec GeometrySpec::from_psi(int N, PolynomialField psi, double delta) {
  if (psi.vars() != N - 1)
    throw std::invalid_argument("GeometrySpec: psi must have N-1 variables");
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(N - 1);
  if (std::abs(psi.value(origin)) > 0.0 || psi.gradient(origin).norm() > 0.0)
    throw std::invalid_argument("GeometrySpec: psi(0) = 0 and grad psi(0) = 0 required");
  GeometrySpec g = from_hessian(N, psi.hessian(origin), delta);
  g.psi_ = std::move(psi);
  g.finalize();
  return g;
}

const PolynomialField& GeometrySpec::psi() const {
  if (!psi_) throw std::logic_error("GeometrySpec: no psi evaluator present");
  return *psi_;
}

bool GeometrySpec::is_flat() const {
  if (hessian_.norm() > 0.0) return false;
  if (!psi_) return true;
  for (const auto& [idx, c] : psi_->terms())
    if (c != 0.0) return false;
  return true;
}

void GeometrySpec::finalize() {
  const int m = N_ - 1;
  if (psi_) {
    effective_psi_ = *psi_;
  } else {
    // Osculating quadratic y -> y'Hy/2 as the chart model.
    std::vector<std::pair<std::vector<int>, double>> terms;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        const double c = (i == j) ? 0.5 * hessian_(i, i) : hessian_(i, j);
        if (c == 0.0) continue;
        std::vector<int> idx(m, 0);
        idx[i] += 1;
        idx[j] += 1;
        terms.push_back({idx, c});
      }
    if (terms.empty()) {
      std::vector<int> idx(m, 0);
      terms.push_back({idx, 0.0});
    }
    effective_psi_ = PolynomialField(m, std::move(terms));
  }

  y_radial_ = true;
  const double c = hessian_(0, 0);
  for (int i = 0; i < m && y_radial_; ++i)
    for (int j = 0; j < m; ++j) {
      const double want = (i == j) ? c : 0.0;
      if (std::abs(hessian_(i, j) - want) > 1e-12 * std::max(1.0, std::abs(c))) {
        y_radial_ = false;
        break;
      }
    }
  if (y_radial_ && psi_) {
    // Fixed pseudo-random probes: psi(y) must equal psi(|y| e1).
    for (int s = 0; s < 6 && y_radial_; ++s) {
      Eigen::VectorXd y(m);
      for (int i = 0; i < m; ++i)
        y[i] = 0.21 * std::sin(1.7 * (s + 1) * (i + 1)) + 0.13 * std::cos(0.9 * (s + 2) + i);
      Eigen::VectorXd axis = Eigen::VectorXd::Zero(m);
      axis[0] = y.norm();
      if (std::abs(psi_->value(y) - psi_->value(axis)) >
          1e-10 * std::max(1.0, std::abs(psi_->value(axis))))
        y_radial_ = false;
    }
  }
}

nlohmann::json GeometrySpec::to_json() const {
  nlohmann::json h = nlohmann::json::array();
  for (int i = 0; i < hessian_.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < hessian_.cols(); ++j) row.push_back(hessian_(i, j));
    h.push_back(row);
  }
  nlohmann::json j = {{"N", N_}, {"psi_hessian", h}, {"delta", delta_}};
  if (psi_) j["psi"] = psi_->to_json();
  return j;
}

GeometrySpec GeometrySpec::from_json(const nlohmann::json& j) {
  const int N = j.at("N").get<int>();
  const auto& h = j.at("psi_hessian");
  Eigen::MatrixXd hess(N - 1, N - 1);
  for (int i = 0; i < N - 1; ++i)
    for (int k = 0; k < N - 1; ++k) hess(i, k) = h.at(i).at(k).get<double>();
  const double delta = j.value("delta", 0.25);
  if (j.contains("psi")) {
    GeometrySpec g = from_psi(N, PolynomialField::from_json(j.at("psi")), delta);
    if ((g.second_fundamental_form() - hess).norm() > 1e-10 * std::max(1.0, hess.norm()))
      throw std::invalid_argument("GeometrySpec: psi Hessian disagrees with psi_hessian");
    return g;
  }
  return from_hessian(N, hess, delta);
}

Eigen::VectorXd unit_inward_normal(const GeometrySpec& spec, const Eigen::VectorXd& y) {
  const int N = spec.dimension();
  const Eigen::VectorXd grad = spec.effective_psi().gradient(y);
  Eigen::VectorXd nu(N);
  nu.head(N - 1) = -grad;
  nu[N - 1] = 1.0;
  nu /= std::sqrt(1.0 + grad.squaredNorm());
  return nu;
}

Eigen::VectorXd chart_map(const GeometrySpec& spec, const Eigen::VectorXd& y, double t) {
  const int N = spec.dimension();
  if (y.size() != N - 1) throw std::invalid_argument("chart_map: y must have N-1 entries");
  // The graph formula extends smoothly to slightly negative t; the slack
  // admits boundary-centered finite differences.
  if (y.norm() >= 2.0 * spec.delta() || t < -0.01 * spec.delta() || t >= 2.0 * spec.delta())
    throw std::domain_error("chart_map: point outside the chart box");
  Eigen::VectorXd x(N);
  x.head(N - 1) = y;
  x[N - 1] = spec.effective_psi().value(y);
  return x + t * unit_inward_normal(spec, y);
}

double jacobian_det(const GeometrySpec& spec, const Eigen::VectorXd& y, double t) {
  const double step = 1e-5 * spec.delta();
  const double det = fd_chart_derivative(spec, y, t, step).determinant();
  if (!(det > 0.0))
    throw numerical_error("jacobian_det: chart not injective (determinant <= 0)");
  return det;
}

CurvatureData curvature_data(const GeometrySpec& spec) {
  return {spec.mean_curvature(), spec.second_fundamental_form()};
}

namespace {

// Fixed smooth probe with analytic gradient for the metric residual.
struct MetricProbe {
  Eigen::VectorXd grad(const Eigen::VectorXd& y, double t, int m) const {
    Eigen::VectorXd g(m + 1);
    double phase = 0.4 + 0.3 * t;
    for (int i = 0; i < m; ++i) phase += (0.5 + 0.07 * i) * y[i];
    const double c = std::cos(phase);
    for (int i = 0; i < m; ++i) g[i] = c * (0.5 + 0.07 * i);
    g[m] = c * 0.3;
    return g;
  }
};

double slope_or_infinity(const std::vector<double>& sigmas, const std::vector<double>& residuals) {
  // Residuals at the finite-difference noise floor count as vanishing.
  bool all_tiny = true;
  for (double r : residuals)
    if (r > 1e-9) all_tiny = false;
  if (all_tiny) return std::numeric_limits<double>::infinity();
  // least-squares slope of ln(res) vs ln(sigma), skipping exact zeros
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (residuals[i] <= 0.0) continue;
    const double x = std::log(sigmas[i]);
    const double yv = std::log(residuals[i]);
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
    ++n;
  }
  if (n < 2) throw numerical_error("expansion_residual_check: insufficient usable samples");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ExpansionOrders expansion_residual_check(const GeometrySpec& spec, int levels,
                                         int directions) {
  if (levels < 2 || directions < 2)
    throw std::invalid_argument("expansion_residual_check: insufficient samples requested");
  const int N = spec.dimension();
  const int m = N - 1;
  const double trace = spec.curvature_trace();
  const Eigen::MatrixXd& h = spec.second_fundamental_form();
  const MetricProbe probe;

  std::vector<Eigen::VectorXd> dirs;
  for (int d = 0; d < directions; ++d) {
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i)
      v[i] = std::sin(2.3 * (d + 1) + 1.1 * i) + 0.3 * std::cos(0.7 * (d + 1) * (i + 1));
    dirs.push_back(v.normalized());
  }

  std::vector<double> sigmas, res_j, res_m;
  const double fd_step = 1e-5 * spec.delta();
  for (int k = 0; k < levels; ++k) {
    const double sigma = 0.9 * spec.delta() * std::pow(0.5, k);
    double rj = 0.0, rm = 0.0;
    for (const auto& d : dirs) {
      for (double ry : {0.5 * sigma, sigma}) {
        for (double t : {0.25 * sigma, 0.5 * sigma, sigma}) {
          const Eigen::VectorXd y = ry * d;
          const Eigen::MatrixXd D = fd_chart_derivative(spec, y, t, fd_step);
          rj = std::max(rj, std::abs(D.determinant() - (1.0 - trace * t)));

          const Eigen::MatrixXd G = D.transpose() * D;
          const Eigen::VectorXd g = probe.grad(y, t, m);
          const double true_sq = g.dot(G.llt().solve(g));
          double model_sq = g[m] * g[m];
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
              model_sq += ((i == j ? 1.0 : 0.0) + 2.0 * h(i, j) * t) * g[i] * g[j];
          rm = std::max(rm, std::abs(true_sq - model_sq));
        }
      }
    }
    sigmas.push_back(sigma);
    res_j.push_back(rj);
    res_m.push_back(rm);
  }
  return {slope_or_infinity(sigmas, res_j), slope_or_infinity(sigmas, res_m)};
}

RadialChartData radial_chart_data(const GeometrySpec& spec, double rho, double t) {
  if (spec.is_flat()) return {1.0, 1.0, 1.0};
  if (!spec.is_y_radial())
    throw hypothesis_error("radial_chart_data: geometry is not y-radial");
  const int N = spec.dimension();
  const int m = N - 1;
  const PolynomialField& psi = spec.effective_psi();

  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  y[0] = rho;
  const Eigen::VectorXd grad = psi.gradient(y);
  const Eigen::MatrixXd hess = psi.hessian(y);
  const double W = std::sqrt(1.0 + grad.squaredNorm());

  Eigen::VectorXd nu(N);
  nu.head(m) = -grad;
  nu[m] = 1.0;
  nu /= W;

  // d_j nu = (-(D^2 psi) e_j, 0)/W - nu * (grad' D^2 psi e_j) / W^2
  Eigen::MatrixXd D(N, N);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd dnu(N);
    dnu.head(m) = -hess.col(j);
    dnu[m] = 0.0;
    dnu /= W;
    dnu -= nu * (grad.dot(hess.col(j)) / (W * W));
    Eigen::VectorXd col(N);
    col.setZero();
    col[j] = 1.0;
    col[m] = grad[j];
    D.col(j) = col + t * dnu;
  }
  D.col(m) = nu;

  const double det = D.determinant();
  if (!(det > 0.0))
    throw numerical_error("radial_chart_data: chart not injective (determinant <= 0)");

  const Eigen::MatrixXd tangential = D.leftCols(m);
  const Eigen::MatrixXd G = tangential.transpose() * tangential;
  const Eigen::MatrixXd Ginv = G.inverse();
  return {det, Ginv(0, 0), W};
}

}  // namespace vextrace

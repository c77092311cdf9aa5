#include "vextrace/extremal.hpp"

#include <cmath>

namespace vextrace {

BubbleParams::BubbleParams(int N_, double p_) : N(N_), p(p_) {
  if (N < 3) throw std::invalid_argument("BubbleParams: N must be >= 3");
  if (!(p > 1.0 && p < static_cast<double>(N)))
    throw std::invalid_argument("BubbleParams: requires 1 < p < N");
}

double bubble_value(const BubbleParams& params, double rho, double t) {
  if (t < 0.0) throw std::invalid_argument("bubble_value: t must be >= 0");
  const double r2 = (1.0 + t) * (1.0 + t) + rho * rho;
  return std::pow(r2, -0.5 * params.beta());
}

double bubble_gradient_norm(const BubbleParams& params, double rho, double t, double eps) {
  if (t < 0.0) throw std::invalid_argument("bubble_gradient_norm: t must be >= 0");
  if (!(eps > 0.0)) throw std::invalid_argument("bubble_gradient_norm: eps must be > 0");
  const int N = params.N;
  const double p = params.p;
  const double r2 = (eps + t) * (eps + t) + rho * rho;
  return params.beta() * std::pow(eps, (N - p) / (p * (p - 1.0))) *
         std::pow(r2, -0.5 * (N - 1) / (p - 1.0));
}

double RescaledBubble::operator()(double rho, double t) const {
  const double scale = std::pow(eps, -(params.N - params.p) / params.p);
  return scale * bubble_value(params, rho / eps, t / eps);
}

double RescaledBubble::d_rho(double rho, double t) const {
  const double scale = std::pow(eps, -(params.N - params.p) / params.p - 1.0);
  const double u = rho / eps, w = t / eps;
  const double r2 = (1.0 + w) * (1.0 + w) + u * u;
  return scale * (-params.beta() * u * std::pow(r2, -0.5 * params.beta() - 1.0));
}

double RescaledBubble::d_t(double rho, double t) const {
  const double scale = std::pow(eps, -(params.N - params.p) / params.p - 1.0);
  const double u = rho / eps, w = t / eps;
  const double r2 = (1.0 + w) * (1.0 + w) + u * u;
  return scale * (-params.beta() * (1.0 + w) * std::pow(r2, -0.5 * params.beta() - 1.0));
}

RescaledBubble rescale_bubble(const BubbleParams& params, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("rescale_bubble: eps must be > 0");
  return {params, eps};
}

namespace {

double ln_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

struct EntryRequest {
  // weight(rho, t) multiplying |grad V|^p (times optional ln|grad V|)
  int t_power = 0;
  int rho_power = 0;   // extra |y| powers beyond the surface measure
  int rinv_power = 0;  // powers of 1/r^2 counted in r^{-2} units
  bool log_weight = false;
  double moment = 1.0;  // sphere-moment factor for anisotropic monomials
};

// Convergence gap of the radial integrand at infinity: the weighted kernel
// decays like r^{-(e + 2*rinv - t_power - rho_power)}. Convergence of the
// half-space integral needs that exponent > N.
double decay_exponent(const BubbleParams& bp, const EntryRequest& rq) {
  return bp.gradient_decay() + 2.0 * rq.rinv_power - rq.t_power - rq.rho_power;
}

TableEntry compute_entry(const BubbleParams& bp, const EntryRequest& rq,
                         const std::string& condition, bool condition_holds,
                         const QuadratureSpec& spec) {
  TableEntry e;
  e.condition = condition;
  if (!condition_holds) return e;
  const double beta = bp.beta();
  const double ex = bp.gradient_decay();
  RadialKernel k;
  k.decay_exponent = decay_exponent(bp, rq);
  k.logarithmic = rq.log_weight;
  const double lnbeta = std::log(beta);
  k.g = [=](double rho, double t) {
    const double r2 = (1.0 + t) * (1.0 + t) + rho * rho;
    double v = std::pow(beta, bp.p) * std::pow(r2, -0.5 * ex);
    for (int i = 0; i < rq.t_power; ++i) v *= t;
    for (int i = 0; i < rq.rho_power; ++i) v *= rho;
    for (int i = 0; i < rq.rinv_power; ++i) v /= r2;
    if (rq.log_weight) {
      // ln|grad V| = ln beta - ((N-1)/(2(p-1))) ln r^2
      v *= lnbeta - 0.5 * (bp.N - 1) / (bp.p - 1.0) * std::log(r2);
    }
    return v;
  };
  const IntegralEstimate est = halfspace_integral(k, bp.N, spec);
  e.value = rq.moment * est.value;
  e.error = std::abs(rq.moment) * est.error;
  e.available = true;
  return e;
}

}  // namespace

BubbleIntegralTable bubble_integral_table(const BubbleParams& params,
                                          const QuadratureSpec& spec) {
  BubbleIntegralTable tab;
  tab.params = params;
  const int N = params.N;
  const double p = params.p;
  const double beta = params.beta();
  const int m = N - 1;  // boundary dimension

  const bool t1_ok = beta > 1.0;    // p < (N+1)/2
  const bool t2_ok = beta > 2.0;    // p < (N+2)/3
  const std::string cond_t1 = "p < (N+1)/2";
  const std::string cond_t2 = "p < (N+2)/3";

  tab.g0 = compute_entry(params, {0, 0, 0, false, 1.0}, "", true, spec);
  tab.g1 = compute_entry(params, {1, 0, 0, false, 1.0}, cond_t1, t1_ok, spec);
  tab.g2 = compute_entry(params, {2, 0, 0, false, 1.0}, cond_t2, t2_ok, spec);
  tab.gy = compute_entry(params, {0, 2, 0, false, 1.0}, cond_t2, t2_ok, spec);
  tab.gyr = compute_entry(params, {0, 2, 1, false, 1.0}, "", true, spec);
  tab.gty = compute_entry(params, {1, 2, 1, false, 1.0}, cond_t1, t1_ok, spec);
  tab.gt2y = compute_entry(params, {2, 2, 1, false, 1.0}, cond_t2, t2_ok, spec);

  // Anisotropic fourth moments via sphere-moment factors:
  //   int w(rho,t) y_1^4 = <y_1^4>_{S^{m-1}} * int w rho^4,  etc.
  const int e4[] = {4};
  const int e22[] = {2, 2};
  tab.gy4r = compute_entry(params, {0, 4, 1, false, sphere_moment(e4, m)}, cond_t2, t2_ok, spec);
  tab.gy22r = compute_entry(params, {0, 4, 1, false, sphere_moment(e22, m)}, cond_t2, t2_ok, spec);

  tab.g1_log = compute_entry(params, {1, 0, 0, true, 1.0}, cond_t1, t1_ok, spec);
  tab.g2_log = compute_entry(params, {2, 0, 0, true, 1.0}, cond_t2, t2_ok, spec);
  tab.gty_log = compute_entry(params, {1, 2, 1, true, 1.0}, cond_t1, t1_ok, spec);
  tab.gt2y_log = compute_entry(params, {2, 2, 1, true, 1.0}, cond_t2, t2_ok, spec);

  // V^p decays like r^{-beta p}; finite iff p^2 < N.
  {
    TableEntry e;
    e.condition = "p^2 < N";
    if (p * p < static_cast<double>(N)) {
      RadialKernel k;
      k.decay_exponent = beta * p;
      k.g = [params](double rho, double t) {
        const double r2 = (1.0 + t) * (1.0 + t) + rho * rho;
        return std::pow(r2, -0.5 * params.beta() * params.p);
      };
      const IntegralEstimate est = halfspace_integral(k, N, spec);
      e.value = est.value;
      e.error = est.error;
      e.available = true;
    }
    tab.vp = e;
  }

  // Boundary entries: V(y,0)^{p_*} = (1+rho^2)^{-e/2} with e = beta p_*.
  {
    const double ex = params.gradient_decay();  // beta * p_* = p (N-1)/(p-1)
    BoundaryKernel k0;
    k0.decay_exponent = ex;
    k0.g = [ex](double rho) { return std::pow(1.0 + rho * rho, -0.5 * ex); };
    const IntegralEstimate est = boundary_integral(k0, N, spec);
    tab.s0 = {est.value, est.error, true, ""};

    TableEntry e;
    e.condition = "p < (N-1)/2";
    if (p < 0.5 * (N - 1)) {
      BoundaryKernel ky;
      ky.decay_exponent = ex - 2.0;
      ky.g = [ex](double rho) {
        return rho * rho * std::pow(1.0 + rho * rho, -0.5 * ex);
      };
      const IntegralEstimate esty = boundary_integral(ky, N, spec);
      e.value = esty.value;
      e.error = esty.error;
      e.available = true;
    }
    tab.sy = e;
  }

  return tab;
}

nlohmann::json BubbleIntegralTable::to_json() const {
  auto entry = [](const TableEntry& e) {
    nlohmann::json j = {{"available", e.available}};
    if (e.available) {
      j["value"] = e.value;
      j["error"] = e.error;
    }
    if (!e.condition.empty()) j["condition"] = e.condition;
    return j;
  };
  return {{"N", params.N},        {"p", params.p},
          {"G0", entry(g0)},      {"G1", entry(g1)},
          {"G2", entry(g2)},      {"Gy", entry(gy)},
          {"Gyr", entry(gyr)},    {"Gty", entry(gty)},
          {"Gt2y", entry(gt2y)},  {"Gy4r", entry(gy4r)},
          {"Gy22r", entry(gy22r)},{"G1L", entry(g1_log)},
          {"G2L", entry(g2_log)}, {"GtyL", entry(gty_log)},
          {"Gt2yL", entry(gt2y_log)}, {"Vp", entry(vp)},
          {"S0", entry(s0)},      {"Sy", entry(sy)}};
}

double trace_constant(int N, double p, const QuadratureSpec& spec) {
  const BubbleParams bp(N, p);
  const double ex = bp.gradient_decay();
  RadialKernel kg;
  kg.decay_exponent = ex;
  kg.g = [bp, ex](double rho, double t) {
    const double r2 = (1.0 + t) * (1.0 + t) + rho * rho;
    return std::pow(bp.beta(), bp.p) * std::pow(r2, -0.5 * ex);
  };
  BoundaryKernel kb;
  kb.decay_exponent = ex;
  kb.g = [ex](double rho) { return std::pow(1.0 + rho * rho, -0.5 * ex); };
  const double grad = halfspace_integral(kg, N, spec).value;
  const double trace = boundary_integral(kb, N, spec).value;
  const double kbar_inv = std::pow(grad, 1.0 / p) / std::pow(trace, 1.0 / bp.p_star());
  return 1.0 / kbar_inv;
}

double trace_constant_closed_form(int N, double p) {
  const BubbleParams bp(N, p);
  const double beta = bp.beta();
  const double s0 = unit_sphere_area(N - 2) * 0.5 *
                    std::exp(ln_beta(0.5 * (N - 1), 0.5 * (beta + 1.0)));
  const double kbar_inv =
      std::pow(beta, (p - 1.0) / p) * std::pow(s0, 1.0 / p - 1.0 / bp.p_star());
  return 1.0 / kbar_inv;
}

NormalizedProfile normalized_profile(int N, double p, const QuadratureSpec& spec) {
  const BubbleParams bp(N, p);
  const double ps = bp.p_star();
  const double ex = bp.gradient_decay();

  RadialKernel kg;
  kg.decay_exponent = ex;
  kg.g = [bp, ex](double rho, double t) {
    const double r2 = (1.0 + t) * (1.0 + t) + rho * rho;
    return std::pow(bp.beta(), bp.p) * std::pow(r2, -0.5 * ex);
  };
  BoundaryKernel kb;
  kb.decay_exponent = ex;
  kb.g = [ex](double rho) { return std::pow(1.0 + rho * rho, -0.5 * ex); };

  const double g0 = halfspace_integral(kg, N, spec).value;
  const double s0 = boundary_integral(kb, N, spec).value;
  const double kbar = 1.0 / (std::pow(g0, 1.0 / p) / std::pow(s0, 1.0 / ps));

  NormalizedProfile out;
  out.C = std::pow(kbar, -p / (ps - p)) * std::pow(s0, -1.0 / ps);
  out.grad_energy = std::pow(out.C, p) * g0;
  out.trace_mass = std::pow(out.C, ps) * s0;
  out.target = std::pow(kbar, -p * ps / (ps - p));
  return out;
}

}  // namespace vextrace

#include "vextrace/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace vextrace {

double functional_value(const SampledField& u, std::span<const SampledField> grad_u,
                        const SampledField& p, const SampledField& h,
                        const SampledField& r, const SampledField& boundary_u) {
  if (!u.same_grid(p) || !u.same_grid(h))
    throw std::invalid_argument("functional_value: interior grid mismatch");
  for (const auto& g : grad_u)
    if (!u.same_grid(g)) throw std::invalid_argument("functional_value: gradient grid mismatch");
  if (!boundary_u.same_grid(r))
    throw std::invalid_argument("functional_value: boundary grid mismatch");

  double bulk = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double pi = p.values()[i];
    double g2 = 0.0;
    for (const auto& g : grad_u) g2 += g.values()[i] * g.values()[i];
    bulk += u.weights()[i] / pi *
            (std::pow(std::sqrt(g2), pi) + h.values()[i] * std::pow(std::abs(u.values()[i]), pi));
  }
  double tr = 0.0;
  for (std::size_t i = 0; i < boundary_u.size(); ++i) {
    const double ri = r.values()[i];
    tr += boundary_u.weights()[i] / ri * std::pow(std::abs(boundary_u.values()[i]), ri);
  }
  return bulk - tr;
}

double FCoefficients::f0(double s) const {
  return level * (std::pow(s, p) / p - std::pow(s, p_star) / p_star);
}

double FCoefficients::f0_d(double s) const {
  return level * (std::pow(s, p - 1.0) - std::pow(s, p_star - 1.0));
}

double FCoefficients::f0_dd(double s) const {
  return level * ((p - 1.0) * std::pow(s, p - 2.0) - (p_star - 1.0) * std::pow(s, p_star - 2.0));
}

namespace {

Coefficient scaled_term(const std::string& name, double pref, const TableEntry& e) {
  if (pref == 0.0) return {name, 0.0, true, ""};
  if (!e.available) return {name, 0.0, false, e.condition};
  return {name, pref * e.value, true, ""};
}

}  // namespace

Coefficient FCoefficients::f1(double s) const {
  return scaled_term("f1", -(N / p) * (std::pow(s, p) / p) * dt_p, zg1);
}

Coefficient FCoefficients::f2(double s) const {
  Coefficient a = scaled_term("f2", -curv_trace * std::pow(s, p) / p, zg1);
  Coefficient b = scaled_term("f2", curv_trace / (N - 1.0) * std::pow(s, p), zgty);
  if (!a.available || !b.available)
    return {"f2", 0.0, false, a.available ? b.note : a.note};
  return {"f2", a.value + b.value, true, ""};
}

Coefficient FCoefficients::f3(double s) const {
  return scaled_term("f3", h0 * std::pow(s, p) / p, zg0);
}

Coefficient FCoefficients::f4(double s) const {
  Coefficient a = scaled_term("f4", -std::pow(s, p) * N / (2.0 * p * p) * dtt_p, zg2);
  Coefficient b = scaled_term("f4", -std::pow(s, p) * N / (2.0 * p * p) * lap_y_p, zgy);
  Coefficient c = scaled_term("f4", std::pow(s, p_star) / (2.0 * p_star * p_star) * lap_y_r, zsy);
  for (const Coefficient* x : {&a, &b, &c})
    if (!x->available) return {"f4", 0.0, false, x->note};
  return {"f4", a.value + b.value + c.value, true, ""};
}

double FCoefficients::f1_d(double s) const {
  if (!zg1.available) throw hypothesis_error("f1_d: " + zg1.condition);
  return -(N / p) * std::pow(s, p - 1.0) * dt_p * zg1.value;
}

double FCoefficients::argmax_shift_rate() const { return -f1_d(1.0) / f0_dd(1.0); }

FCoefficients f_coefficients(const ProblemConfig& config, const QuadratureSpec& spec) {
  const int N = config.dimension;
  const BubbleParams bp(N, config.p0());
  const BubbleIntegralTable tab = bubble_integral_table(bp, spec);
  const NormalizedProfile prof = normalized_profile(N, bp.p, spec);

  FCoefficients fc;
  fc.N = N;
  fc.p = bp.p;
  fc.p_star = bp.p_star();
  fc.C = prof.C;
  fc.level = prof.target;
  fc.kbar = std::pow(prof.target, -(fc.p_star - fc.p) / (fc.p * fc.p_star));

  const double cp = std::pow(prof.C, fc.p);
  const double cps = std::pow(prof.C, fc.p_star);
  auto scale = [](TableEntry e, double factor) {
    e.value *= factor;
    e.error *= factor;
    return e;
  };
  fc.zg0 = scale(tab.g0, cp);
  fc.zg1 = scale(tab.g1, cp);
  fc.zgty = scale(tab.gty, cp);
  fc.zg2 = scale(tab.g2, cp);
  fc.zgy = scale(tab.gy, cp);
  fc.zsy = scale(tab.sy, cps);

  fc.dt_p = config.p_model.dt();
  fc.dtt_p = config.p_model.dtt();
  fc.lap_y_p = config.p_model.tangential_laplacian();
  fc.lap_y_r = config.r_model.tangential_laplacian();
  fc.h0 = config.h_model.value();
  fc.curv_trace = config.geometry.curvature_trace();
  return fc;
}

namespace {

// F(s z_eps) by direct quadrature of the three functional terms.
double direct_energy(const ProblemConfig& config, double eps, double s, double C,
                     const QuadratureSpec& spec) {
  if (s == 0.0) return 0.0;
  const double sc = s * C;
  const TaylorModel& pm = config.p_model;
  const TaylorModel& hm = config.h_model;
  const TaylorModel& rm = config.r_model;

  auto w_grad = [&pm, sc](double rho, double t) {
    const double pv = pm.at_radial(rho, t);
    return std::pow(sc, pv) / pv;
  };
  auto w_vol = [&pm, &hm, sc](double rho, double t) {
    const double pv = pm.at_radial(rho, t);
    return hm.at_radial(rho, t) * std::pow(sc, pv) / pv;
  };
  auto w_tr = [&rm, sc](double rho, double t) {
    const double rv = rm.at_radial(rho, t);
    return std::pow(sc, rv) / rv;
  };
  const double grad = lhs_integral(config, LhsKind::gradient, eps, w_grad, spec);
  const double vol = lhs_integral(config, LhsKind::volume, eps, w_vol, spec);
  const double tr = lhs_integral(config, LhsKind::boundary, eps, w_tr, spec);
  return grad + vol - tr;
}

}  // namespace

EnergyCurve energy_curve(const ProblemConfig& config, double eps,
                         const QuadratureSpec& spec) {
  const double C = normalized_profile(config.dimension, config.p0(), spec).C;

  std::vector<double> sgrid = config.s_grid;
  if (sgrid.empty())
    for (int i = 0; i < 64; ++i)
      sgrid.push_back(1e-2 * std::pow(4.0 / 1e-2, i / 63.0));
  sgrid.push_back(1.0);  // the curve always contains s = 1
  std::sort(sgrid.begin(), sgrid.end());
  sgrid.erase(std::unique(sgrid.begin(), sgrid.end()), sgrid.end());

  EnergyCurve curve;
  curve.eps = eps;
  curve.s = sgrid;
  curve.values.reserve(sgrid.size());
  for (double s : sgrid) curve.values.push_back(direct_energy(config, eps, s, C, spec));

  std::size_t imax = 0;
  for (std::size_t i = 1; i < sgrid.size(); ++i)
    if (curve.values[i] > curve.values[imax]) imax = i;

  // Golden-section refinement around the grid argmax.
  double a = sgrid[imax > 0 ? imax - 1 : imax];
  double b = sgrid[imax + 1 < sgrid.size() ? imax + 1 : imax];
  if (a == b) {
    curve.s_argmax = sgrid[imax];
    curve.max_value = curve.values[imax];
    return curve;
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = direct_energy(config, eps, x1, C, spec);
  double f2 = direct_energy(config, eps, x2, C, spec);
  while (b - a > 1e-6) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = direct_energy(config, eps, x2, C, spec);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = direct_energy(config, eps, x1, C, spec);
    }
  }
  curve.s_argmax = 0.5 * (a + b);
  curve.max_value = direct_energy(config, eps, curve.s_argmax, C, spec);
  if (curve.max_value < curve.values[imax]) {
    curve.s_argmax = sgrid[imax];
    curve.max_value = curve.values[imax];
  }
  return curve;
}

nlohmann::json EnergyCurve::to_json() const {
  return {{"eps", eps},
          {"s", s},
          {"values", values},
          {"s_argmax", s_argmax},
          {"max_value", max_value}};
}

std::string EnergyCurve::to_csv() const {
  std::ostringstream os;
  os << "s,F\n";
  char buf[80];
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", s[i], values[i]);
    os << buf;
  }
  return os.str();
}

double critical_level_model(const ProblemConfig& config, const QuadratureSpec& spec) {
  const BubbleParams bp(config.dimension, config.p0());
  const double level = normalized_profile(config.dimension, bp.p, spec).target;
  return (1.0 / bp.p - 1.0 / bp.p_star()) * level;
}

Verdict theorem42_verdict(const ProblemConfig& config, const QuadratureSpec& spec) {
  const double dtp = config.p_model.dt();
  const double H = config.geometry.mean_curvature();
  const double p = config.p0();

  TheoremCase selected = TheoremCase::none;
  if (dtp > 0.0)
    selected = TheoremCase::case1;
  else if (dtp == 0.0 && H > 0.0)
    selected = TheoremCase::case2;
  else if (dtp == 0.0 && H == 0.0)
    selected = (p < 2.0) ? TheoremCase::case3 : TheoremCase::case4;

  const ValidationReport report = validate_config(config, selected == TheoremCase::case4);
  static const char* critical[] = {"exponent-range",      "criticality",
                                   "thm42-exponent-bound", "p-local-min-gradient",
                                   "r-critical-gradient",  "r-tangential-only",
                                   "r-hessian-nsd",        "p-hessian-psd"};
  for (const char* name : critical) {
    const ValidationCheck* c = report.find(name);
    if (c && !c->passed)
      throw hypothesis_error(std::string("theorem42_verdict: hypothesis failed: ") + name +
                             " (" + c->message + ")");
  }
  if (selected == TheoremCase::case4) {
    const ValidationCheck* c = report.find("boundary-expansion-bound");
    if (c && !c->passed)
      throw hypothesis_error(
          "theorem42_verdict: hypothesis failed: boundary-expansion-bound (" + c->message + ")");
  }

  const FCoefficients fc = f_coefficients(config, spec);
  Verdict v;
  v.model_level = (1.0 / fc.p - 1.0 / fc.p_star) * fc.level;
  v.notes.push_back("attainment of the localized constant at the origin is assumed, not checked");

  Coefficient tested;
  switch (selected) {
    case TheoremCase::case1:
      tested = fc.f1(1.0);
      v.tested_quantity = "f1(1)";
      break;
    case TheoremCase::case2:
      tested = fc.f2(1.0);
      v.tested_quantity = "f2(1)";
      v.notes.push_back(std::string("sufficient condition p < N-1 is ") +
                        (p < config.dimension - 1.0 ? "satisfied" : "violated"));
      break;
    case TheoremCase::case3:
      tested = fc.f3(1.0);
      v.tested_quantity = "f3(1)";
      break;
    case TheoremCase::case4:
      tested = fc.f4(1.0);
      v.tested_quantity = "f4(1)";
      break;
    case TheoremCase::none:
      v.case_id = TheoremCase::none;
      v.tested_quantity = "none";
      v.notes.push_back("no case applies: need dt p(0) > 0, or dt p(0) = 0 with H(0) >= 0");
      return v;
  }
  if (!tested.available)
    throw hypothesis_error("theorem42_verdict: " + v.tested_quantity +
                           " unavailable: " + tested.note);
  v.value = tested.value;
  if (tested.value < 0.0) {
    v.case_id = selected;
    v.pass = true;
  } else {
    v.case_id = TheoremCase::none;
    v.pass = false;
    v.notes.push_back(tested.value == 0.0 ? "tested quantity vanishes: inconclusive"
                                          : "tested quantity is nonnegative");
  }
  return v;
}

nlohmann::json Verdict::to_json() const {
  return {{"case", static_cast<int>(case_id)},
          {"tested_quantity", tested_quantity},
          {"value", value},
          {"pass", pass},
          {"model_critical_level", model_level},
          {"notes", notes}};
}

MountainPassResult mountain_pass_check(const EnergyFieldBundle& v,
                                       const ProblemConfig& config) {
  (void)config;  // exponent data comes sampled with the bundle
  double r_minus = v.boundary_r.values().front();
  for (double x : v.boundary_r.values()) r_minus = std::min(r_minus, x);
  double p_plus = v.p.values().front();
  for (double x : v.p.values()) p_plus = std::max(p_plus, x);
  if (!(r_minus > p_plus))
    throw hypothesis_error("mountain_pass_check: requires r^- > p^+");
  if (v.u.max_abs() == 0.0)
    throw std::invalid_argument("mountain_pass_check: v must be nonzero");

  auto F_at = [&v](double s) {
    std::vector<double> su = v.u.values();
    for (auto& x : su) x *= s;
    SampledField us(v.u.axes(), su, v.u.weights());
    std::vector<SampledField> gs;
    for (const auto& g : v.grad) {
      std::vector<double> gv = g.values();
      for (auto& x : gv) x *= s;
      gs.emplace_back(g.axes(), gv, g.weights());
    }
    std::vector<double> bu = v.boundary_u.values();
    for (auto& x : bu) x *= s;
    SampledField bs(v.boundary_u.axes(), bu, v.boundary_u.weights());
    return functional_value(us, gs, v.p, v.h, v.boundary_r, bs);
  };

  MountainPassResult out;
  const double base_norm = sobolev_norm(v.u, v.grad, v.p);

  out.small_sphere_positive = true;
  for (double target : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
    const double s = target / base_norm;
    const double val = F_at(s);
    if (val > 0.0) {
      out.small_witness_norm = target;
    } else {
      out.small_sphere_positive = false;
      out.notes.push_back("F not positive at norm " + std::to_string(target));
    }
  }

  const bool zero_trace = v.boundary_u.max_abs() == 0.0;
  if (zero_trace) {
    out.large_s_negative = false;
    out.notes.push_back("boundary trace vanishes: F(s v) never becomes negative");
    return out;
  }
  double s = 1.0;
  for (int k = 0; k < 60; ++k) {
    if (F_at(s) < 0.0) {
      const bool decreasing = F_at(2.0 * s) < F_at(s) && F_at(4.0 * s) < F_at(2.0 * s);
      if (decreasing) {
        out.large_s_negative = true;
        out.negative_witness_s = s;
        return out;
      }
    }
    s *= 2.0;
  }
  out.large_s_negative = false;
  out.notes.push_back("no s <= 2^60 with F(s v) < 0 and decreasing beyond");
  return out;
}

double monotonicity_gap(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("monotonicity_gap: requires p >= 1");
  if (x.size() != y.size()) throw std::invalid_argument("monotonicity_gap: size mismatch");
  auto flow = [p](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const double n = v.norm();
    if (n == 0.0) return Eigen::VectorXd::Zero(v.size());
    return std::pow(n, p - 2.0) * v;
  };
  return (flow(x) - flow(y)).dot(x - y);
}

double rayleigh_trace_bound(const ProblemConfig& config, double eps, int n_rho, int n_t) {
  const int N = config.dimension;
  const BubbleParams bp(N, config.p0());
  const double delta = config.geometry.delta();
  const double omega = unit_sphere_area(N - 2);
  const double C = normalized_profile(N, bp.p, {.rel_tol = 1e-8}).C;
  const RescaledBubble veps = rescale_bubble(bp, eps);
  const double cap = 2.0 * delta;

  auto cutoff = [delta](double s) {
    if (s <= delta) return 1.0;
    if (s >= 2.0 * delta) return 0.0;
    const double x = (s - delta) / delta;
    return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
  };
  auto cutoff_d = [delta](double s) {
    if (s <= delta || s >= 2.0 * delta) return 0.0;
    const double x = (s - delta) / delta;
    return -30.0 * x * x * (1.0 - x) * (1.0 - x) / delta;
  };

  // Interior (rho, t) grid with half-space volume weights omega rho^{N-2}.
  const double drho = cap / n_rho, dt = cap / n_t;
  std::vector<double> rho_axis(n_rho), t_axis(n_t);
  for (int i = 0; i < n_rho; ++i) rho_axis[i] = (i + 0.5) * drho;
  for (int j = 0; j < n_t; ++j) t_axis[j] = (j + 0.5) * dt;

  std::vector<double> zu, wts, pv, grho, gt;
  zu.reserve(static_cast<std::size_t>(n_rho) * n_t);
  for (int i = 0; i < n_rho; ++i)
    for (int j = 0; j < n_t; ++j) {
      const double rho = rho_axis[i], t = t_axis[j];
      const double s = std::hypot(rho, t);
      const double e = cutoff(s), ed = cutoff_d(s);
      const double V = veps(rho, t);
      zu.push_back(C * e * V);
      const double erho = s > 0 ? ed * rho / s : 0.0;
      const double et = s > 0 ? ed * t / s : 0.0;
      grho.push_back(C * (erho * V + e * veps.d_rho(rho, t)));
      gt.push_back(C * (et * V + e * veps.d_t(rho, t)));
      wts.push_back(omega * std::pow(rho, N - 2) * drho * dt);
      pv.push_back(config.p_model.at_radial(rho, t));
    }
  SampledField u({rho_axis, t_axis}, zu, wts);
  SampledField p({rho_axis, t_axis}, pv, wts);
  std::vector<SampledField> grad;
  grad.emplace_back(std::vector<std::vector<double>>{rho_axis, t_axis}, grho, wts);
  grad.emplace_back(std::vector<std::vector<double>>{rho_axis, t_axis}, gt, wts);

  // Boundary rho grid with surface weights.
  std::vector<double> bz, bw, br;
  for (int i = 0; i < n_rho; ++i) {
    const double rho = rho_axis[i];
    bz.push_back(C * cutoff(rho) * veps(rho, 0.0));
    bw.push_back(omega * std::pow(rho, N - 2) * drho);
    br.push_back(config.r_model.at_radial(rho, 0.0));
  }
  SampledField ub({rho_axis}, bz, bw);
  SampledField rb({rho_axis}, br, bw);

  const double num = sobolev_norm(u, grad, p);
  const double den = luxemburg_norm(ub, rb);
  if (den == 0.0) throw numerical_error("rayleigh_trace_bound: vanishing boundary norm");
  return num / den;
}

}  // namespace vextrace

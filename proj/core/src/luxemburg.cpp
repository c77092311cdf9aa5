#include "vextrace/luxemburg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace vextrace {

namespace {

void require_same_grid(const SampledField& a, const SampledField& b, const char* who) {
  if (!a.same_grid(b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

void require_exponent(const SampledField& p, const char* who) {
  for (double v : p.values())
    if (!(v >= 1.0)) throw std::invalid_argument(std::string(who) + ": exponent samples must be >= 1");
}

double min_value(const SampledField& f) {
  double m = f.values().front();
  for (double v : f.values()) m = std::min(m, v);
  return m;
}

/// Luxemburg norm of a general scaled modular lambda -> rho(1/lambda), which
/// must be continuous and strictly decreasing for nonzero data. `scale0`
/// seeds the bracket search.
double luxemburg_root(const std::function<double(double)>& scaled_modular, double scale0) {
  double lo = scale0, hi = scale0;
  double flo = scaled_modular(lo);
  int guard = 0;
  while (flo < 1.0) {  // lambda too large: shrink until the modular exceeds 1
    hi = lo;
    lo *= 0.5;
    flo = scaled_modular(lo);
    if (++guard > 2000) throw numerical_error("luxemburg_norm: bracketing failed (shrink)");
  }
  double fhi = scaled_modular(hi);
  guard = 0;
  while (fhi > 1.0) {
    lo = hi;
    hi *= 2.0;
    fhi = scaled_modular(hi);
    if (++guard > 2000) throw numerical_error("luxemburg_norm: bracketing failed (grow)");
  }
  // Safeguarded secant/bisection on g(lambda) = rho(u/lambda) - 1.
  double glo = scaled_modular(lo) - 1.0;
  double ghi = scaled_modular(hi) - 1.0;
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  for (int it = 0; it < 300; ++it) {
    double mid;
    if (ghi != glo && it % 4 != 3) {
      mid = hi - ghi * (hi - lo) / (ghi - glo);  // secant
      if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    } else {
      mid = 0.5 * (lo + hi);  // periodic bisection guards against stagnation
    }
    const double gmid = scaled_modular(mid) - 1.0;
    if (gmid > 0.0) {
      lo = mid;
      glo = gmid;
    } else {
      hi = mid;
      ghi = gmid;
    }
    if (hi - lo <= 1e-12 * hi) return 0.5 * (lo + hi);
  }
  throw numerical_error("luxemburg_norm: root iteration did not converge");
}

double grad_norm_at(std::span<const SampledField> grad, std::size_t i) {
  double s = 0.0;
  for (const auto& g : grad) s += g.values()[i] * g.values()[i];
  return std::sqrt(s);
}

}  // namespace

double modular(const SampledField& u, const SampledField& p) {
  require_same_grid(u, p, "modular");
  require_exponent(p, "modular");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    s += u.weights()[i] * std::pow(std::abs(u.values()[i]), p.values()[i]);
  return s;
}

double luxemburg_norm(const SampledField& u, const SampledField& p) {
  require_same_grid(u, p, "luxemburg_norm");
  require_exponent(p, "luxemburg_norm");
  const double umax = u.max_abs();
  if (umax == 0.0) return 0.0;
  const double pmin = min_value(p);
  const double scale0 = umax * std::pow(std::max(u.total_measure(), 1e-300), 1.0 / pmin);
  auto scaled = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      s += u.weights()[i] * std::pow(std::abs(u.values()[i]) / lambda, p.values()[i]);
    return s;
  };
  return luxemburg_root(scaled, scale0);
}

double sobolev_norm(const SampledField& u, std::span<const SampledField> grad_u,
                    const SampledField& p) {
  require_same_grid(u, p, "sobolev_norm");
  require_exponent(p, "sobolev_norm");
  for (const auto& g : grad_u) require_same_grid(u, g, "sobolev_norm");
  double umax = u.max_abs();
  for (std::size_t i = 0; i < u.size(); ++i) umax = std::max(umax, grad_norm_at(grad_u, i));
  if (umax == 0.0) return 0.0;
  const double pmin = min_value(p);
  const double scale0 = umax * std::pow(std::max(2.0 * u.total_measure(), 1e-300), 1.0 / pmin);
  auto scaled = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double pi = p.values()[i];
      s += u.weights()[i] * (std::pow(std::abs(u.values()[i]) / lambda, pi) +
                             std::pow(grad_norm_at(grad_u, i) / lambda, pi));
    }
    return s;
  };
  return luxemburg_root(scaled, scale0);
}

double coercive_modular(const SampledField& u, std::span<const SampledField> grad_u,
                        const SampledField& p, const SampledField& h) {
  require_same_grid(u, p, "coercive_modular");
  require_same_grid(u, h, "coercive_modular");
  require_exponent(p, "coercive_modular");
  for (const auto& g : grad_u) require_same_grid(u, g, "coercive_modular");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double pi = p.values()[i];
    s += u.weights()[i] * (std::pow(grad_norm_at(grad_u, i), pi) +
                           h.values()[i] * std::pow(std::abs(u.values()[i]), pi));
  }
  return s;
}

double coercivity_probe(const SampledField& p, const SampledField& h, int samples,
                        unsigned long long seed) {
  require_same_grid(p, h, "coercivity_probe");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  const int d = p.dim();
  for (int s = 0; s < samples; ++s) {
    std::vector<double> vals(p.size());
    for (auto& v : vals) v = gauss(rng);
    SampledField u(p.axes(), vals, p.weights());
    std::vector<SampledField> grad;
    for (int k = 0; k < d; ++k) {
      std::vector<double> gv(p.size());
      for (auto& v : gv) v = gauss(rng);
      grad.emplace_back(p.axes(), gv, p.weights());
    }
    const double norm = sobolev_norm(u, grad, p);
    if (norm == 0.0) continue;
    std::vector<double> uv = u.values();
    for (auto& v : uv) v /= norm;
    SampledField un(p.axes(), uv, p.weights());
    std::vector<SampledField> gn;
    for (auto& g : grad) {
      std::vector<double> gv = g.values();
      for (auto& v : gv) v /= norm;
      gn.emplace_back(p.axes(), gv, p.weights());
    }
    worst = std::min(worst, coercive_modular(un, gn, p, h));
  }
  return worst;
}

HolderCheck holder_check(const SampledField& f, const SampledField& g,
                         const SampledField& p, const SampledField& q) {
  require_same_grid(f, g, "holder_check");
  require_same_grid(f, p, "holder_check");
  require_same_grid(f, q, "holder_check");
  require_exponent(p, "holder_check");
  require_exponent(q, "holder_check");

  std::vector<double> s_vals(f.size()), fg(f.size());
  double sup_sp = 0.0, sup_sq = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double pi = p.values()[i], qi = q.values()[i];
    const double si = 1.0 / (1.0 / pi + 1.0 / qi);
    if (!(si >= 1.0))
      throw hypothesis_error("holder_check: 1/s = 1/p + 1/q must satisfy s >= 1");
    s_vals[i] = si;
    fg[i] = f.values()[i] * g.values()[i];
    sup_sp = std::max(sup_sp, si / pi);
    sup_sq = std::max(sup_sq, si / qi);
  }
  SampledField s_field(f.axes(), s_vals, f.weights());
  SampledField fg_field(f.axes(), fg, f.weights());

  HolderCheck out;
  out.lhs = luxemburg_norm(fg_field, s_field);
  out.rhs = (sup_sp + sup_sq) * luxemburg_norm(f, p) * luxemburg_norm(g, q);
  out.satisfied = out.lhs <= out.rhs + 1e-10;
  return out;
}

std::vector<double> brezis_lieb_defect(std::span<const SampledField> f_seq,
                                       const SampledField& f, const SampledField& p) {
  std::vector<double> out;
  const double rho_f = modular(f, p);
  for (const auto& fn : f_seq) {
    require_same_grid(fn, f, "brezis_lieb_defect");
    std::vector<double> diff(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      diff[i] = f.values()[i] - fn.values()[i];
    SampledField d(f.axes(), diff, f.weights());
    out.push_back(modular(fn, p) - modular(d, p) - rho_f);
  }
  return out;
}

}  // namespace vextrace

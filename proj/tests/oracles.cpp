#include "oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "vextrace/common.hpp"

namespace vextrace::oracles {

double simpson_1d(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double simpson_2d(const std::function<double(double, double)>& f, double ax, double bx,
                  double ay, double by, int nx, int ny) {
  if (nx % 2) ++nx;
  auto inner = [&](double x) {
    return simpson_1d([&](double y) { return f(x, y); }, ay, by, ny);
  };
  const double h = (bx - ax) / nx;
  double s = inner(ax) + inner(bx);
  for (int i = 1; i < nx; ++i) s += inner(ax + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double halfspace_grid_sum(const std::function<double(double, double)>& g, int N,
                          double R_fine, double R, int n_fine, int n_coarse) {
  auto weighted = [&](double rho, double t) { return g(rho, t) * std::pow(rho, N - 2); };
  // Inner block on the plain grid; outer strips in log coordinates, where the
  // decaying kernels vary on an O(1) scale.
  const double lf = std::log(R_fine), lr = std::log(R);
  double s = simpson_2d(weighted, 0.0, R_fine, 0.0, R_fine, n_fine, n_fine);
  s += simpson_2d([&](double u, double t) { return weighted(std::exp(u), t) * std::exp(u); },
                  lf, lr, 0.0, R_fine, n_coarse, n_fine);
  s += simpson_2d([&](double rho, double v) { return weighted(rho, std::exp(v)) * std::exp(v); },
                  0.0, R_fine, lf, lr, n_fine, n_coarse);
  s += simpson_2d(
      [&](double u, double v) {
        return weighted(std::exp(u), std::exp(v)) * std::exp(u) * std::exp(v);
      },
      lf, lr, lf, lr, n_coarse, n_coarse);
  return unit_sphere_area(N - 2) * s;
}

double boundary_grid_sum(const std::function<double(double)>& g, int N, double R_fine,
                         double R, int n_fine, int n_coarse) {
  auto weighted = [&](double rho) { return g(rho) * std::pow(rho, N - 2); };
  const double s =
      simpson_1d(weighted, 0.0, R_fine, n_fine) +
      simpson_1d([&](double u) { return weighted(std::exp(u)) * std::exp(u); },
                 std::log(R_fine), std::log(R), n_coarse);
  return unit_sphere_area(N - 2) * s;
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("digamma: needs x > 0");
  double acc = 0.0;
  while (x < 8.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  // Asymptotic series ln x - 1/(2x) - 1/(12x^2) + 1/(120x^4) - 1/(252x^6) + ...
  return acc + std::log(x) - 0.5 * inv -
         inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

namespace {

double ln_beta_fn(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

double phi_base(double e, int k, int m) {
  const double a1 = 0.5 * (m + 1);
  const double b1 = 0.5 * (e - m - 1);
  const double a2 = k + 1;
  const double b2 = e - m - k - 2;
  if (!(b1 > 0.0) || !(b2 > 0.0))
    throw std::domain_error("phi_base: divergent parameter combination");
  return 0.5 * std::exp(ln_beta_fn(a1, b1) + ln_beta_fn(a2, b2));
}

double phi_logderiv(double e, int k, int m) {
  const double b1 = 0.5 * (e - m - 1);
  const double b2 = e - m - k - 2;
  return 0.5 * (digamma(b1) - digamma(0.5 * e)) + digamma(b2) - digamma(e - m - 1);
}

double bubble_entry_closed_form(int N, double p, int t_pow, int rho_pow, int rinv_pow,
                                bool log_weight, double moment) {
  const double beta = (N - p) / (p - 1.0);
  const double e = p * (N - 1) / (p - 1.0) + 2.0 * rinv_pow;
  const int m = N - 2 + rho_pow;
  const double omega = unit_sphere_area(N - 2);
  const double base = std::pow(beta, p) * phi_base(e, t_pow, m);
  if (!log_weight) return moment * omega * base;
  // ln|grad V| = ln beta - ((beta+1)/2) ln r^2; int ... ln r = -Phi'(e).
  const double lnr_weighted = -phi_base(e, t_pow, m) * phi_logderiv(e, t_pow, m);
  return moment * omega * std::pow(beta, p) *
         (std::log(beta) * phi_base(e, t_pow, m) - (beta + 1.0) * lnr_weighted);
}

double vp_closed_form(int N, double p) {
  const double beta = (N - p) / (p - 1.0);
  return unit_sphere_area(N - 2) * phi_base(beta * p, 0, N - 2);
}

double s0_closed_form(int N, double p) {
  const double e = p * (N - 1) / (p - 1.0);
  return unit_sphere_area(N - 2) * 0.5 *
         std::exp(ln_beta_fn(0.5 * (N - 1), 0.5 * (e - N + 1)));
}

double sy_closed_form(int N, double p) {
  const double e = p * (N - 1) / (p - 1.0);
  return unit_sphere_area(N - 2) * 0.5 *
         std::exp(ln_beta_fn(0.5 * (N + 1), 0.5 * (e - N - 1)));
}

MonteCarloMoment mc_sphere_moment(const std::vector<int>& exponents, int m,
                                  long long samples, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sum = 0.0, sumsq = 0.0;
  std::vector<double> y(m);
  for (long long s = 0; s < samples; ++s) {
    double norm2 = 0.0;
    for (int i = 0; i < m; ++i) {
      y[i] = gauss(rng);
      norm2 += y[i] * y[i];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    double v = 1.0;
    for (std::size_t i = 0; i < exponents.size(); ++i)
      for (int k = 0; k < exponents[i]; ++k) v *= y[i] * inv;
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, sumsq / samples - mean * mean);
  return {mean, std::sqrt(var / samples)};
}

}  // namespace vextrace::oracles

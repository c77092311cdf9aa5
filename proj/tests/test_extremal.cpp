#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vextrace/extremal.hpp"

using namespace vextrace;

TEST_CASE("bubble_value: direct substitutions") {
  CHECK(bubble_value(BubbleParams(5, 2.0), 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bubble_value(BubbleParams(3, 2.0), 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bubble_value(BubbleParams(4, 2.0), std::sqrt(3.0), 0.0) ==
        doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("bubble_gradient_norm: displayed values and finite differences") {
  CHECK(bubble_gradient_norm(BubbleParams(6, 2.5), 0.0, 0.0) ==
        doctest::Approx((6.0 - 2.5) / 1.5).epsilon(1e-15));
  CHECK(bubble_gradient_norm(BubbleParams(3, 2.0), 0.0, 1.0) ==
        doctest::Approx(0.25).epsilon(1e-15));

  const BubbleParams bp(5, 2.0);
  std::mt19937_64 rng(550);
  std::uniform_real_distribution<double> pos(0.05, 3.0);
  const double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    const double rho = pos(rng), t = pos(rng);
    const double drho =
        (bubble_value(bp, rho + h, t) - bubble_value(bp, rho - h, t)) / (2.0 * h);
    const double dt = (bubble_value(bp, rho, t + h) - bubble_value(bp, rho, t - h)) / (2.0 * h);
    CHECK(std::hypot(drho, dt) ==
          doctest::Approx(bubble_gradient_norm(bp, rho, t)).epsilon(1e-6));
  }
}

TEST_CASE("rescale_bubble: identity scaling, gradient formula, energy invariance") {
  const BubbleParams bp(5, 2.0);
  const RescaledBubble id = rescale_bubble(bp, 1.0);
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> pos(0.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    const double rho = pos(rng), t = pos(rng);
    CHECK(id(rho, t) == doctest::Approx(bubble_value(bp, rho, t)).epsilon(1e-14));
  }

  // Analytic gradient of the rescaled field matches the displayed norm.
  for (double eps : {0.1, 0.5, 1.0}) {
    const RescaledBubble v = rescale_bubble(bp, eps);
    for (int i = 0; i < 10; ++i) {
      const double rho = pos(rng), t = pos(rng);
      CHECK(std::hypot(v.d_rho(rho, t), v.d_t(rho, t)) ==
            doctest::Approx(bubble_gradient_norm(bp, rho, t, eps)).epsilon(1e-12));
      const double h = 1e-6;
      const double fd_rho = (v(rho + h, t) - v(rho - h, t)) / (2.0 * h);
      CHECK(fd_rho == doctest::Approx(v.d_rho(rho, t)).epsilon(1e-5));
    }
  }

  // Energy-invariant scaling: int |grad V_eps|^p independent of eps.
  auto energy_at = [&bp](double eps) {
    RadialKernel k;
    k.decay_exponent = bp.gradient_decay();
    k.g = [&bp, eps](double rho, double t) {
      return std::pow(bubble_gradient_norm(bp, rho, t, eps), bp.p);
    };
    return halfspace_integral(k, bp.N, {.rel_tol = 1e-9}).value;
  };
  const double e1 = energy_at(1.0);
  CHECK(energy_at(0.5) == doctest::Approx(e1).epsilon(1e-6));
  CHECK(energy_at(0.1) == doctest::Approx(e1).epsilon(1e-6));
}

TEST_CASE("trace constant: quadrature and Beta routes agree to 1e-8") {
  for (auto [N, p] : std::array<std::pair<int, double>, 3>{{{3, 2.0}, {4, 2.0}, {5, 3.0}}}) {
    const double quad = trace_constant(N, p, {.rel_tol = 1e-10});
    const double closed = trace_constant_closed_form(N, p);
    CHECK(quad == doctest::Approx(closed).epsilon(1e-8));
  }
}

TEST_CASE("trace constant: positivity on random admissible pairs") {
  std::mt19937_64 rng(9001);
  for (int i = 0; i < 20; ++i) {
    const int N = std::uniform_int_distribution<int>(3, 9)(rng);
    const double p = std::uniform_real_distribution<double>(1.1, N - 0.1)(rng);
    const double kbar = trace_constant_closed_form(N, p);
    CHECK(kbar > 0.0);
    CHECK(std::isfinite(kbar));
  }
}

TEST_CASE("trace constant: invariance under rescaling of the extremal") {
  const BubbleParams bp(5, 2.0);
  const double ex = bp.gradient_decay();
  auto ratio_at = [&](double eps) {
    RadialKernel kg;
    kg.decay_exponent = ex;
    kg.g = [&bp, eps](double rho, double t) {
      return std::pow(bubble_gradient_norm(bp, rho, t, eps), bp.p);
    };
    const RescaledBubble v = rescale_bubble(bp, eps);
    BoundaryKernel kb;
    kb.decay_exponent = ex;
    kb.g = [v](double rho) { return std::pow(v(rho, 0.0), v.params.p_star()); };
    const double grad = halfspace_integral(kg, bp.N, {.rel_tol = 1e-9}).value;
    const double tr = boundary_integral(kb, bp.N, {.rel_tol = 1e-9}).value;
    return std::pair<double, double>(grad, tr);
  };
  const auto [g1, t1] = ratio_at(1.0);
  const auto [g01, t01] = ratio_at(0.1);
  CHECK(g01 == doctest::Approx(g1).epsilon(1e-6));
  CHECK(t01 == doctest::Approx(t1).epsilon(1e-6));
}

TEST_CASE("normalized profile: the section-4 identity") {
  const NormalizedProfile prof = normalized_profile(5, 2.0, {.rel_tol = 1e-9});
  CHECK(prof.C > 0.0);
  CHECK(prof.grad_energy == doctest::Approx(prof.trace_mass).epsilon(1e-6));
  CHECK(prof.grad_energy == doctest::Approx(prof.target).epsilon(1e-6));

  // Replacing V by a*V leaves Z unchanged: C absorbs the factor.
  const double kbar = trace_constant_closed_form(5, 2.0);
  const double s0 = oracles::s0_closed_form(5, 2.0);
  const double ps = BubbleParams(5, 2.0).p_star();
  auto C_of = [&](double a) {
    return std::pow(kbar, -2.0 / (ps - 2.0)) *
           std::pow(std::pow(a, ps) * s0, -1.0 / ps);
  };
  CHECK(2.0 * C_of(2.0) == doctest::Approx(C_of(1.0)).epsilon(1e-14));
}

TEST_CASE("bubble integral table: availability flags") {
  const BubbleIntegralTable t52 = bubble_integral_table(BubbleParams(5, 2.0), {.rel_tol = 1e-9});
  CHECK(t52.g0.available);
  CHECK(t52.vp.available);          // p^2 = 4 < 5
  CHECK_FALSE(t52.sy.available);    // p = (N-1)/2 exactly: strict bound fails
  CHECK(t52.sy.condition == "p < (N-1)/2");

  const BubbleIntegralTable t73 = bubble_integral_table(BubbleParams(7, 3.0), {.rel_tol = 1e-8});
  CHECK(t73.g0.available);
  CHECK(t73.g1.available);          // beta = 2 > 1
  CHECK_FALSE(t73.g2.available);    // needs beta > 2
  CHECK_FALSE(t73.gy.available);
  CHECK_FALSE(t73.vp.available);    // 9 > 7
  CHECK(t73.g2.condition == "p < (N+2)/3");
}

TEST_CASE("bubble integral table: closed-form oracle agreement") {
  for (auto [N, p] : std::array<std::pair<int, double>, 2>{{{5, 2.0}, {6, 2.0}}}) {
    const BubbleIntegralTable tab = bubble_integral_table(BubbleParams(N, p), {.rel_tol = 1e-10});
    using oracles::bubble_entry_closed_form;
    CHECK(tab.g0.value == doctest::Approx(bubble_entry_closed_form(N, p, 0, 0, 0, false)).epsilon(1e-8));
    CHECK(tab.g1.value == doctest::Approx(bubble_entry_closed_form(N, p, 1, 0, 0, false)).epsilon(1e-8));
    CHECK(tab.g2.value == doctest::Approx(bubble_entry_closed_form(N, p, 2, 0, 0, false)).epsilon(1e-8));
    CHECK(tab.gy.value == doctest::Approx(bubble_entry_closed_form(N, p, 0, 2, 0, false)).epsilon(1e-8));
    CHECK(tab.gyr.value == doctest::Approx(bubble_entry_closed_form(N, p, 0, 2, 1, false)).epsilon(1e-8));
    CHECK(tab.gty.value == doctest::Approx(bubble_entry_closed_form(N, p, 1, 2, 1, false)).epsilon(1e-8));
    CHECK(tab.gt2y.value == doctest::Approx(bubble_entry_closed_form(N, p, 2, 2, 1, false)).epsilon(1e-8));
    CHECK(tab.g1_log.value == doctest::Approx(bubble_entry_closed_form(N, p, 1, 0, 0, true)).epsilon(1e-8));
    CHECK(tab.g2_log.value == doctest::Approx(bubble_entry_closed_form(N, p, 2, 0, 0, true)).epsilon(1e-8));
    CHECK(tab.gty_log.value == doctest::Approx(bubble_entry_closed_form(N, p, 1, 2, 1, true)).epsilon(1e-8));
    CHECK(tab.gt2y_log.value == doctest::Approx(bubble_entry_closed_form(N, p, 2, 2, 1, true)).epsilon(1e-8));
    CHECK(tab.vp.value == doctest::Approx(oracles::vp_closed_form(N, p)).epsilon(1e-8));
    CHECK(tab.s0.value == doctest::Approx(oracles::s0_closed_form(N, p)).epsilon(1e-8));
    if (tab.sy.available)
      CHECK(tab.sy.value == doctest::Approx(oracles::sy_closed_form(N, p)).epsilon(1e-8));
    // Anisotropic moments relative to the shared radial integral.
    const int m = N - 1;
    const double quart = oracles::bubble_entry_closed_form(N, p, 0, 4, 1, false,
                                                           3.0 / (m * (m + 2.0)));
    CHECK(tab.gy4r.value == doctest::Approx(quart).epsilon(1e-8));
    CHECK(tab.gy4r.value == doctest::Approx(3.0 * tab.gy22r.value).epsilon(1e-12));
  }
}

TEST_CASE("bubble integral table: coarse Riemann-grid oracle") {
  const BubbleParams bp(5, 2.0);
  const BubbleIntegralTable tab = bubble_integral_table(bp, {.rel_tol = 1e-9});
  auto kernel = [&bp](int t_pow, int yr) {
    return [&bp, t_pow, yr](double rho, double t) {
      double v = std::pow(bubble_gradient_norm(bp, rho, t), bp.p);
      for (int i = 0; i < t_pow; ++i) v *= t;
      if (yr) v *= rho * rho / ((1.0 + t) * (1.0 + t) + rho * rho);
      return v;
    };
  };
  CHECK(tab.g0.value ==
        doctest::Approx(oracles::halfspace_grid_sum(kernel(0, 0), 5, 4.0, 400.0, 700, 900))
            .epsilon(1e-4));
  CHECK(tab.gty.value ==
        doctest::Approx(oracles::halfspace_grid_sum(kernel(1, 1), 5, 4.0, 2000.0, 700, 1400))
            .epsilon(1e-4));
}

TEST_CASE("bubble integral table: internal consistency and positivity") {
  for (auto [N, p] : std::array<std::pair<int, double>, 3>{{{5, 2.0}, {6, 2.0}, {7, 3.0}}}) {
    const BubbleIntegralTable tab = bubble_integral_table(BubbleParams(N, p), {.rel_tol = 1e-9});
    const double kbar = trace_constant(N, p, {.rel_tol = 1e-10});
    CHECK(std::pow(tab.g0.value, 1.0 / p) / std::pow(tab.s0.value, 1.0 / BubbleParams(N, p).p_star()) ==
          doctest::Approx(1.0 / kbar).epsilon(1e-8));
    if (tab.gty.available && tab.g1.available) {
      CHECK(tab.gty.value <= tab.g1.value);  // |y|^2/r^2 <= 1 pointwise
      // Case-2 chain: (-1/p + 1/(N-1)) weighting stays negative.
      CHECK(-tab.g1.value / p + tab.gty.value / (N - 1.0) < 0.0);
    }
    for (const TableEntry* e : {&tab.g0, &tab.g1, &tab.g2, &tab.gy, &tab.gyr, &tab.gty,
                                &tab.gt2y, &tab.gy4r, &tab.gy22r, &tab.vp, &tab.s0, &tab.sy})
      if (e->available) CHECK(e->value > 0.0);
    for (const TableEntry* e : {&tab.g1_log, &tab.g2_log, &tab.gty_log, &tab.gt2y_log})
      if (e->available) CHECK(std::isfinite(e->value));
  }
}

TEST_CASE("table serializes with availability flags") {
  const nlohmann::json j = bubble_integral_table(BubbleParams(7, 3.0), {.rel_tol = 1e-8}).to_json();
  CHECK(j.at("G0").at("available").get<bool>());
  CHECK_FALSE(j.at("Vp").at("available").get<bool>());
  CHECK(j.at("Vp").at("condition").get<std::string>() == "p^2 < N");
}

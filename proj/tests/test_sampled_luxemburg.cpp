#include <doctest.h>

#include <cmath>
#include <random>

#include "vextrace/luxemburg.hpp"
#include "vextrace/sampled_field.hpp"

using namespace vextrace;

namespace {

SampledField unit_interval(int n, const std::function<double(double)>& fn) {
  return SampledField::midpoint({0.0}, {1.0}, {n},
                                [&fn](std::span<const double> x) { return fn(x[0]); });
}

SampledField random_field(std::mt19937_64& rng, const SampledField& grid_like,
                          double amp = 2.0) {
  std::uniform_real_distribution<double> val(-amp, amp);
  std::vector<double> vs(grid_like.size());
  for (auto& v : vs) v = val(rng);
  return SampledField(grid_like.axes(), vs, grid_like.weights());
}

}  // namespace

TEST_CASE("SampledField construction invariants") {
  CHECK_THROWS_AS(SampledField({{1.0, 0.5}}, {1.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(SampledField({{0.0, 1.0}}, {1.0, 1.0}, {-0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(SampledField({{0.0, 1.0}}, {1.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledField({{0.0, 1.0}}, {1.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("SampledField JSON and CSV round trips are bit exact") {
  std::mt19937_64 rng(31337);
  const SampledField base = SampledField::midpoint(
      {0.0, -1.0}, {1.0, 1.0}, {7, 5}, [&rng](std::span<const double>) {
        return std::uniform_real_distribution<double>(-1e3, 1e3)(rng) *
               std::pow(10.0, std::uniform_int_distribution<int>(-12, 12)(rng));
      });
  const SampledField from_json = SampledField::from_json(base.to_json());
  CHECK(from_json.axes() == base.axes());
  CHECK(from_json.values() == base.values());
  CHECK(from_json.weights() == base.weights());

  const SampledField from_csv = SampledField::from_csv(base.to_csv());
  CHECK(from_csv.axes() == base.axes());
  CHECK(from_csv.values() == base.values());
  CHECK(from_csv.weights() == base.weights());
  CHECK(from_csv.to_csv() == base.to_csv());
}

TEST_CASE("modular: basic values and fine-grid oracle") {
  const SampledField one = unit_interval(100, [](double) { return 1.0; });
  const SampledField two = SampledField::on_grid_of(one, [](auto) { return 2.0; });
  CHECK(modular(one, two) == doctest::Approx(1.0).epsilon(1e-14));

  const SampledField zero = SampledField::on_grid_of(one, [](auto) { return 0.0; });
  CHECK(modular(zero, two) == 0.0);

  // u(x) = x, p(x) = 2 + x on [0,1]: 1e4 cells against a 1e6-cell plain loop.
  const SampledField u = unit_interval(10000, [](double x) { return x; });
  const SampledField p = SampledField::on_grid_of(u, [](std::span<const double> x) {
    return 2.0 + x[0];
  });
  double oracle = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    oracle += std::pow(x, 2.0 + x) / n;
  }
  CHECK(modular(u, p) == doctest::Approx(oracle).epsilon(1e-5));

  const SampledField coarse = unit_interval(50, [](double x) { return x; });
  CHECK_THROWS_AS((void)modular(u, coarse), std::invalid_argument);
}

TEST_CASE("luxemburg_norm: constants, zero, and closed form") {
  const SampledField c = unit_interval(200, [](double) { return 3.25; });
  const SampledField p = SampledField::on_grid_of(c, [](auto) { return 2.7; });
  CHECK(luxemburg_norm(c, p) == doctest::Approx(3.25).epsilon(1e-12));

  const SampledField zero = SampledField::on_grid_of(c, [](auto) { return 0.0; });
  CHECK(luxemburg_norm(zero, p) == 0.0);

  const SampledField u = unit_interval(10000, [](double x) { return x; });
  const SampledField p2 = SampledField::on_grid_of(u, [](auto) { return 2.0; });
  CHECK(luxemburg_norm(u, p2) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("sobolev_norm: reductions and Fourier closed form") {
  const SampledField c = unit_interval(100, [](double) { return 1.5; });
  const SampledField p = SampledField::on_grid_of(c, [](auto) { return 2.3; });
  const SampledField zg = SampledField::on_grid_of(c, [](auto) { return 0.0; });
  std::vector<SampledField> grad0{zg};
  CHECK(sobolev_norm(c, grad0, p) == doctest::Approx(1.5).epsilon(1e-12));

  const SampledField zero = SampledField::on_grid_of(c, [](auto) { return 0.0; });
  CHECK(sobolev_norm(zero, grad0, p) == 0.0);

  const SampledField u = unit_interval(20000, [](double x) { return std::sin(kPi * x); });
  const SampledField du = SampledField::on_grid_of(
      u, [](std::span<const double> x) { return kPi * std::cos(kPi * x[0]); });
  const SampledField p2 = SampledField::on_grid_of(u, [](auto) { return 2.0; });
  std::vector<SampledField> grad{du};
  CHECK(sobolev_norm(u, grad, p2) ==
        doctest::Approx(std::sqrt(0.5 + 0.5 * kPi * kPi)).epsilon(1e-6));
}

TEST_CASE("coercive_modular examples") {
  const SampledField one = unit_interval(1000, [](double) { return 1.0; });
  const SampledField p2 = SampledField::on_grid_of(one, [](auto) { return 2.0; });
  const SampledField h1 = SampledField::on_grid_of(one, [](auto) { return 1.0; });
  const SampledField zg = SampledField::on_grid_of(one, [](auto) { return 0.0; });
  std::vector<SampledField> grad0{zg};
  CHECK(coercive_modular(one, grad0, p2, h1) == doctest::Approx(1.0).epsilon(1e-14));

  const SampledField u = unit_interval(10000, [](double x) { return x; });
  const SampledField du = SampledField::on_grid_of(u, [](auto) { return 1.0; });
  const SampledField p2b = SampledField::on_grid_of(u, [](auto) { return 2.0; });
  const SampledField h0 = SampledField::on_grid_of(u, [](auto) { return 0.0; });
  const SampledField hneg = SampledField::on_grid_of(u, [](auto) { return -1.0; });
  std::vector<SampledField> grad{du};
  CHECK(coercive_modular(u, grad, p2b, h0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coercive_modular(u, grad, p2b, hneg) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("coercivity probe flags strongly negative h") {
  const SampledField grid = unit_interval(64, [](double) { return 0.0; });
  const SampledField p = SampledField::on_grid_of(grid, [](auto) { return 2.0; });
  const SampledField hpos = SampledField::on_grid_of(grid, [](auto) { return 1.0; });
  const SampledField hneg = SampledField::on_grid_of(grid, [](auto) { return -50.0; });
  CHECK(coercivity_probe(p, hpos, 16, 7) > 0.0);
  CHECK(coercivity_probe(p, hneg, 16, 7) < 0.0);
}

TEST_CASE("holder_check: equality case, zero case, random sweep") {
  const SampledField one = unit_interval(500, [](double) { return 1.0; });
  const SampledField p4 = SampledField::on_grid_of(one, [](auto) { return 4.0; });
  const HolderCheck eq = holder_check(one, one, p4, p4);
  CHECK(eq.lhs == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(eq.rhs == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(eq.satisfied);

  const SampledField zero = SampledField::on_grid_of(one, [](auto) { return 0.0; });
  const HolderCheck z = holder_check(zero, one, p4, p4);
  CHECK(z.lhs == 0.0);
  CHECK(z.satisfied);

  const SampledField p3 = SampledField::on_grid_of(one, [](auto) { return 3.0; });
  const SampledField q32 = SampledField::on_grid_of(one, [](auto) { return 1.5; });
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 100; ++i) {
    const SampledField f = random_field(rng, one);
    const SampledField g = random_field(rng, one);
    CHECK(holder_check(f, g, p3, q32).satisfied);
  }

  // s < 1 anywhere is an exponent-compatibility error.
  const SampledField p_low = SampledField::on_grid_of(one, [](auto) { return 1.2; });
  CHECK_THROWS_AS((void)holder_check(one, one, p_low, p_low), hypothesis_error);
}

TEST_CASE("brezis_lieb_defect") {
  const SampledField f = unit_interval(10000, [](double x) {
    return std::exp(-80.0 * (x - 0.2) * (x - 0.2));
  });
  const SampledField p = SampledField::on_grid_of(f, [](std::span<const double> x) {
    return 2.0 + 0.5 * x[0];
  });

  SUBCASE("f_n = f gives exactly zero") {
    std::vector<SampledField> seq{f, f, f};
    for (double d : brezis_lieb_defect(seq, f, p)) CHECK(d == 0.0);
  }
  SUBCASE("f = 0 gives exactly zero") {
    const SampledField zero = SampledField::on_grid_of(f, [](auto) { return 0.0; });
    std::vector<SampledField> seq{f, f};
    for (double d : brezis_lieb_defect(seq, zero, p)) CHECK(d == 0.0);
  }
  SUBCASE("translating bump: defect decays as the bump exits the grid") {
    const double rho_f = modular(f, p);
    std::vector<SampledField> seq;
    for (int n = 0; n < 8; ++n) {
      const double shift = 0.35 + 0.12 * n;
      seq.push_back(SampledField::on_grid_of(f, [&](std::span<const double> x) {
        const double bump = std::exp(-80.0 * (x[0] - 0.2) * (x[0] - 0.2));
        const double travel = std::exp(-600.0 * (x[0] - shift) * (x[0] - shift));
        return bump + travel;
      }));
    }
    const std::vector<double> d = brezis_lieb_defect(seq, f, p);
    for (std::size_t n = 4; n + 1 < d.size(); ++n)
      CHECK(std::abs(d[n + 1]) <= std::abs(d[n]) + 1e-14);
    CHECK(std::abs(d.back()) < 1e-3 * rho_f);
  }
}

TEST_CASE("modular-norm relations on random fields") {
  std::mt19937_64 rng(808);
  const SampledField grid = unit_interval(400, [](double) { return 0.0; });
  const SampledField p = SampledField::on_grid_of(grid, [&rng](auto) {
    return std::uniform_real_distribution<double>(1.3, 3.5)(rng);
  });
  double pmin = p.values().front(), pmax = pmin;
  for (double v : p.values()) {
    pmin = std::min(pmin, v);
    pmax = std::max(pmax, v);
  }
  for (int i = 0; i < 30; ++i) {
    const SampledField u = random_field(rng, grid, i % 3 ? 3.0 : 0.4);
    const double norm = luxemburg_norm(u, p);
    if (norm == 0.0) continue;
    // (2.1): modular at the norm equals one.
    std::vector<double> scaled = u.values();
    for (auto& v : scaled) v /= norm;
    CHECK(modular(SampledField(u.axes(), scaled, u.weights()), p) ==
          doctest::Approx(1.0).epsilon(1e-8));
    // (2.2): sign agreement.
    const double rho = modular(u, p);
    if (norm > 1.0) CHECK(rho > 1.0 - 1e-10);
    if (norm < 1.0) CHECK(rho < 1.0 + 1e-10);
    // (2.3)/(2.4): power bounds.
    if (norm > 1.0) {
      CHECK(std::pow(norm, pmin) <= rho + 1e-9);
      CHECK(rho <= std::pow(norm, pmax) + 1e-9);
    } else if (norm < 1.0) {
      CHECK(std::pow(norm, pmax) <= rho + 1e-9);
      CHECK(rho <= std::pow(norm, pmin) + 1e-9);
    }
  }
}

TEST_CASE("scaled families: norms and modulars move together") {
  const SampledField u = unit_interval(300, [](double x) { return 1.0 + std::sin(7.0 * x); });
  const SampledField p = SampledField::on_grid_of(u, [](std::span<const double> x) {
    return 2.0 + x[0];
  });
  double prev_norm = -1.0, prev_mod = -1.0;
  for (int k = 1; k <= 13; ++k) {
    std::vector<double> vals = u.values();
    for (auto& v : vals) v /= std::pow(2.0, k);
    const SampledField uk(u.axes(), vals, u.weights());
    const double nk = luxemburg_norm(uk, p);
    const double mk = modular(uk, p);
    if (k > 1) {
      CHECK(nk < prev_norm);
      CHECK(mk < prev_mod);
    }
    prev_norm = nk;
    prev_mod = mk;
  }
  CHECK(prev_norm < 1e-3);
  CHECK(prev_mod < 1e-6);

  // Growing family: both blow up together.
  prev_norm = prev_mod = 0.0;
  for (int k = 1; k <= 12; ++k) {
    std::vector<double> vals = u.values();
    for (auto& v : vals) v *= std::pow(2.0, k);
    const SampledField uk(u.axes(), vals, u.weights());
    const double nk = luxemburg_norm(uk, p);
    const double mk = modular(uk, p);
    CHECK(nk > prev_norm);
    CHECK(mk > prev_mod);
    prev_norm = nk;
    prev_mod = mk;
  }
  CHECK(prev_norm > 1e3);
  CHECK(prev_mod > 1e6);
}

TEST_CASE("homogeneity and triangle inequality") {
  std::mt19937_64 rng(515);
  const SampledField grid = unit_interval(256, [](double) { return 0.0; });
  const SampledField p = SampledField::on_grid_of(grid, [&rng](auto) {
    return std::uniform_real_distribution<double>(1.5, 4.0)(rng);
  });
  for (int i = 0; i < 20; ++i) {
    const SampledField u = random_field(rng, grid);
    const SampledField v = random_field(rng, grid);
    const double cu = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    std::vector<double> su = u.values();
    for (auto& x : su) x *= cu;
    const double lhs = luxemburg_norm(SampledField(u.axes(), su, u.weights()), p);
    CHECK(std::abs(lhs - std::abs(cu) * luxemburg_norm(u, p)) <=
          1e-10 * std::max(1.0, lhs));

    std::vector<double> sum = u.values();
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += v.values()[j];
    CHECK(luxemburg_norm(SampledField(u.axes(), sum, u.weights()), p) <=
          luxemburg_norm(u, p) + luxemburg_norm(v, p) + 1e-9);
  }
}

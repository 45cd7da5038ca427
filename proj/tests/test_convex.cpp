#include <doctest.h>

#include <cmath>
#include <numbers>

#include "strf/convex.hpp"
#include "strf/error.hpp"
#include "strf/quadrature.hpp"
#include "strf/rng.hpp"
#include "strf/specfun.hpp"
#include "strf/stats.hpp"

using namespace strf;
constexpr double kPi = std::numbers::pi;

TEST_CASE("bodies") {
  const auto b = make_box(2, 1.0);
  CHECK(b.volume() == 4.0);
  CHECK(b.diameter() == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK(make_box({1.0, 2.0, 0.5}).volume() == 8.0);
  CHECK(make_ball(3, 2.0).volume() == doctest::Approx(4.0 / 3.0 * kPi * 8).epsilon(1e-14));
  CHECK(make_ball(2, 1.0).volume() == doctest::Approx(kPi).epsilon(1e-14));
  CHECK_THROWS_AS(make_box(2, -1.0), ValidationError);
  CHECK_THROWS_AS(body_from_name("cone"), ValidationError);
  CHECK(body_from_name("ball") == BodyKind::ball);
}

TEST_CASE("indicator Fourier transforms") {
  const auto box = make_box(2, 1.0), ball = make_ball(2, 1.0), ball3 = make_ball(3, 1.0);
  const double zero[3] = {0, 0, 0};
  CHECK(std::abs(indicator_ft(box, zero) - 1.0) < 1e-15);
  CHECK(std::abs(indicator_ft(ball, zero) - 1.0) < 1e-15);
  const double pi0[2] = {kPi, 0};
  CHECK(std::abs(indicator_ft(box, pi0)) < 1e-15);
  CHECK(interval_ft(0.0) == 1.0);
  CHECK(interval_ft(2.0) == doctest::Approx(std::sin(2.0) / 2.0));
  // unit disc: 2 J_1(r)/r; unit ball in R^3: 3 (sin r - r cos r)/r³
  for (double r : {0.5, 1.0, 2.0}) {
    const double l2[2] = {r, 0}, l3[3] = {0, r, 0};
    CHECK(indicator_ft(ball, l2).real() == doctest::Approx(2 * bessel_j(1.0, r) / r).epsilon(1e-10));
    CHECK(indicator_ft(ball3, l3).real() ==
          doctest::Approx(3 * (std::sin(r) - r * std::cos(r)) / (r * r * r)).epsilon(1e-10));
    CHECK(indicator_ft(ball, l2).real() != doctest::Approx(indicator_ft(box, l2).real()));
  }
  Stream rs(1, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const double lam[2] = {20 * (rs.uniform() - 0.5), 20 * (rs.uniform() - 0.5)};
    CHECK(std::abs(indicator_ft(box, lam)) <= 1.0);
    CHECK(std::abs(indicator_ft(ball, lam)) <= 1.0);
  }
}

TEST_CASE("Riesz constant") {
  CHECK(riesz_fourier_constant(1.0, 2) == doctest::Approx(1 / (2 * kPi)).epsilon(1e-14));
  CHECK(riesz_constant(2, 1.0, 0.25) ==
        doctest::Approx(riesz_fourier_constant(1.0, 2) * riesz_fourier_constant(0.25, 1)).epsilon(1e-15));
  for (int i = 0; i < 20; ++i) {
    const double as = 0.05 + 0.09 * i, at = 0.02 + 0.02 * i;
    const double v = riesz_constant(2, as, at);
    CHECK(std::isfinite(v));
    CHECK(v > 0);
  }
  CHECK_THROWS_AS(riesz_constant(2, 2.0, 0.25), ValidationError);
}

TEST_CASE("Fourier pair |x|^{-a} against a Gaussian test function in D = 1") {
  // ∫ |x|^{-a} e^{-x²/2} dx = c ∫ |λ|^{a-1} √(2π) e^{-λ²/2} dλ
  const double a = 0.3;
  const double lhs = std::pow(2.0, (1 - a) / 2) * std::tgamma((1 - a) / 2);
  // λ = x^{1/a} turns λ^{a-1} dλ into dx/a; then x = u/(1-u)
  const Rule g = gauss_legendre(400, 0.0, 1.0);
  double half = 0;
  for (int i = 0; i < g.size(); ++i) {
    const double u = g.x[i];
    const double lam = std::pow(u / (1 - u), 1 / a);
    half += g.w[i] * std::exp(-lam * lam / 2) / a / ((1 - u) * (1 - u));
  }
  CHECK(riesz_fourier_constant(a, 1) * std::sqrt(2 * kPi) * 2 * half == doctest::Approx(lhs).epsilon(1e-4));
}

TEST_CASE("Riesz double integral") {
  const auto box = make_box(2, 1.0);
  const double at = 0.25, as = 0.4;
  const auto r = riesz_double_integral(box, as, at, 400000, 3);
  const double exact_t = std::pow(2.0, 3 - 2 * at) / ((1 - 2 * at) * (2 - 2 * at));
  CHECK(std::abs(r.temporal - exact_t) <= 3 * r.temporal_stderr);
  // separability: the product estimator against the product of factor estimates
  const double prod = r.spatial * r.temporal;
  const double prod_se = std::hypot(r.spatial_stderr * r.temporal, r.temporal_stderr * r.spatial);
  CHECK(std::abs(r.value - prod) <= 2 * std::hypot(r.stderr_, prod_se));
  // integrand ≡ 1 in the limit of vanishing exponents: |K|² · 4
  const auto z = riesz_double_integral(box, 1e-6, 1e-6, 20000, 4, IntegralMethod::uniform);
  CHECK(z.value == doctest::Approx(16.0 * 4.0).epsilon(1e-4));
  const auto ball = riesz_double_integral(make_ball(2, 1.0), 1e-6, 1e-6, 20000, 4);
  CHECK(ball.value == doctest::Approx(kPi * kPi * 4.0).epsilon(1e-4));
  CHECK_THROWS_AS(riesz_double_integral(box, 1.0, at, 1000, 1), ValidationError);
  CHECK_THROWS_AS(riesz_double_integral(box, as, 0.5, 1000, 1), ValidationError);
}

TEST_CASE("spectral grid") {
  ModelParams p;
  p.d = 1;
  p.alpha_s = 0.4;
  const auto box = make_box(2, 1.0);
  const auto g = make_spectral_grid(box, p, 64);
  CHECK(g.loss_spatial <= 4e-3 * (1 + 1e-12));
  CHECK(g.loss_temporal <= 4e-3 * (1 + 1e-12));
  Stream rs(1, 2, 3);
  const auto nd = g.draw(rs);
  CHECK(nd.xi.size() == 128u * 3u);
  double cells = 0;
  for (int a = 0; a < 128; ++a) {
    CHECK(nd.mirror[nd.mirror[a]] == a);
    CHECK(nd.mirror[a] != a);
    for (int j = 0; j < 3; ++j) CHECK(nd.xi[a * 3 + j] == -nd.xi[nd.mirror[a] * 3 + j]);
    CHECK(nd.cell[a] > 0);
    CHECK(nd.cell[a] == nd.cell[nd.mirror[a]]);
    cells += nd.cell[a];
    double r2 = nd.xi[a * 3] * nd.xi[a * 3] + nd.xi[a * 3 + 1] * nd.xi[a * 3 + 1];
    CHECK(std::sqrt(r2) <= g.Lambda);
    CHECK(std::abs(nd.xi[a * 3 + 2]) <= g.Omega);
  }
  // τ = 1 samples the spectral measure itself, so the cells add up to its mass exactly
  const auto g1 = make_spectral_grid(box, p, 64, 4e-3, 1.0);
  Stream rs1(1, 2, 3);
  const auto n1 = g1.draw(rs1);
  double c1 = 0;
  for (double c : n1.cell) c1 += c;
  CHECK(c1 == doctest::Approx(g1.mass).epsilon(1e-12));
  CHECK(cells > 0);
  CHECK_THROWS_AS(make_spectral_grid(make_box(3, 1.0), p, 64), ValidationError);
}

TEST_CASE("convex limit sampler: realness, centering, determinism") {
  ModelParams p;
  p.d = 1;
  p.alpha_s = 0.4;
  const auto box = make_box(2, 1.0);
  const auto g = make_spectral_grid(box, p, 32);
  const auto a = sample_convex_limit(box, p, g, 2000, 5, 1);
  const auto b = sample_convex_limit(box, p, g, 2000, 5, 3);
  CHECK(a.values == b.values);
  CHECK(a.max_imag < 1e-10);
  const auto m = moments(a.values, 20);
  CHECK(std::abs(m.mean) <= 3 * std::sqrt(m.variance / 2000));
  CHECK(sample_convex_limit(box, p, g, 0, 5).values.empty());
  const auto ball = make_ball(2, 1.0);
  const auto gb = make_spectral_grid(ball, p, 16);
  CHECK(sample_convex_limit(ball, p, gb, 50, 5).max_imag < 1e-10);
}

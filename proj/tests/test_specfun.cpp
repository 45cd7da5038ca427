#include <doctest.h>

#include <cmath>
#include <numbers>

#include "strf/error.hpp"
#include "strf/quadrature.hpp"
#include "strf/specfun.hpp"

using namespace strf;
constexpr double kPi = std::numbers::pi;

TEST_CASE("eigenspace dimensions") {
  CHECK(eigenspace_dim(0, 3) == 1);
  CHECK(eigenspace_dim(1, 2) == 3);
  CHECK(eigenspace_dim(5, 2) == 11);
  // explicit count: harmonic polynomials = C(n+d, d) - C(n+d-2, d)
  auto binom = [](int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::llround(r);
  };
  for (int d = 1; d <= 5; ++d)
    for (int n = 2; n <= 12; ++n) CHECK(eigenspace_dim(n, d) == binom(n + d, d) - binom(n + d - 2, d));
  CHECK_THROWS_AS(eigenspace_dim(-1, 2), ValidationError);
}

TEST_CASE("sphere area") {
  CHECK(sphere_area(2) == doctest::Approx(4 * kPi).epsilon(1e-14));
  CHECK(sphere_area(1, 2.0) == doctest::Approx(4 * kPi).epsilon(1e-14));
  CHECK(sphere_area(3) == doctest::Approx(2 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("zonal kernel values") {
  CHECK(gegenbauer_kernel(0, 2, 0.37) == doctest::Approx(1 / (4 * kPi)).epsilon(1e-14));
  CHECK(gegenbauer_kernel(1, 2, 1.0) == doctest::Approx(3 / (4 * kPi)).epsilon(1e-14));
  CHECK(gegenbauer_kernel(2, 2, 0.0) == doctest::Approx(-(5 / (4 * kPi)) * 0.5).epsilon(1e-14));
}

TEST_CASE("gegenbauer recurrences agree with closed forms") {
  for (double x : {-0.9, -0.3, 0.0, 0.41, 1.0}) {
    // d = 2: Legendre P_3
    CHECK(gegenbauer_normalized(3, 2, x) == doctest::Approx(0.5 * (5 * x * x * x - 3 * x)).epsilon(1e-13));
    // d = 1: Chebyshev
    CHECK(gegenbauer_normalized(4, 1, x) == doctest::Approx(std::cos(4 * std::acos(x))).epsilon(1e-12));
    // C_2^λ(x) = 2λ(λ+1)x² - λ
    const double lam = 1.7;
    CHECK(gegenbauer(2, lam, x) == doctest::Approx(2 * lam * (lam + 1) * x * x - lam).epsilon(1e-13));
  }
  const auto all = gegenbauer_normalized_all(6, 3, 0.2);
  for (int n = 0; n <= 6; ++n) CHECK(all[n] == doctest::Approx(gegenbauer_normalized(n, 3, 0.2)).epsilon(1e-14));
}

TEST_CASE("gegenbauer orthogonality under the sphere weight") {
  // d = 3: weight (1-x²)^{(d-2)/2}
  const Rule r = gauss_jacobi(40, 0.5, 0.5);
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; n < m; ++n) {
      double s = 0;
      for (int i = 0; i < r.size(); ++i) s += r.w[i] * gegenbauer_normalized(m, 3, r.x[i]) * gegenbauer_normalized(n, 3, r.x[i]);
      CHECK(std::abs(s) < 1e-13);
    }
}

TEST_CASE("Bessel J") {
  CHECK(bessel_j(0, 0) == 1.0);
  CHECK(std::abs(bessel_j(0.5, kPi)) < 1e-14);
  CHECK(bessel_j(1, 1) == doctest::Approx(0.4400505857449335).epsilon(1e-12));
  CHECK(bessel_j_series(1, 1) == doctest::Approx(0.4400505857449335).epsilon(1e-13));
  for (double z : {0.3, 2.0, 7.5, 31.0, 120.0})
    CHECK(bessel_j(0.5, z) == doctest::Approx(std::sqrt(2 / (kPi * z)) * std::sin(z)).epsilon(1e-10));
  for (double nu : {0.0, 0.3, 1.5, 4.0})
    for (double z : {0.5, 3.0, 9.0}) CHECK(bessel_j(nu, z) == doctest::Approx(bessel_j_series(nu, z)).epsilon(1e-10));
  CHECK_THROWS_AS(bessel_j(-1.5, 1.0), ValidationError);
}

TEST_CASE("Hermite polynomials") {
  CHECK(hermite_poly(2, 2.0) == 3.0);
  CHECK(hermite_poly(0, 7.3) == 1.0);
  CHECK(hermite_poly(4, 1.0) == -2.0);
  CHECK(hermite_poly(3, 2.0) == 2.0);
  CHECK(hermite_poly(1, -0.7) == -0.7);
}

TEST_CASE("Hermite orthogonality under the Gaussian measure") {
  const Rule r = gauss_hermite(30);
  double fact[9] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
  for (int q = 0; q <= 8; ++q)
    for (int p = 0; p <= 8; ++p) {
      double s = 0;
      for (int i = 0; i < r.size(); ++i) s += r.w[i] * hermite_poly(q, r.x[i]) * hermite_poly(p, r.x[i]);
      CHECK(std::abs(s - (p == q ? fact[q] : 0.0)) < 1e-10);
    }
}

TEST_CASE("Hermite coefficients and rank") {
  const auto h3 = hermite_coeffs([](double z) { return hermite_poly(3, z); }, 6);
  for (int q = 0; q <= 6; ++q) CHECK(h3.coeffs[q] == doctest::Approx(q == 3 ? 6.0 : 0.0).epsilon(1e-12));
  CHECK(h3.hermite_rank.value() == 3);

  const auto z2 = hermite_coeffs([](double z) { return z * z; }, 4);
  CHECK(z2.coeffs[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(z2.coeffs[1]) < 1e-13);
  CHECK(z2.coeffs[2] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(z2.hermite_rank.value() == 2);
  CHECK(z2.second_moment == doctest::Approx(3.0).epsilon(1e-13));

  const auto one = hermite_coeffs([](double) { return 1.0; }, 5);
  CHECK(one.coeffs[0] == doctest::Approx(1.0));
  CHECK_FALSE(one.hermite_rank.has_value());

  const auto c = hermite_coeffs([](double z) { return std::cos(z); }, 6);
  CHECK(c.hermite_rank.value() == 2);
  CHECK(c.coeffs[2] == doctest::Approx(-std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("Kummer M(a; b; -x)") {
  // M(a; a; -x) = e^{-x}
  CHECK(kummer_m_negative(1.3, 1.3, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  // M(1; 2; -x) = (1 - e^{-x})/x
  for (double x : {0.1, 1.0, 10.0, 60.0})
    CHECK(kummer_m_negative(1.0, 2.0, x) == doctest::Approx((1 - std::exp(-x)) / x).epsilon(1e-11));
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "strf/quadrature.hpp"

using namespace strf;

TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
  for (int n : {1, 5, 20, 64}) {
    const Rule r = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += r.w[i] * std::pow(r.x[i], k);
      CHECK(s == doctest::Approx(k % 2 ? 0.0 : 2.0 / (k + 1)).epsilon(1e-13));
    }
  }
  const Rule m = gauss_legendre(8, 1.0, 3.0);
  double s = 0;
  for (int i = 0; i < 8; ++i) s += m.w[i] * m.x[i] * m.x[i];
  CHECK(s == doctest::Approx(26.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Jacobi moments") {
  // ∫ (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
  for (auto [a, b] : {std::pair{0.5, 0.5}, {-0.35, 0.0}, {-0.6, -0.6}, {1.2, -0.4}}) {
    const Rule r = gauss_jacobi(30, a, b);
    double s = 0, s1 = 0;
    for (int i = 0; i < r.size(); ++i) {
      s += r.w[i];
      s1 += r.w[i] * r.x[i];
    }
    const double I0 = std::pow(2.0, a + b + 1) * std::exp(std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2));
    CHECK(s == doctest::Approx(I0).epsilon(1e-12));
    // first moment: I0 (b - a)/(a + b + 2)
    CHECK(s1 == doctest::Approx(I0 * (b - a) / (a + b + 2)).epsilon(1e-11));
  }
}

TEST_CASE("Gauss-Hermite integrates Gaussian moments") {
  const Rule r = gauss_hermite(20);
  double m[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < r.size(); ++i)
    for (int k = 0; k < 5; ++k) m[k] += r.w[i] * std::pow(r.x[i], 2 * k);
  double expect = 1;
  for (int k = 0; k < 5; ++k) {
    CHECK(m[k] == doctest::Approx(expect).epsilon(1e-12));
    expect *= 2 * k + 1;
  }
}

#include <doctest.h>

#include <cmath>

#include "strf/error.hpp"
#include "strf/rng.hpp"
#include "strf/stats.hpp"

using namespace strf;

TEST_CASE("moments of a known sample") {
  const std::vector<double> x{1, 2, 3, 4, 10, 0, -1, 2, 3, 5, 7, 1, 1, 2, 0,
                              4, 6, 2, 3, 9, 8, -2, 3, 1, 0, 2, 5, 4, 1, 6};
  const auto m = moments(x, 3);
  CHECK(m.n == 30);
  CHECK(m.mean == doctest::Approx(92.0 / 30));
  double v = 0, c3 = 0;
  for (double a : x) {
    v += (a - m.mean) * (a - m.mean);
    c3 += std::pow(a - m.mean, 3);
  }
  CHECK(m.variance == doctest::Approx(v / 29));
  CHECK(m.k3 == doctest::Approx(30.0 * c3 / (29.0 * 28.0)));
  CHECK_THROWS_AS(moments(std::vector<double>(29, 1.0)), ValidationError);
}

TEST_CASE("k-statistic is unbiased for chi-square") {
  Stream rs(1, 0, 0);
  std::vector<double> x(200000);
  for (auto& v : x) v = rs.chi_square(2.0);
  const auto m = moments(x);
  // κ3 of χ²_2 is 16
  CHECK(std::abs(m.k3 - 16.0) < 5 * m.k3_stderr);
  CHECK(std::abs(m.variance - 4.0) < 4 * m.variance_stderr);
}

TEST_CASE("empirical CF and KS distance") {
  const std::vector<double> x{0.0, 0.0};
  CHECK(std::abs(empirical_cf(x, 3.0) - 1.0) < 1e-15);
  CHECK(ks_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_distance({0, 0}, {1, 1}) == 1.0);
  CHECK(ks_distance({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));
}

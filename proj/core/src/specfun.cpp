#include "strf/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "strf/error.hpp"
#include "strf/quadrature.hpp"

namespace strf {

namespace {

long long checked_binom(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long i = 1; i <= k; ++i) {
    long long num;
    if (__builtin_mul_overflow(r, n - k + i, &num))
      throw CapacityError("eigenspace_dim: integer overflow, lower the degree");
    r = num / i;
  }
  return r;
}

}  // namespace

long long eigenspace_dim(int n, int d) {
  if (n < 0 || d < 1) throw ValidationError("eigenspace_dim: need n >= 0 and d >= 1");
  if (n == 0) return 1;
  // harmonic polynomials of degree n in d+1 variables
  const long long a = checked_binom(n + d - 1, n);
  const long long b = checked_binom(n + d - 2, n - 1);
  long long s;
  if (__builtin_add_overflow(a, b, &s)) throw CapacityError("eigenspace_dim: integer overflow");
  return s;
}

double sphere_area(int d, double R) {
  if (d < 0) throw ValidationError("sphere_area: d must be >= 0");
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h) * std::pow(R, d);
}

std::vector<double> gegenbauer_normalized_all(int n_max, int d, double x) {
  if (d < 1) throw ValidationError("gegenbauer: d must be >= 1");
  if (!(std::abs(x) <= 1.0 + 1e-14)) throw ValidationError("gegenbauer: argument outside [-1, 1]");
  std::vector<double> p(std::max(n_max, 0) + 1);
  const double lam = 0.5 * (d - 1);
  p[0] = 1.0;
  if (n_max >= 1) p[1] = x;
  for (int n = 2; n <= n_max; ++n)
    p[n] = (2.0 * (n + lam - 1.0) * x * p[n - 1] - (n - 1.0) * p[n - 2]) / (n + 2.0 * lam - 1.0);
  return p;
}

double gegenbauer_normalized(int n, int d, double x) {
  if (n < 0) throw ValidationError("gegenbauer: negative degree");
  return gegenbauer_normalized_all(n, d, x)[n];
}

double gegenbauer(int n, double lambda, double x) {
  if (!(lambda > 0.0)) throw ValidationError("gegenbauer: lambda must be positive");
  if (n == 0) return 1.0;
  double c0 = 1.0, c1 = 2.0 * lambda * x;
  for (int k = 2; k <= n; ++k) {
    const double c2 = (2.0 * (k + lambda - 1.0) * x * c1 - (k + 2.0 * lambda - 2.0) * c0) / k;
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

double gegenbauer_kernel(int n, int d, double cos_theta) {
  return static_cast<double>(eigenspace_dim(n, d)) / sphere_area(d) * gegenbauer_normalized(n, d, cos_theta);
}

double bessel_j_series(double theta, double z) {
  if (!(theta > -1.0)) throw ValidationError("bessel_j: order must exceed -1");
  if (z == 0.0) return theta == 0.0 ? 1.0 : 0.0;
  const double h = 0.5 * z;
  const double lead = theta * std::log(h) - std::lgamma(theta + 1.0);
  const double q = -h * h;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 500; ++m) {
    term *= q / (m * (m + theta));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && m > h) return std::exp(lead) * sum;
  }
  throw NumericalError("bessel_j: series did not converge (theta=" + std::to_string(theta) +
                       ", z=" + std::to_string(z) + ")");
}

double bessel_j(double theta, double z) {
  if (!(theta > -1.0)) throw ValidationError("bessel_j: order must exceed -1");
  if (!(z >= 0.0) || !std::isfinite(z)) throw ValidationError("bessel_j: argument must be finite and >= 0");
  if (z <= 6.0) return bessel_j_series(theta, z);
  if (theta < 0.0)
    return 2.0 * (theta + 1.0) / z * std::cyl_bessel_j(theta + 1.0, z) - std::cyl_bessel_j(theta + 2.0, z);
  return std::cyl_bessel_j(theta, z);
}

double hermite_poly(int q, double z) {
  if (q < 0) throw ValidationError("hermite_poly: negative order");
  if (q == 0) return 1.0;
  double h0 = 1.0, h1 = z;
  for (int k = 1; k < q; ++k) {
    const double h2 = z * h1 - k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

HermiteCoeffs hermite_coeffs(const std::function<double(double)>& J, int q_max) {
  if (q_max < 0) throw ValidationError("hermite_coeffs: q_max must be >= 0");
  auto compute = [&](int nodes, double& second) {
    const Rule r = gauss_hermite(nodes);
    std::vector<double> c(q_max + 1, 0.0);
    second = 0.0;
    for (int i = 0; i < r.size(); ++i) {
      const double f = J(r.x[i]);
      if (!std::isfinite(f)) throw ValidationError("hermite_coeffs: function not finite at a quadrature node");
      second += r.w[i] * f * f;
      double h0 = 1.0, h1 = r.x[i];
      c[0] += r.w[i] * f;
      if (q_max >= 1) c[1] += r.w[i] * f * h1;
      for (int k = 1; k < q_max; ++k) {
        const double h2 = r.x[i] * h1 - k * h0;
        h0 = h1;
        h1 = h2;
        c[k + 1] += r.w[i] * f * h1;
      }
    }
    return c;
  };
  int nodes = 2 * q_max + 32;
  double second = 0.0, second2 = 0.0;
  std::vector<double> c = compute(nodes, second);
  for (;;) {
    if (2 * nodes > 1024) throw NumericalError("hermite_coeffs: Gauss-Hermite quadrature did not converge");
    std::vector<double> c2 = compute(2 * nodes, second2);
    double diff = 0.0;
    for (int q = 0; q <= q_max; ++q) diff = std::max(diff, std::abs(c2[q] - c[q]));
    nodes *= 2;
    c = std::move(c2);
    second = second2;
    if (diff <= 1e-10) break;
  }
  HermiteCoeffs h;
  h.q_max = q_max;
  h.coeffs = c;
  h.second_moment = second;
  h.nodes_used = nodes;
  for (int q = 1; q <= q_max; ++q) {
    if (std::abs(c[q]) > 1e-9) {
      h.hermite_rank = q;
      break;
    }
  }
  return h;
}

double kummer_m_negative(double a, double b, double x) {
  if (!(b >= a) || !(a > 0.0) || !(x >= 0.0)) throw ValidationError("kummer_m_negative: need b >= a > 0, x >= 0");
  if (b == a) return std::exp(-x);
  if (x <= 40.0) {
    // Kummer transform: positive-term series for M(b-a; b; x)
    double term = 1.0, sum = 1.0;
    const double ba = b - a;
    for (int k = 1; k < 2000; ++k) {
      term *= (ba + k - 1.0) / (b + k - 1.0) * x / k;
      sum += term;
      if (term < 1e-17 * sum && k > x) return std::exp(-x) * sum;
    }
    throw NumericalError("kummer_m_negative: series did not converge");
  }
  const double pre = std::exp(std::lgamma(b) - std::lgamma(b - a) - a * std::log(x));
  double term = 1.0, sum = 1.0;
  const double c = 1.0 + a - b;
  for (int s = 1; s < 200; ++s) {
    const double next = term * (a + s - 1.0) * (c + s - 1.0) / (s * x);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return pre * sum;
}

}  // namespace strf

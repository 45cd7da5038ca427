#include "strf/stats.hpp"

#include <algorithm>
#include <cmath>

#include "strf/error.hpp"

namespace strf {

namespace {

struct Central {
  double mean, m2, m3, m4;
};

Central central(const double* x, long n) {
  double s = 0.0;
  for (long i = 0; i < n; ++i) s += x[i];
  const double mu = s / n;
  double a2 = 0.0, a3 = 0.0, a4 = 0.0;
  for (long i = 0; i < n; ++i) {
    const double d = x[i] - mu, d2 = d * d;
    a2 += d2;
    a3 += d2 * d;
    a4 += d2 * d2;
  }
  return {mu, a2 / n, a3 / n, a4 / n};
}

double k3_stat(const Central& c, long n) {
  const double nn = static_cast<double>(n);
  return nn * nn / ((nn - 1.0) * (nn - 2.0)) * c.m3;
}

}  // namespace

Moments moments(const std::vector<double>& x, int batches) {
  const long n = static_cast<long>(x.size());
  if (n < 30) throw ValidationError("moments: need at least 30 samples");
  batches = static_cast<int>(std::clamp<long>(batches, 2, n / 10));
  Moments out;
  out.n = n;
  const Central c = central(x.data(), n);
  const double nn = static_cast<double>(n);
  out.mean = c.mean;
  out.variance = c.m2 * nn / (nn - 1.0);
  // Var(s²) ≈ (μ4 - μ2²)/n
  out.variance_stderr = std::sqrt(std::max(0.0, c.m4 - c.m2 * c.m2) / nn);
  out.k3 = k3_stat(c, n);
  const long b = n / batches;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < batches; ++i) {
    const double v = k3_stat(central(x.data() + i * b, b), b);
    s += v;
    s2 += v * v;
  }
  const double mb = s / batches;
  const double var_b = (s2 - batches * mb * mb) / (batches - 1.0);
  // one batch k-statistic has variance ~ 1/b; the full sample has ~ 1/n
  out.k3_stderr = std::sqrt(std::max(0.0, var_b) * static_cast<double>(b) / nn);
  return out;
}

std::complex<double> empirical_cf(const std::vector<double>& x, double xi) {
  double re = 0.0, im = 0.0;
  for (double v : x) {
    re += std::cos(xi * v);
    im += std::sin(xi * v);
  }
  const double n = static_cast<double>(x.size());
  return {re / n, im / n};
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ValidationError("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

}  // namespace strf

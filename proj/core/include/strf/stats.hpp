#pragma once

#include <complex>
#include <vector>

namespace strf {

struct Moments {
  long n = 0;
  double mean = 0.0;
  double variance = 0.0;      // unbiased
  double variance_stderr = 0.0;
  double k3 = 0.0;            // unbiased third k-statistic
  double k3_stderr = 0.0;     // from batch k-statistics
};

// Batches of equal consecutive size estimate the spread of k3; batches <= n/10.
Moments moments(const std::vector<double>& x, int batches = 100);

// (1/n) Σ exp(i ξ x_j).
std::complex<double> empirical_cf(const std::vector<double>& x, double xi);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace strf

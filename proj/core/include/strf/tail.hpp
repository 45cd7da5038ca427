#pragma once

#include <functional>
#include <vector>

namespace strf {

// λ(k) ≈ A (k + b + c/k)^{-p} with p fixed.
struct PowerTail {
  double log_A = 0.0;
  double p = 1.0;
  double b = 0.0;
  double c = 0.0;
  double rms_residual = 0.0;
  double eval(double k) const;
};

// Least-squares fit in log space over the supplied points (Levenberg-Marquardt on log A, b, c).
PowerTail fit_power_tail(const std::vector<double>& k, const std::vector<double>& value, double p);

// Σ_{k >= k0} w(k) λ(k)^m for the model, w defaults to 1. w must be defined for real arguments.
double power_tail_sum(const PowerTail& t, int m, long k0, const std::function<double(double)>& w = nullptr);

}  // namespace strf

#include "strf/tail.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "strf/error.hpp"
#include "strf/quadrature.hpp"

namespace strf {

double PowerTail::eval(double k) const { return std::exp(log_A - p * std::log(k + b + c / k)); }

PowerTail fit_power_tail(const std::vector<double>& k, const std::vector<double>& value, double p) {
  const int n = static_cast<int>(k.size());
  if (n < 4 || value.size() != k.size()) throw ValidationError("fit_power_tail: need at least 4 points");
  for (double v : value)
    if (!(v > 0.0)) throw NumericalError("fit_power_tail: non-positive eigenvalue in the fit window");
  PowerTail t;
  t.p = p;
  Eigen::Vector3d x(std::log(value.back()) + p * std::log(k.back()), 0.0, 0.0);
  auto residual = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r) {
    r.resize(n);
    for (int i = 0; i < n; ++i) {
      const double arg = k[i] + q[1] + q[2] / k[i];
      if (!(arg > 0.0)) return false;
      r[i] = std::log(value[i]) - (q[0] - p * std::log(arg));
    }
    return true;
  };
  Eigen::VectorXd r, rn;
  residual(x, r);
  double lambda = 1e-3;
  for (int it = 0; it < 200; ++it) {
    Eigen::MatrixXd J(n, 3);
    for (int i = 0; i < n; ++i) {
      const double arg = k[i] + x[1] + x[2] / k[i];
      J(i, 0) = -1.0;
      J(i, 1) = p / arg;
      J(i, 2) = p / (arg * k[i]);
    }
    const Eigen::Matrix3d H = J.transpose() * J;
    const Eigen::Vector3d gr = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::Matrix3d A = H;
      for (int j = 0; j < 3; ++j) A(j, j) *= (1.0 + lambda);
      const Eigen::Vector3d step = A.ldlt().solve(-gr);
      const Eigen::Vector3d xn = x + step;
      if (residual(xn, rn) && rn.squaredNorm() < r.squaredNorm()) {
        x = xn;
        const double drop = r.squaredNorm() - rn.squaredNorm();
        r = rn;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        if (drop < 1e-28) it = 1000;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  t.log_A = x[0];
  t.b = x[1];
  t.c = x[2];
  t.rms_residual = std::sqrt(r.squaredNorm() / n);
  return t;
}

double power_tail_sum(const PowerTail& t, int m, long k0, const std::function<double(double)>& w) {
  if (m < 1) throw ValidationError("power_tail_sum: m must be >= 1");
  auto weight = [&](double k) { return w ? w(k) : 1.0; };
  const long explicit_terms = 4000;
  double s = 0.0;
  for (long k = k0; k < k0 + explicit_terms; ++k) s += weight(static_cast<double>(k)) * std::pow(t.eval(k), m);
  // midpoint remainder ∫_{X}^∞, X = k0 + explicit_terms - 1/2, substitution x = X e^u, u <= 200
  const double X = static_cast<double>(k0 + explicit_terms) - 0.5;
  const Rule g = gauss_legendre(8);
  double rem = 0.0, last = 0.0;
  for (double u0 = 0.0; u0 < 200.0; u0 += 1.0) {
    double panel = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      const double u = u0 + 0.5 + 0.5 * g.x[i];
      const double x = X * std::exp(u);
      const double log_term = std::log(x) + std::log(weight(x)) + m * (t.log_A - t.p * std::log(x + t.b + t.c / x));
      panel += 0.5 * g.w[i] * std::exp(log_term);
    }
    rem += panel;
    last = panel;
    if (u0 > 10.0 && std::abs(panel) < 1e-18 * std::abs(rem)) break;
  }
  if (!(std::abs(last) < 1e-10 * std::abs(rem) + 1e-300))
    throw NumericalError("power_tail_sum: tail does not converge (m too small for the decay)");
  return s + rem;
}

}  // namespace strf

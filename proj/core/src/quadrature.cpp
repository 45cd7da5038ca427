#include "strf/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "strf/error.hpp"

namespace strf {

namespace {

Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double mu0) {
  const int n = static_cast<int>(diag.size());
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  if (n == 1) {
    r.x[0] = diag[0];
    r.w[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigensolver failed");
  for (int i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    r.w[i] = mu0 * v * v;
  }
  return r;
}

}  // namespace

Rule gauss_legendre(int n) {
  if (n < 1) throw ValidationError("gauss_legendre: n must be >= 1");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

Rule gauss_legendre(int n, double a, double b) {
  Rule r = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c + h * r.x[i];
    r.w[i] *= h;
  }
  return r;
}

Rule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw ValidationError("gauss_jacobi: n must be >= 1");
  if (!(a > -1.0) || !(b > -1.0)) throw ValidationError("gauss_jacobi: exponents must exceed -1");
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0)
      diag[k] = (b - a) / (ab + 2.0);
    else
      diag[k] = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double v;
    if (k == 1)
      v = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    else
      v = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    sub[k - 1] = std::sqrt(v);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(ab + 2.0));
  if (n == 1) return golub_welsch(diag, Eigen::VectorXd(0), mu0);
  return golub_welsch(diag, sub.head(n - 1), mu0);
}

Rule gauss_hermite(int n) {
  if (n < 1) throw ValidationError("gauss_hermite: n must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
  Rule r = golub_welsch(diag, sub, 1.0);
  if (n == 1) return r;
  // Newton polish on the orthonormal recurrence, then Christoffel weights 1 / Σ h_k(x)²; the
  // eigenvector weights lose relative accuracy in the tails
  for (int i = 0; i < n; ++i) {
    double x = r.x[i], christoffel = 1.0;
    for (int it = 0; it < 3; ++it) {
      double h0 = 1.0, h1 = x, s = 1.0 + x * x;
      for (int k = 1; k < n - 1; ++k) {
        const double h2 = (x * h1 - std::sqrt(static_cast<double>(k)) * h0) / std::sqrt(k + 1.0);
        h0 = h1;
        h1 = h2;
        s += h1 * h1;
      }
      // h1 = h_{n-1}, h0 = h_{n-2}; h_n and h_n' = √n h_{n-1}
      const double hn = (x * h1 - std::sqrt(n - 1.0) * h0) / std::sqrt(static_cast<double>(n));
      christoffel = s;
      x -= hn / (std::sqrt(static_cast<double>(n)) * h1);
    }
    r.x[i] = x;
    r.w[i] = 1.0 / christoffel;
  }
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (r.x[n - 1 - i] - r.x[i]), w = 0.5 * (r.w[i] + r.w[n - 1 - i]);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace strf

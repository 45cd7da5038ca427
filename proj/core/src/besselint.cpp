#include "strf/besselint.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "strf/error.hpp"
#include "strf/quadrature.hpp"
#include "strf/specfun.hpp"

namespace strf {

void bessel_sequence(double nu0, int N, double z, double* out) {
  if (N <= 0) return;
  if (z == 0.0) {
    for (int n = 0; n < N; ++n) out[n] = (nu0 + n == 0.0) ? 1.0 : 0.0;
    return;
  }
  // highest index whose order is below z (forward recurrence is stable there)
  int n0 = static_cast<int>(std::floor(z - nu0));
  n0 = std::clamp(n0, 0, N - 1);
  out[0] = bessel_j(nu0, z);
  if (n0 >= 1) {
    out[1] = bessel_j(nu0 + 1.0, z);
    for (int n = 1; n < n0; ++n) out[n + 1] = 2.0 * (nu0 + n) / z * out[n] - out[n - 1];
  }
  if (n0 == N - 1) return;
  const int top = std::max(N - 1, static_cast<int>(std::ceil(z))) + 30 + static_cast<int>(10.0 * std::cbrt(z));
  // r_n = J_{ν0+n} / J_{ν0+n-1}
  std::vector<double> r(N, 0.0);
  double rn = 0.0;
  for (int n = top; n > n0; --n) {
    rn = 1.0 / (2.0 * (nu0 + n) / z - rn);
    if (n < N) r[n] = rn;
  }
  for (int n = n0 + 1; n < N; ++n) out[n] = r[n] * out[n - 1];
}

namespace {

// Hankel P and Q for order mu at argument z.
void hankel_pq(double mu, double z, double& P, double& Q) {
  const double m4 = 4.0 * mu * mu;
  double ak = 1.0;  // a_k(mu)
  P = 1.0;
  Q = 0.0;
  double zk = 1.0;
  for (int k = 1; k <= 24; ++k) {
    ak *= (m4 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0);
    zk *= z;
    const double t = ak / zk;
    // a_{2j} terms carry (-1)^j in P, a_{2j+1} terms carry (-1)^j in Q
    if (k % 2 == 0)
      P += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * t;
    else
      Q += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * t;
    if (std::abs(t) < 1e-17) break;
  }
}

}  // namespace

Eigen::MatrixXd bessel_product_integrals(double nu0, int N, const std::function<double(double)>& g,
                                         const BesselIntegralOptions& opt) {
  if (N <= 0) throw ValidationError("bessel_product_integrals: N must be positive");
  const double s = opt.zero_power + 2.0 * nu0 + 1.0;
  if (!(s > 0.0)) throw ValidationError("bessel_product_integrals: integrand not integrable at 0");
  const double mu_max = nu0 + N - 1;
  double U0 = opt.split > 0.0 ? opt.split : std::max(2000.0, 3.0 * mu_max * mu_max);
  U0 = 1.0 + opt.panel * std::ceil((U0 - 1.0) / opt.panel);

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);

  // collect nodes of the numerical part
  std::vector<double> xs, ws;
  {
    const Rule v = gauss_legendre(40, 0.0, 1.0);
    for (int i = 0; i < v.size(); ++i) {
      const double om = std::pow(v.x[i], 1.0 / s);
      xs.push_back(om);
      ws.push_back(v.w[i] * std::pow(v.x[i], 1.0 / s - 1.0) / s);
    }
    const Rule p = gauss_legendre(opt.panel_points);
    for (double a = 1.0; a < U0 - 1e-9; a += opt.panel) {
      const double h = 0.5 * opt.panel, c = a + h;
      for (int i = 0; i < p.size(); ++i) {
        xs.push_back(c + h * p.x[i]);
        ws.push_back(h * p.w[i]);
      }
    }
  }
  const int batch = 256;
  Eigen::MatrixXd Jb(N, batch), Wb(N, batch);
  std::vector<double> buf(N);
  int fill = 0;
  auto flush = [&]() {
    if (fill == 0) return;
    if (!opt.diagonal_only) M.noalias() += Wb.leftCols(fill) * Jb.leftCols(fill).transpose();
    fill = 0;
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double om = xs[i];
    const double wg = ws[i] * g(om);
    if (wg == 0.0) continue;
    bessel_sequence(nu0, N, om, buf.data());
    if (opt.diagonal_only) {
      for (int n = 0; n < N; ++n) diag[n] += wg * buf[n] * buf[n];
      continue;
    }
    for (int n = 0; n < N; ++n) {
      Jb(n, fill) = buf[n];
      Wb(n, fill) = wg * buf[n];
    }
    if (++fill == batch) flush();
  }
  flush();

  // asymptotic tail [U0, ∞): non-oscillatory part by quadrature in log ω, oscillatory part by parts
  {
    const Rule p = gauss_legendre(8);
    std::vector<double> P(N), Q(N);
    for (double t0 = 0.0; t0 < 60.0; t0 += 0.5) {
      for (int i = 0; i < p.size(); ++i) {
        const double t = t0 + 0.25 + 0.25 * p.x[i];
        const double om = U0 * std::exp(t);
        const double w = 0.25 * p.w[i] * g(om) / std::numbers::pi;  // dω/(πω) = dt/π
        if (w == 0.0) continue;
        for (int n = 0; n < N; ++n) hankel_pq(nu0 + n, om, P[n], Q[n]);
        for (int m = 0; m < N; ++m) {
          for (int n = opt.diagonal_only ? m : 0; n < (opt.diagonal_only ? m + 1 : N); ++n) {
            const int dn = n - m;
            const double cd = (dn % 2 == 0) ? ((dn / 2) % 2 == 0 ? 1.0 : -1.0) : 0.0;
            const double sd = (dn % 2 != 0) ? ((((dn - 1) / 2) % 2 + 2) % 2 == 0 ? 1.0 : -1.0) : 0.0;
            const double v = w * ((P[m] * P[n] + Q[m] * Q[n]) * cd + (P[m] * Q[n] - Q[m] * P[n]) * sd);
            if (opt.diagonal_only)
              diag[m] += v;
            else
              M(m, n) += v;
          }
        }
      }
    }
    // H(ω) = g(ω)/(πω) (X + iY) e^{-iφ}; ∫_U^∞ H e^{2iω} ≈ e^{2iU}(iH(U)/2 - H'(U)/4)
    const double du = 1e-3 * U0;
    auto H = [&](double om, int m, int n) {
      double Pm, Qm, Pn, Qn;
      hankel_pq(nu0 + m, om, Pm, Qm);
      hankel_pq(nu0 + n, om, Pn, Qn);
      const double X = Pm * Pn - Qm * Qn, Y = Pm * Qn + Qm * Pn;
      const double phi = (2.0 * nu0 + m + n + 1.0) * 0.5 * std::numbers::pi;
      return g(om) / (std::numbers::pi * om) * std::complex<double>(X, Y) * std::polar(1.0, -phi);
    };
    const std::complex<double> e2 = std::polar(1.0, 2.0 * U0);
    const std::complex<double> I(0.0, 1.0);
    for (int m = 0; m < N; ++m) {
      for (int n = opt.diagonal_only ? m : m; n < (opt.diagonal_only ? m + 1 : N); ++n) {
        const std::complex<double> h0 = H(U0, m, n);
        const std::complex<double> h1 = (H(U0 + du, m, n) - H(U0 - du, m, n)) / (2.0 * du);
        const double v = std::real(e2 * (I * h0 * 0.5 - h1 * 0.25));
        if (opt.diagonal_only) {
          diag[m] += v;
        } else {
          M(m, n) += v;
          if (n != m) M(n, m) += v;
        }
      }
    }
  }
  if (opt.diagonal_only) return diag.asDiagonal();
  return 0.5 * (M + M.transpose());
}

double weber_schafheitlin_square(double mu, double lambda) {
  if (!(lambda > 0.0 && lambda < 2.0 * mu + 1.0))
    throw ValidationError("weber_schafheitlin_square: need 0 < lambda < 2 mu + 1");
  return std::exp(std::lgamma(lambda) + std::lgamma(mu + 0.5 * (1.0 - lambda)) - lambda * std::log(2.0) -
                  2.0 * std::lgamma(0.5 * (1.0 + lambda)) - std::lgamma(mu + 0.5 * (1.0 + lambda)));
}

}  // namespace strf

#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace strf {

// Dimension Γ(n,d) of the degree-n spherical harmonics on S_d.
long long eigenspace_dim(int n, int d);

// Surface measure |S_d(R)| of the radius-R sphere in R^{d+1}.
double sphere_area(int d, double R = 1.0);

// Gegenbauer C_n^λ(x) normalized to 1 at x = 1, with λ = (d-1)/2; Chebyshev T_n for d = 1.
double gegenbauer_normalized(int n, int d, double x);
// All normalized values for degrees 0..n_max.
std::vector<double> gegenbauer_normalized_all(int n_max, int d, double x);

// Unnormalized Gegenbauer C_n^λ(x), λ > 0.
double gegenbauer(int n, double lambda, double x);

// Zonal kernel Σ_j S_nj(x) S_nj(y) on the unit sphere as a function of cos θ.
double gegenbauer_kernel(int n, int d, double cos_theta);

// Bessel J_θ(z), θ > -1, z >= 0.
double bessel_j(double theta, double z);
// Power series for J_θ(z); used for small z and as a reference.
double bessel_j_series(double theta, double z);

// Probabilists' Hermite polynomial He_q(z).
double hermite_poly(int q, double z);

struct HermiteCoeffs {
  int q_max = 0;
  std::vector<double> coeffs;     // coeffs[q] = E[He_q(Z) J(Z)]
  std::optional<int> hermite_rank;
  double second_moment = 0.0;     // E[J(Z)^2]
  int nodes_used = 0;
};

HermiteCoeffs hermite_coeffs(const std::function<double(double)>& J, int q_max);

// Confluent hypergeometric M(a; b; -x) for x >= 0, b >= a > 0.
double kummer_m_negative(double a, double b, double x);

}  // namespace strf

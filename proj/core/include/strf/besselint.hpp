#pragma once

#include <Eigen/Dense>
#include <functional>

namespace strf {

// J_{ν0+n}(z) for n = 0..N-1: forward recurrence below the turning point,
// backward ratio recurrence above it.
void bessel_sequence(double nu0, int N, double z, double* out);

struct BesselIntegralOptions {
  double zero_power = 0.0;     // g(ω) ~ ω^{zero_power} as ω -> 0
  bool diagonal_only = false;
  double panel = 2.0;
  int panel_points = 10;
  double split = 0.0;          // start of the asymptotic tail; 0 selects automatically
};

// M(m,n) = ∫_0^∞ g(ω) J_{ν0+m}(ω) J_{ν0+n}(ω) dω, 0 <= m,n < N.
// Numerical quadrature up to the split point, Hankel asymptotics beyond it.
Eigen::MatrixXd bessel_product_integrals(double nu0, int N, const std::function<double(double)>& g,
                                         const BesselIntegralOptions& opt = {});

// Closed form ∫_0^∞ t^{-λ} J_μ(t)² dt, 0 < λ < 2μ+1.
double weber_schafheitlin_square(double mu, double lambda);

}  // namespace strf

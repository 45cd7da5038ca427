#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "strf/specfun.hpp"
#include "strf/spectra.hpp"

namespace strf {

// Standard normals η_{n,j,k} for n <= N_max, j < Γ(n,d), k < K_max (0-based k).
struct KLSample {
  int d = 2;
  int N_max = 0;
  int K_max = 0;
  double T = 1.0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  std::vector<long long> dims;
  std::vector<long long> offsets;   // start of degree n in eta
  std::vector<double> eta;
  double at(int n, long long j, int k) const { return eta[offsets[n] + j * K_max + k]; }
};

// η_{n,j,k} is the normal with flat index (n, j, k) of stream (seed, replicate).
KLSample sample_field(int d, int N_max, int K_max, double T, double gamma, std::uint64_t seed,
                      std::uint64_t replicate = 0);
KLSample sample_field(const AngularSpectrum& ang, const TemporalEigensystem& temps, double gamma, std::uint64_t seed,
                      std::uint64_t replicate = 0);

struct FunctionalResult {
  double value = 0.0;
  std::string route;                // parseval | grid
  std::string kind;                 // S_T | A_T
  double T = 0.0;
};

// Parseval route: d_T^{-1} Σ_{n,j,k} w_n v_k (η² - 1) for spatial weights w and temporal v.
FunctionalResult functional_S_T(const KLSample& s, const std::vector<double>& spatial, const std::vector<double>& temporal,
                                double d_T);
FunctionalResult functional_S_T(const KLSample& s, const AngularSpectrum& ang, const TemporalEigensystem& temps,
                                double d_T);

// Real orthonormal harmonics on the unit S_d, d ∈ {1, 2}, degrees 0..N_max, j-ordering
// (cos 0, cos 1, sin 1, cos 2, sin 2, ...). x is a unit vector in R^{d+1}.
std::vector<double> real_harmonics(int d, int N_max, const double* x);

struct FieldGrid {
  int d = 2;
  double R = 1.0;
  std::vector<double> points;       // unit vectors, 3 components each
  std::vector<double> weights;      // surface weights on S_d(R)
  std::vector<double> t_nodes, t_weights;
  int n_points() const { return static_cast<int>(weights.size()); }
};

// Gauss-Legendre in cos θ × uniform longitude (d = 2) or uniform angles (d = 1), crossed with the
// temporal Nyström nodes. n_lat is ignored for d = 1.
FieldGrid make_grid(int d, double R, int n_lat, int n_lon, const TemporalEigensystem& temps);

// Z at grid points (rows) and temporal nodes (columns).
Eigen::MatrixXd evaluate_field(const KLSample& s, const AngularSpectrum& ang, const TemporalEigensystem& temps,
                               const FieldGrid& g);

// Truncated pointwise variance σ²(t) at the temporal nodes (constant over the sphere).
std::vector<double> pointwise_variance(const AngularSpectrum& ang, const TemporalEigensystem& temps, int N_max,
                                       int K_max);

// Grid route: d_T^{-1} [∫∫ Z² - Σ Γ_n B_n B_{n,k}].
FunctionalResult functional_S_T_grid(const Eigen::MatrixXd& Z, const FieldGrid& g, const AngularSpectrum& ang,
                                     const TemporalEigensystem& temps, int K_max, double d_T);

// d_T^{-1} ∫∫ [𝒥(Z) - E 𝒥(σ(t) Z₀)] divided by 𝒥₂/2; requires Hermite rank 2.
FunctionalResult functional_A_T(const Eigen::MatrixXd& Z, const FieldGrid& g, const AngularSpectrum& ang,
                                const TemporalEigensystem& temps, int K_max, const std::function<double(double)>& J,
                                const HermiteCoeffs& hc, double d_T);

// E[(S_T - S_∞)²] in the truncated model with shared η: 2 Σ Γ_n (w_{nk} - w̃_{nk})².
double coupled_gap_exact(const std::vector<double>& spatial_T, const std::vector<double>& temporal_T,
                         const std::vector<double>& spatial_inf, const std::vector<double>& temporal_inf,
                         const std::vector<long long>& dims);

}  // namespace strf

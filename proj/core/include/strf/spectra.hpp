#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "strf/model.hpp"
#include "strf/tail.hpp"

namespace strf {

struct AngularSpectrum {
  int d = 2;
  double T_gamma = 1.0;
  std::vector<double> coeffs;       // B_n(0, T^γ), n = 0..N_max
  std::vector<long long> dims;      // Γ(n, d)
  std::string method;
};

// Bessel-integral route against the model's spectral density.
AngularSpectrum angular_coeffs(const ModelParams& p, double T_gamma, int N_max);

// Funk-Hecke projection of a zonal covariance C(r), r the chordal distance on S_d(R).
AngularSpectrum angular_coeffs_funk_hecke(int d, double R, int N_max, const std::function<double(double)>& cov,
                                          int n_quad = 0);
AngularSpectrum angular_coeffs_funk_hecke(const ModelParams& p, double T_gamma, int N_max);

enum class TemporalMethod { automatic, nystrom, spectral };

struct TemporalEigensystem {
  double T = 1.0;                   // interval [-T, T]
  std::string method;
  std::vector<double> nodes, weights;
  std::vector<double> eigenvalues;  // descending
  Eigen::MatrixXd eigenvectors;     // column k holds φ_k at the nodes (Nyström only)
  int clamped = 0;                  // eigenvalues in (-1e-10, 0) set to zero
};

// Nyström on [-T, T] for a stationary kernel k(t - s) given as a function of the lag.
TemporalEigensystem nystrom_eigs(const std::function<double(double)>& kernel, double T, int K_max, int n_nodes);

// Eigenpairs of C_T on [-T, T] in physical units (the normalized kernel B_n(τ)/B_n(0) of the
// separable model, the same for every degree n). Spectral mode treats n_nodes as the basis size.
TemporalEigensystem temporal_eigs(const ModelParams& p, int n, double T, int K_max, int n_nodes,
                                  TemporalMethod method = TemporalMethod::automatic);

// Eigenvalues b_k(T) on [-1, 1] of C_T(T u)/(ℓ_T T^{-α_T}) by Galerkin in weighted Gegenbauer
// functions; T = inf gives the Riesz kernel |u|^{-α_T}.
std::vector<double> scaled_temporal_eigs(const ModelParams& p, double T, int K_max, int n_basis);

// Tail of an eigenvalue sequence past the retained range.
struct SpectrumTail {
  std::vector<double> extra;        // computed values past the retained range
  long extra_start = 0;             // index of extra[0]
  PowerTail model, model_alt;       // fits on two windows, used past the computed range
  long model_start = 0;
  int d = 0;                        // > 0: terms carry multiplicity Γ(n, d)
  double sum(int m) const;
  double uncertainty(int m) const;
};

struct EigenSequence {
  std::vector<double> values;
  std::vector<long long> dims;      // empty for unit multiplicities
  long first_index = 0;
  SpectrumTail tail;
  // Σ mult·λ^m over the retained values, plus the tail when asked.
  double power_sum(int m, bool with_tail = true) const;
};

// B̃_n(0) on S_d(1) for the kernel ‖x-y‖^{-α_S}, n = 0..N_max.
EigenSequence riesz_spatial_eigs(double alpha_s, int d, int N_max, int N_fit = 0);

// B̃_k on [-1, 1] for |t-s|^{-α_T}, k = 1..K_max; n_nodes is the Galerkin basis size.
EigenSequence riesz_temporal_eigs(double alpha_t, int K_max, int n_nodes = 400);

// Product-integration Nyström (exact local integrals of |t-s|^{-α} against hat functions).
std::vector<double> riesz_temporal_eigs_product(double alpha_t, int K_max, int n_nodes);

struct RieszSpectrum {
  int d = 2;
  double alpha_s = 0.3, alpha_t = 0.25;
  EigenSequence spatial;            // index n from 0
  EigenSequence temporal;           // index k from 1
};

RieszSpectrum riesz_spectrum(const ModelParams& p, int N_max = 30, int K_max = 50);

struct TracePower {
  double value = 0.0;               // including tails
  double truncated = 0.0;           // retained index set only
  double tail = 0.0;                // value - truncated, from the fitted tails
  double tail_bound = 0.0;          // uncertainty of the tail estimate
};

// tr(K^m) = Σ_n Γ(n,d) B̃_n^m · Σ_k B̃_k^m, m >= 2.
TracePower trace_power(const RieszSpectrum& s, int m);

// Continuous multiplicity Γ(x, d) used for tail integrals.
double eigenspace_dim_real(double x, int d);

// CSV exports: (n, Gamma, B_n) and (k, B_k).
std::string angular_csv(const AngularSpectrum& a);
std::string temporal_csv(const std::vector<double>& eigenvalues, long first_index = 1);

}  // namespace strf

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "strf/model.hpp"
#include "strf/spectra.hpp"

namespace strf {

struct CumulantTable {
  int m_min = 2;
  std::vector<double> values;       // c_m for m = m_min, m_min + 1, ...
  std::vector<double> stderr_;      // per-entry error estimate
  std::string method;
  int m_max() const { return m_min + static_cast<int>(values.size()) - 1; }
  double c(int m) const;
  double err(int m) const;
};

// c_m = Σ_n Γ(n,d) B̃_n^m Σ_k B̃_k^m for m = 2..M; throws NumericalError when a tail
// uncertainty exceeds 1% of the value.
CumulantTable cumulants_spectral(const RieszSpectrum& s, int M);

// Same from explicit spatial weights with multiplicities and temporal weights (no tails).
CumulantTable cumulants_from_weights(const std::vector<double>& spatial, const std::vector<double>& dims,
                                     const std::vector<double>& temporal, int M);

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long n_samples = 0;
};

// Circular-product integral over (S_d × [-1,1])^m by importance-sampled chains, d ∈ {1, 2}.
McEstimate cumulants_montecarlo(const ModelParams& p, int m, long n_samples, std::uint64_t seed);

struct CharacteristicCurve {
  std::vector<double> xi;
  std::vector<std::complex<double>> values;
  int truncation_m = 0;             // highest cumulant used in the series part
  double radius = 0.0;              // series convergence radius in ξ
  std::string method;
  double route_gap = 0.0;           // max |product - series| where both apply
};

// Pure cumulant series ψ(ξ) = exp(½ Σ_{m>=2} (2iξ)^m c_m / m). Throws ValidationError when a grid
// point lies outside the radius inferred from the c_m ratios.
CharacteristicCurve limit_cf(const CumulantTable& c, const std::vector<double>& xi);

// Cumulants of the part of the limit operator outside the retained (n, k) rectangle.
struct TailCumulants {
  std::vector<double> c;            // c[m] for m = 0..M, entries below 2 unused
  double lambda_max = 0.0;          // largest tail eigenvalue
  double radius() const { return lambda_max > 0 ? 0.5 / lambda_max : 1e300; }
};
TailCumulants tail_cumulants(const RieszSpectrum& s, int M = 40);

// Product over the retained eigenvalues times the cumulant series of the tail.
CharacteristicCurve limit_cf(const RieszSpectrum& s, const std::vector<double>& xi);

// ψ_{S_T}: weights B_n(0,T^γ) B_{n,k}(T) / d_T with the separable temporal eigenvalues.
// The Fredholm product (centered) is the returned value; the cumulant series is evaluated where it
// converges and must agree (ConsistencyError above 1e-6). A tail, when given, multiplies both.
CharacteristicCurve finite_T_cf(const AngularSpectrum& ang, const std::vector<double>& temporal, double d_T,
                                const std::vector<double>& xi, int M = 40, const TailCumulants* tail = nullptr,
                                bool centered = true);

// Uncentered T-family product Π (1 - 2iξ w)^{-Γ/2} and its exp-trace form.
std::complex<double> cf_product_uncentered(const std::vector<double>& w, const std::vector<double>& mult, double xi);
std::complex<double> cf_trace_uncentered(const std::vector<double>& w, const std::vector<double>& mult, double xi);

// Π (1 - ω λ_l).
std::complex<double> fredholm_det(const std::vector<double>& eigs, std::complex<double> omega);
// exp(-Σ_k ω^k tr(A^k)/k); requires |ω| Σ λ < 1.
std::complex<double> fredholm_det_trace(const std::vector<double>& eigs, std::complex<double> omega);

struct SampleOptions {
  bool squared_weights = false;     // B̃_n² B̃_k² instead of B̃_n B̃_k
  bool tail_compensation = true;    // Gaussian stand-in for the discarded tail variance
  int threads = 1;
};

// Replicates of S_∞ = Σ_{n,k} w_{nk} (χ²_{Γ(n,d)} - Γ(n,d)); replicate r draws from stream (seed, r).
std::vector<double> sample_S_infinity(const RieszSpectrum& s, long n_samples, std::uint64_t seed,
                                      const SampleOptions& opt = {});

std::string cumulants_csv(const CumulantTable& t);
std::string curve_csv(const CharacteristicCurve& c);

}  // namespace strf

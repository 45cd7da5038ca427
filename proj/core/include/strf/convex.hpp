#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "strf/model.hpp"
#include "strf/rng.hpp"

namespace strf {

enum class BodyKind { box, ball };

struct ConvexBody {
  BodyKind kind = BodyKind::box;
  int D = 2;                          // ambient dimension d + 1
  std::vector<double> half_widths;    // box
  double radius = 1.0;                // ball
  double volume() const;
  double diameter() const;
};

ConvexBody make_box(int D, double half_width = 1.0);
ConvexBody make_box(std::vector<double> half_widths);
ConvexBody make_ball(int D, double radius = 1.0);

// |K|^{-1} ∫_K e^{i<λ,x>} dx (real for the centered bodies).
std::complex<double> indicator_ft(const ConvexBody& K, const double* lam);
// sin(ω)/ω, the same for 𝕋(1) = [-1, 1].
double interval_ft(double omega);

// c(D, α_S, α_T) = c_R(α_S, D) c_R(α_T, 1).
double riesz_constant(int D, double alpha_s, double alpha_t);

struct RieszIntegral {
  double value = 0.0;
  double stderr_ = 0.0;
  double spatial = 0.0, spatial_stderr = 0.0;
  double temporal = 0.0, temporal_stderr = 0.0;
  long n_samples = 0;
};

enum class IntegralMethod { importance, uniform };

// ∫_{𝕋(1)²}∫_{K²} |t-s|^{-2α_T} ‖x-y‖^{-2α_S} dx dy dt ds by Monte Carlo; throws NumericalError when
// the stderr fails to shrink under sample doubling.
RieszIntegral riesz_double_integral(const ConvexBody& K, double alpha_s, double alpha_t, long n_samples,
                                    std::uint64_t seed, IntegralMethod method = IntegralMethod::importance);

// Frequency truncation and feature count of the spectral discretization. Each replicate draws L
// features from the truncated Riesz spectral measure; every feature carries its mirror -ξ.
struct SpectralGrid {
  int D = 2;
  int L = 128;
  double Lambda = 0.0;                // spatial cutoff |λ| <= Λ
  double Omega = 0.0;                 // temporal cutoff |ω| <= Ω
  double mass = 0.0;                  // total spectral mass inside the box
  double loss_spatial = 0.0;          // estimated discarded fraction of the squared integrand
  double loss_temporal = 0.0;
  double alpha_s = 0.3, alpha_t = 0.25;
  // Features are drawn with radial density ∝ r^{τα_S-1} and |ω|^{τα_T-1}; the node cells absorb
  // the ratio to the spectral density. τ = 1 samples the spectral measure itself.
  double tau = 1.0;
  struct Nodes {
    std::vector<double> xi;           // 2L nodes, D + 1 components each; node 2l+1 = -node 2l
    std::vector<double> cell;         // spectral mass per node (E|W|²)
    std::vector<int> mirror;          // mirror[a] = index of -ξ_a
  };
  Nodes draw(Stream& rs) const;
};

// Cutoffs chosen so each factor's discarded squared-integrand mass is below `loss` (ridge asymptotics).
SpectralGrid make_spectral_grid(const ConvexBody& K, const ModelParams& p, int L = 128, double loss = 4e-3,
                                double tau = 0.5);

struct ConvexSamples {
  std::vector<double> values;
  double max_imag = 0.0;              // largest |Im| before taking the real part
};

// Replicates of S_∞ on K × 𝕋(1): Hermitian complex noise on the nodes, quadratic form over node
// pairs that are neither equal nor mirrored, normalized so Var = 2 V_R (V_R the truncated integral).
ConvexSamples sample_convex_limit(const ConvexBody& K, const ModelParams& p, const SpectralGrid& grid, long n_samples,
                                  std::uint64_t seed, int threads = 1);

const char* body_name(BodyKind k);
BodyKind body_from_name(const std::string& s);

}  // namespace strf

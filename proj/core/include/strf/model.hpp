#pragma once

#include <memory>
#include <string>
#include <vector>

namespace strf {

enum class Svf { constant, log };
enum class Mode { sphere, convex };

struct ModelParams {
  int d = 2;
  double gamma = 1.0;
  double alpha_s = 0.3;
  double alpha_t = 0.25;
  Svf svf = Svf::constant;
  double rho_s = 2.0;
  double rho_t = 2.0;
};

// Throws ValidationError when the parameters violate the mode's ranges.
void validate(const ModelParams& p, Mode mode);

// Riesz Fourier constant: |x|^{-α} = c ∫_{R^D} e^{i<λ,x>} |λ|^{-(D-α)} dλ.
double riesz_fourier_constant(double alpha, int D);

// Normalizers of the spatial (dimension d+1) and temporal factors, each of unit mass.
double spatial_norm(const ModelParams& p);
double temporal_norm(const ModelParams& p);

// f(|λ|, ω) = c_S |λ|^{α_S-D}(1+|λ|²)^{-ρ_S} · c_T |ω|^{α_T-1}(1+ω²)^{-ρ_T}, D = d+1.
double spectral_density(const ModelParams& p, double lam, double om);

// Covariance tail amplitudes: C_S(r) ~ ℓ_S r^{-α_S}, C_T(τ) ~ ℓ_T |τ|^{-α_T}.
double tail_amplitude_spatial(const ModelParams& p);
double tail_amplitude_temporal(const ModelParams& p);
// ℓ_T, times ℓ_S when γ > 0: the constant that turns d_T into the exact variance scaling.
double tail_amplitude(const ModelParams& p);

// ℒ(u) = 1 (constant) or (1 + log(1+u))^{1/100} (log).
double slowly_varying(Svf tag, double u);

// Power-law scaling d_T of the chosen mode.
double scaling_d_T(const ModelParams& p, Mode mode, double T);

// Isotropic covariance in dimension D for the density |λ|^{α-D}(1+|λ|²)^{-ρ}, unit variance.
double radial_covariance(double alpha, double rho, int D, double r);

// Cached piecewise-Chebyshev interpolant of radial_covariance on [0, r_max].
class RadialProfile {
 public:
  RadialProfile(double alpha, double rho, int D, double r_max);
  double operator()(double r) const;
  double r_max() const { return r_max_; }

 private:
  double alpha_, rho_, r_max_;
  int D_;
  std::vector<double> edges_;
  std::vector<std::vector<double>> cheb_;  // coefficients per panel
};

double covariance_spatial(const ModelParams& p, double r);
double covariance_temporal(const ModelParams& p, double tau);
double covariance(const ModelParams& p, double r, double tau);

std::string to_json(const ModelParams& p);
// Reads the keys d, gamma, alpha_s, alpha_t, svf, rho_s, rho_t; missing keys keep defaults.
ModelParams model_from_json(const std::string& text);

const char* svf_name(Svf s);
Svf svf_from_name(const std::string& s);

}  // namespace strf

#include "strf/model.hpp"

#include <cmath>
#include <json.hpp>
#include <numbers>

#include "strf/error.hpp"
#include "strf/specfun.hpp"

namespace strf {

namespace {

constexpr int kChebPoints = 20;

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

std::vector<double> cheb_fit(double a, double b, double alpha, double rho, int D) {
  const int n = kChebPoints;
  std::vector<double> f(n), c(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double t = std::cos(std::numbers::pi * (j + 0.5) / n);
    f[j] = radial_covariance(alpha, rho, D, 0.5 * (a + b) + 0.5 * (b - a) * t);
  }
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += f[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
    c[k] = 2.0 * s / n;
  }
  c[0] *= 0.5;
  return c;
}

}  // namespace

void validate(const ModelParams& p, Mode mode) {
  if (p.d < 1) throw ValidationError("d must be >= 1");
  if (!(p.gamma >= 0.0)) throw ValidationError("gamma must be >= 0");
  if (!(p.alpha_t > 0.0 && p.alpha_t < 0.5)) throw ValidationError("alpha_t must lie in (0, 1/2)");
  const double hi = mode == Mode::sphere ? 0.5 * p.d : 0.5 * (p.d + 1);
  if (!(p.alpha_s > 0.0 && p.alpha_s < hi))
    throw ValidationError(std::string("alpha_s must lie in (0, ") + (mode == Mode::sphere ? "d/2" : "(d+1)/2") + ")");
  // integrability of (1+|λ|²)^{-ρ} |λ|^{α-D} at infinity
  if (!(p.rho_s > 0.5 * p.alpha_s)) throw ValidationError("rho_s must exceed alpha_s/2");
  if (!(p.rho_t > 0.5 * p.alpha_t)) throw ValidationError("rho_t must exceed alpha_t/2");
}

double riesz_fourier_constant(double alpha, int D) {
  if (!(alpha > 0.0 && alpha < D)) throw ValidationError("riesz_fourier_constant: need 0 < alpha < D");
  return std::tgamma(0.5 * (D - alpha)) / (std::pow(2.0, alpha) * std::pow(std::numbers::pi, 0.5 * D) *
                                           std::tgamma(0.5 * alpha));
}

double spatial_norm(const ModelParams& p) {
  const int D = p.d + 1;
  return 2.0 / (sphere_area(D - 1) * beta_fn(0.5 * p.alpha_s, p.rho_s - 0.5 * p.alpha_s));
}

double temporal_norm(const ModelParams& p) {
  return 1.0 / beta_fn(0.5 * p.alpha_t, p.rho_t - 0.5 * p.alpha_t);
}

double spectral_density(const ModelParams& p, double lam, double om) {
  if (lam == 0.0 || om == 0.0) throw ValidationError("spectral_density: singular at zero frequency");
  lam = std::abs(lam);
  om = std::abs(om);
  const int D = p.d + 1;
  const double fs = spatial_norm(p) * std::pow(lam, p.alpha_s - D) * std::pow(1.0 + lam * lam, -p.rho_s);
  const double ft = temporal_norm(p) * std::pow(om, p.alpha_t - 1.0) * std::pow(1.0 + om * om, -p.rho_t);
  return fs * ft;
}

double tail_amplitude_spatial(const ModelParams& p) {
  return spatial_norm(p) / riesz_fourier_constant(p.alpha_s, p.d + 1);
}

double tail_amplitude_temporal(const ModelParams& p) {
  return temporal_norm(p) / riesz_fourier_constant(p.alpha_t, 1);
}

double tail_amplitude(const ModelParams& p) {
  const double lt = tail_amplitude_temporal(p);
  return p.gamma > 0.0 ? lt * tail_amplitude_spatial(p) : lt;
}

double slowly_varying(Svf tag, double u) {
  if (!(u > 0.0)) throw ValidationError("slowly_varying: argument must be positive");
  // weak logarithmic factor: ℒ(2u)/ℒ(u) - 1 ≈ 0.01 log 2/(1 + log u)
  return tag == Svf::constant ? 1.0 : std::pow(1.0 + std::log1p(u), 0.01);
}

double scaling_d_T(const ModelParams& p, Mode mode, double T) {
  if (!(T >= 1.0)) throw ValidationError("scaling_d_T: T must be >= 1");
  const double Tg = std::pow(T, p.gamma);
  // γ = 0 freezes the spatial domain, so only the temporal factor carries ℒ
  const double L = slowly_varying(p.svf, T) * (p.gamma > 0.0 ? slowly_varying(p.svf, Tg) : 1.0);
  const double space_dim = mode == Mode::sphere ? p.d : p.d + 1;
  return std::pow(Tg, space_dim - p.alpha_s) * std::pow(T, 1.0 - p.alpha_t) * L;
}

double radial_covariance(double alpha, double rho, int D, double r) {
  // C(r) = Γ(ρ-α/2)^{-1} ∫_0^∞ s^{ρ-α/2-1} e^{-s} M(α/2; D/2; -r²/(4s)) ds, trapezoid in log s
  if (!(D >= 1) || !(alpha > 0.0 && alpha < D) || !(rho > 0.5 * alpha))
    throw ValidationError("radial_covariance: invalid parameters");
  r = std::abs(r);
  const double a = 0.5 * alpha, b = 0.5 * D, e = rho - a;
  const double h = 0.1;
  const double ylo = -42.0 / e, yhi = 4.4;
  double sum = 0.0;
  const double q = 0.25 * r * r;
  for (double y = ylo; y <= yhi; y += h) {
    const double s = std::exp(y);
    const double m = q > 0.0 ? kummer_m_negative(a, b, q / s) : 1.0;
    sum += std::exp(e * y - s) * m;
  }
  return sum * h / std::tgamma(e);
}

RadialProfile::RadialProfile(double alpha, double rho, int D, double r_max)
    : alpha_(alpha), rho_(rho), r_max_(r_max), D_(D) {
  if (!(r_max > 0.0)) throw ValidationError("RadialProfile: r_max must be positive");
  double lo = 1e-5;
  edges_.push_back(0.0);
  edges_.push_back(lo);
  while (edges_.back() < r_max) edges_.push_back(edges_.back() * 2.0);
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
    cheb_.push_back(cheb_fit(edges_[i], edges_[i + 1], alpha_, rho_, D_));
}

double RadialProfile::operator()(double r) const {
  r = std::abs(r);
  if (r > edges_.back()) return radial_covariance(alpha_, rho_, D_, r);
  std::size_t i = 0;
  if (r >= edges_[1]) i = std::min<std::size_t>(static_cast<std::size_t>(std::floor(std::log2(r / edges_[1]))) + 1,
                                                 cheb_.size() - 1);
  while (i > 0 && r < edges_[i]) --i;
  while (i + 1 < cheb_.size() && r > edges_[i + 1]) ++i;
  const double a = edges_[i], b = edges_[i + 1];
  const double t = (2.0 * r - a - b) / (b - a);
  const auto& c = cheb_[i];
  double b1 = 0.0, b2 = 0.0;
  for (int k = kChebPoints - 1; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

double covariance_spatial(const ModelParams& p, double r) {
  return radial_covariance(p.alpha_s, p.rho_s, p.d + 1, r);
}

double covariance_temporal(const ModelParams& p, double tau) {
  return radial_covariance(p.alpha_t, p.rho_t, 1, tau);
}

double covariance(const ModelParams& p, double r, double tau) {
  return covariance_spatial(p, r) * covariance_temporal(p, tau);
}

const char* svf_name(Svf s) { return s == Svf::constant ? "constant" : "log"; }

Svf svf_from_name(const std::string& s) {
  if (s == "constant") return Svf::constant;
  if (s == "log") return Svf::log;
  throw ValidationError("svf must be 'constant' or 'log'");
}

std::string to_json(const ModelParams& p) {
  nlohmann::ordered_json j;
  j["d"] = p.d;
  j["gamma"] = p.gamma;
  j["alpha_s"] = p.alpha_s;
  j["alpha_t"] = p.alpha_t;
  j["svf"] = svf_name(p.svf);
  j["rho_s"] = p.rho_s;
  j["rho_t"] = p.rho_t;
  return j.dump(2);
}

ModelParams model_from_json(const std::string& text) {
  ModelParams p;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("model config: ") + e.what());
  }
  try {
    if (j.contains("d")) p.d = j.at("d").get<int>();
    if (j.contains("gamma")) p.gamma = j.at("gamma").get<double>();
    if (j.contains("alpha_s")) p.alpha_s = j.at("alpha_s").get<double>();
    if (j.contains("alpha_t")) p.alpha_t = j.at("alpha_t").get<double>();
    if (j.contains("svf")) p.svf = svf_from_name(j.at("svf").get<std::string>());
    if (j.contains("rho_s")) p.rho_s = j.at("rho_s").get<double>();
    if (j.contains("rho_t")) p.rho_t = j.at("rho_t").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model config: ") + e.what());
  }
  return p;
}

}  // namespace strf

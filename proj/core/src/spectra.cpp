#include "strf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "strf/besselint.hpp"
#include "strf/csv.hpp"
#include "strf/error.hpp"
#include "strf/quadrature.hpp"
#include "strf/specfun.hpp"

namespace strf {

namespace {

constexpr double kPi = std::numbers::pi;

void check_finite(const std::vector<double>& v, const char* what) {
  for (std::size_t n = 0; n < v.size(); ++n)
    if (!std::isfinite(v[n])) throw NumericalError(std::string(what) + ": quadrature failed at n = " + std::to_string(n));
}

std::vector<long long> dims_for(int d, int N_max) {
  std::vector<long long> out(N_max + 1);
  for (int n = 0; n <= N_max; ++n) out[n] = eigenspace_dim(n, d);
  return out;
}

// Solves the generalized problem A x = λ G x block by block; returns all eigenvalues descending.
std::vector<double> parity_generalized_eigs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& G) {
  const int N = static_cast<int>(A.rows());
  std::vector<double> out;
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<int> idx;
    for (int n = parity; n < N; n += 2) idx.push_back(n);
    const int m = static_cast<int>(idx.size());
    if (m == 0) continue;
    Eigen::MatrixXd a(m, m), g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        a(i, j) = A(idx[i], idx[j]);
        g(i, j) = G(idx[i], idx[j]);
      }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, g, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("generalized eigensolver did not converge");
    for (int i = 0; i < m; ++i) out.push_back(es.eigenvalues()[i]);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Galerkin eigenvalues of k(u) = c_R ∫ e^{iωu}|ω|^{α-1}(1+ω²/T²)^{-ρ} dω on [-1, 1];
// T = inf gives |u|^{-α}.
std::vector<double> galerkin_temporal(double alpha, double rho, double T, int N) {
  if (N < 4) throw ValidationError("temporal Galerkin: basis size must be >= 4");
  const double lam = alpha / 2.0;
  std::vector<double> s(N), kappa(N), mu(N);
  for (int n = 0; n < N; ++n) {
    const double log_h = std::log(kPi) + (1.0 - alpha) * std::log(2.0) + std::lgamma(n + alpha) - std::lgamma(n + 1.0) -
                         std::log(n + lam) - 2.0 * std::lgamma(lam);
    s[n] = std::exp(-0.5 * log_h);
    kappa[n] = std::exp(std::log(kPi) + (1.0 - lam) * std::log(2.0) + std::lgamma(n + 2.0 * lam) - std::lgamma(n + 1.0) -
                        std::lgamma(lam));
    mu[n] = kPi * std::exp(std::lgamma(n + alpha) - std::lgamma(alpha) - std::lgamma(n + 1.0)) / std::cos(kPi * alpha / 2.0);
  }
  // mass matrix of the normalized weighted Gegenbauer functions
  const Rule q = gauss_jacobi(N + 10, alpha - 1.0, alpha - 1.0);
  Eigen::MatrixXd P(q.size(), N);
  for (int i = 0; i < q.size(); ++i) {
    const double x = q.x[i];
    double c0 = 1.0, c1 = 2.0 * lam * x;
    P(i, 0) = s[0] * c0 * std::sqrt(q.w[i]);
    if (N > 1) P(i, 1) = s[1] * c1 * std::sqrt(q.w[i]);
    for (int n = 2; n < N; ++n) {
      const double c2 = (2.0 * (n + lam - 1.0) * x * c1 - (n + 2.0 * lam - 2.0) * c0) / n;
      P(i, n) = s[n] * c2 * std::sqrt(q.w[i]);
      c0 = c1;
      c1 = c2;
    }
  }
  const Eigen::MatrixXd G = P.transpose() * P;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  if (std::isinf(T)) {
    for (int n = 0; n < N; ++n) A(n, n) = mu[n];
  } else {
    BesselIntegralOptions opt;
    opt.zero_power = -1.0;
    const Eigen::MatrixXd M = bessel_product_integrals(
        lam, N, [&](double w) { return std::pow(1.0 + w * w / (T * T), -rho) / w; }, opt);
    const double cR = riesz_fourier_constant(alpha, 1);
    for (int m = 0; m < N; ++m)
      for (int n = m % 2; n < N; n += 2) {
        const double sign = ((std::abs(m - n) / 2) % 2) ? -1.0 : 1.0;
        A(m, n) = 2.0 * cR * s[m] * s[n] * kappa[m] * kappa[n] * sign * M(m, n);
      }
  }
  auto ev = parity_generalized_eigs(A, G);
  for (double v : ev)
    if (!std::isfinite(v)) throw NumericalError("temporal Galerkin produced a non-finite eigenvalue");
  return ev;
}

PowerTail fit_window(const std::vector<double>& all, long first_index, long lo, long hi, double p) {
  std::vector<double> k, v;
  for (long i = lo; i <= hi; ++i) {
    k.push_back(static_cast<double>(i));
    v.push_back(all[i - first_index]);
  }
  return fit_power_tail(k, v, p);
}

// Splits a computed sequence into retained values, extra explicit values and a tail model.
EigenSequence make_sequence(const std::vector<double>& all, long first_index, int retained, double p, int d) {
  const long last = first_index + static_cast<long>(all.size()) - 1;
  if (retained > static_cast<int>(all.size()) / 2)
    throw ValidationError("retained range must be at most half of the computed range");
  EigenSequence out;
  out.first_index = first_index;
  out.values.assign(all.begin(), all.begin() + retained);
  if (d > 0)
    for (int i = 0; i < retained; ++i) out.dims.push_back(eigenspace_dim(static_cast<int>(first_index) + i, d));
  SpectrumTail& t = out.tail;
  t.d = d;
  t.extra_start = first_index + retained;
  t.extra.assign(all.begin() + retained, all.end());
  const long span = last - first_index + 1;
  t.model = fit_window(all, first_index, last - span / 2, last, p);
  t.model_alt = fit_window(all, first_index, last - 3 * span / 4, last - span / 4, p);
  t.model_start = last + 1;
  return out;
}

double multiplicity(int d, double x) { return d > 0 ? eigenspace_dim_real(x, d) : 1.0; }

}  // namespace

double eigenspace_dim_real(double x, int d) {
  if (d == 1) return x < 0.5 ? 1.0 : 2.0;
  // Γ(x+d-1)/Γ(x+1) as a finite product; lgamma differences cancel badly for large x
  double r = 1.0;
  for (int j = 1; j <= d - 2; ++j) r *= (x + j) / j;
  return (2.0 * x + d - 1.0) * r / (d - 1.0);
}

AngularSpectrum angular_coeffs(const ModelParams& p, double T_gamma, int N_max) {
  validate(p, Mode::sphere);
  if (N_max < 0) throw ValidationError("angular_coeffs: N_max must be >= 0");
  if (!(T_gamma > 0.0)) throw ValidationError("angular_coeffs: T^gamma must be positive");
  const int d = p.d, D = d + 1;
  const double a = p.alpha_s, R = T_gamma;
  BesselIntegralOptions opt;
  opt.zero_power = a - d;
  opt.diagonal_only = true;
  const Eigen::MatrixXd M = bessel_product_integrals(
      (d - 1) / 2.0, N_max + 1,
      [&](double u) { return std::pow(u, a - d) * std::pow(1.0 + u * u / (R * R), -p.rho_s); }, opt);
  AngularSpectrum out;
  out.d = d;
  out.T_gamma = R;
  out.method = "bessel";
  const double pref = std::pow(2.0 * kPi, D) * spatial_norm(p) * std::pow(R, d - a);
  for (int n = 0; n <= N_max; ++n) out.coeffs.push_back(std::max(0.0, pref * M(n, n)));
  check_finite(out.coeffs, "angular_coeffs");
  out.dims = dims_for(d, N_max);
  return out;
}

AngularSpectrum angular_coeffs_funk_hecke(int d, double R, int N_max, const std::function<double(double)>& cov,
                                          int n_quad) {
  if (d < 1 || N_max < 0 || !(R > 0.0)) throw ValidationError("angular_coeffs_funk_hecke: bad arguments");
  if (n_quad <= 0) n_quad = static_cast<int>(std::min(20000.0, 200.0 + 2.0 * N_max + 40.0 * R));
  const double w = (d - 2) / 2.0;
  const Rule q = gauss_jacobi(n_quad, w, w);
  std::vector<double> acc(N_max + 1, 0.0);
  for (int i = 0; i < q.size(); ++i) {
    const double c = cov(R * std::sqrt(std::max(0.0, 2.0 - 2.0 * q.x[i])));
    const auto P = gegenbauer_normalized_all(N_max, d, q.x[i]);
    for (int n = 0; n <= N_max; ++n) acc[n] += q.w[i] * c * P[n];
  }
  AngularSpectrum out;
  out.d = d;
  out.T_gamma = R;
  out.method = "funk_hecke";
  const double pref = std::pow(R, d) * sphere_area(d - 1);
  for (double v : acc) out.coeffs.push_back(pref * v);
  check_finite(out.coeffs, "angular_coeffs_funk_hecke");
  out.dims = dims_for(d, N_max);
  return out;
}

AngularSpectrum angular_coeffs_funk_hecke(const ModelParams& p, double T_gamma, int N_max) {
  validate(p, Mode::sphere);
  const RadialProfile prof(p.alpha_s, p.rho_s, p.d + 1, 2.0 * T_gamma);
  auto out = angular_coeffs_funk_hecke(p.d, T_gamma, N_max, [&](double r) { return prof(r); });
  for (double& c : out.coeffs) c = std::max(0.0, c);
  return out;
}

TemporalEigensystem nystrom_eigs(const std::function<double(double)>& kernel, double T, int K_max, int n_nodes) {
  if (!(T > 0.0) || n_nodes < 2 || K_max < 1) throw ValidationError("nystrom_eigs: bad arguments");
  K_max = std::min(K_max, n_nodes);
  const Rule g = gauss_legendre(n_nodes, -T, T);
  const int n = g.size();
  Eigen::VectorXd sw(n);
  for (int i = 0; i < n; ++i) sw[i] = std::sqrt(g.w[i]);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double k = kernel(g.x[i] - g.x[j]);
      if (!std::isfinite(k)) throw NumericalError("nystrom_eigs: kernel evaluation failed");
      M(i, j) = M(j, i) = sw[i] * k * sw[j];
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw NumericalError("nystrom_eigs: eigensolver did not converge");
  TemporalEigensystem out;
  out.T = T;
  out.method = "nystrom";
  out.nodes = g.x;
  out.weights = g.w;
  out.eigenvectors.resize(n, K_max);
  const double top = es.eigenvalues()[n - 1];
  for (int k = 0; k < K_max; ++k) {
    double v = es.eigenvalues()[n - 1 - k];
    if (v < 0.0) {
      if (v < -1e-8 * std::max(1.0, std::abs(top))) throw NumericalError("nystrom_eigs: kernel is not positive semidefinite");
      if (v > -1e-10 * std::max(1.0, std::abs(top))) {
        v = 0.0;
        ++out.clamped;
      }
    }
    out.eigenvalues.push_back(v);
    const Eigen::VectorXd vec = es.eigenvectors().col(n - 1 - k);
    // fixed sign: largest-magnitude component positive
    Eigen::Index imax;
    vec.cwiseAbs().maxCoeff(&imax);
    const double sg = vec[imax] < 0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = sg * vec[i] / sw[i];
  }
  return out;
}

TemporalEigensystem temporal_eigs(const ModelParams& p, int n, double T, int K_max, int n_nodes, TemporalMethod method) {
  validate(p, Mode::sphere);
  if (n < 0) throw ValidationError("temporal_eigs: degree must be >= 0");
  if (!(T > 0.0)) throw ValidationError("temporal_eigs: T must be positive");
  if (method == TemporalMethod::automatic) method = T <= 100.0 ? TemporalMethod::nystrom : TemporalMethod::spectral;
  if (method == TemporalMethod::nystrom) {
    const RadialProfile prof(p.alpha_t, p.rho_t, 1, 2.0 * T);
    return nystrom_eigs([&](double tau) { return prof(std::abs(tau)); }, T, K_max, n_nodes);
  }
  TemporalEigensystem out;
  out.T = T;
  out.method = "spectral";
  const double scale = tail_amplitude_temporal(p) * std::pow(T, 1.0 - p.alpha_t);
  for (double b : scaled_temporal_eigs(p, T, K_max, n_nodes)) out.eigenvalues.push_back(scale * b);
  return out;
}

std::vector<double> scaled_temporal_eigs(const ModelParams& p, double T, int K_max, int n_basis) {
  if (!(p.alpha_t > 0.0 && p.alpha_t < 1.0)) throw ValidationError("scaled_temporal_eigs: alpha_t out of range");
  if (K_max < 1 || K_max > n_basis) throw ValidationError("scaled_temporal_eigs: need 1 <= K_max <= basis size");
  auto ev = galerkin_temporal(p.alpha_t, p.rho_t, T, n_basis);
  ev.resize(K_max);
  return ev;
}

double SpectrumTail::sum(int m) const {
  double s = 0.0;
  for (std::size_t i = 0; i < extra.size(); ++i)
    s += multiplicity(d, static_cast<double>(extra_start + static_cast<long>(i))) * std::pow(extra[i], m);
  const int dd = d;
  return s + power_tail_sum(model, m, model_start, [dd](double x) { return multiplicity(dd, x); });
}

double SpectrumTail::uncertainty(int m) const {
  const int dd = d;
  auto w = [dd](double x) { return multiplicity(dd, x); };
  return std::abs(power_tail_sum(model, m, model_start, w) - power_tail_sum(model_alt, m, model_start, w));
}

double EigenSequence::power_sum(int m, bool with_tail) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    s += (dims.empty() ? 1.0 : static_cast<double>(dims[i])) * std::pow(values[i], m);
  return with_tail ? s + tail.sum(m) : s;
}

EigenSequence riesz_spatial_eigs(double alpha_s, int d, int N_max, int N_fit) {
  if (d < 1) throw ValidationError("riesz_spatial_eigs: d must be >= 1");
  if (!(alpha_s > 0.0 && alpha_s < d / 2.0)) throw ValidationError("riesz_spatial_eigs: need 0 < alpha_s < d/2");
  if (N_max < 0) throw ValidationError("riesz_spatial_eigs: N_max must be >= 0");
  if (N_fit <= 0) N_fit = std::max(4 * N_max, 400);
  N_fit = std::max(N_fit, 2 * N_max + 8);
  // weight (1-t)^{-α/2} (1-t²)^{(d-2)/2} absorbed into the rule
  const Rule q = gauss_jacobi(N_fit / 2 + 24, (d - 2 - alpha_s) / 2.0, (d - 2) / 2.0);
  std::vector<double> all(N_fit + 1, 0.0);
  for (int i = 0; i < q.size(); ++i) {
    const auto P = gegenbauer_normalized_all(N_fit, d, q.x[i]);
    for (int n = 0; n <= N_fit; ++n) all[n] += q.w[i] * P[n];
  }
  const double pref = sphere_area(d - 1) * std::pow(2.0, -alpha_s / 2.0);
  for (double& v : all) v *= pref;
  check_finite(all, "riesz_spatial_eigs");
  return make_sequence(all, 0, N_max + 1, d - alpha_s, d);
}

EigenSequence riesz_temporal_eigs(double alpha_t, int K_max, int n_nodes) {
  if (!(alpha_t > 0.0 && alpha_t < 0.5)) throw ValidationError("riesz_temporal_eigs: need 0 < alpha_t < 1/2");
  if (K_max < 1 || 2 * K_max > n_nodes / 2) throw ValidationError("riesz_temporal_eigs: need 4 K_max <= n_nodes");
  auto all = galerkin_temporal(alpha_t, 0.0, std::numeric_limits<double>::infinity(), n_nodes);
  all.resize(n_nodes / 2);  // upper half of the Galerkin spectrum is not converged
  return make_sequence(all, 1, K_max, 1.0 - alpha_t, 0);
}

std::vector<double> riesz_temporal_eigs_product(double alpha_t, int K_max, int n_nodes) {
  if (!(alpha_t > 0.0 && alpha_t < 1.0)) throw ValidationError("riesz_temporal_eigs_product: alpha_t out of range");
  if (n_nodes < 3 || K_max < 1 || K_max > n_nodes) throw ValidationError("riesz_temporal_eigs_product: bad sizes");
  const double a = alpha_t, h = 2.0 / (n_nodes - 1);
  // ∫_{lo}^{hi} |u|^{-a} (c0 + c1 u) du via antiderivatives of |u|^{-a} and u|u|^{-a}
  auto I0 = [a](double x) { return (x < 0 ? -1.0 : 1.0) * std::pow(std::abs(x), 1.0 - a) / (1.0 - a); };
  auto I1 = [a](double x) { return std::pow(std::abs(x), 2.0 - a) / (2.0 - a); };
  std::vector<double> t(n_nodes);
  for (int j = 0; j < n_nodes; ++j) t[j] = -1.0 + j * h;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    for (int c = 0; c + 1 < n_nodes; ++c) {
      // cell [t_c, t_{c+1}], u = s - t_i; hats φ_c = (t_{c+1} - s)/h and φ_{c+1} = (s - t_c)/h
      const double lo = t[c] - t[i], hi = t[c + 1] - t[i];
      const double J0 = I0(hi) - I0(lo), J1 = I1(hi) - I1(lo);
      W(i, c) += ((t[c + 1] - t[i]) * J0 - J1) / h;
      W(i, c + 1) += (J1 - (t[c] - t[i]) * J0) / h;
    }
  Eigen::EigenSolver<Eigen::MatrixXd> es(W, false);
  if (es.info() != Eigen::Success) throw NumericalError("riesz_temporal_eigs_product: eigensolver did not converge");
  std::vector<double> ev;
  for (int i = 0; i < n_nodes; ++i) ev.push_back(es.eigenvalues()[i].real());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  ev.resize(K_max);
  return ev;
}

RieszSpectrum riesz_spectrum(const ModelParams& p, int N_max, int K_max) {
  validate(p, Mode::sphere);
  RieszSpectrum s;
  s.d = p.d;
  s.alpha_s = p.alpha_s;
  s.alpha_t = p.alpha_t;
  if (p.gamma > 0.0) {
    s.spatial = riesz_spatial_eigs(p.alpha_s, p.d, N_max);
  } else {
    // fixed sphere: the spatial factor keeps the model's own angular spectrum
    const int N_fit = std::max(4 * N_max, 40);
    const auto a = angular_coeffs(p, 1.0, N_fit);
    s.spatial = make_sequence(a.coeffs, 0, N_max + 1, p.d + 2.0 * p.rho_s - p.alpha_s, p.d);
  }
  s.temporal = riesz_temporal_eigs(p.alpha_t, K_max, std::max(400, 8 * K_max));
  return s;
}

TracePower trace_power(const RieszSpectrum& s, int m) {
  if (m < 2)
    throw ValidationError("trace_power: m must be >= 2; the limit operator is Hilbert-Schmidt but not trace class, so m = 1 diverges");
  const double st = s.spatial.power_sum(m, false), tt = s.temporal.power_sum(m, false);
  const double sx = s.spatial.tail.sum(m), tx = s.temporal.tail.sum(m);
  TracePower out;
  out.truncated = st * tt;
  out.value = (st + sx) * (tt + tx);
  out.tail = out.value - out.truncated;
  out.tail_bound = s.spatial.tail.uncertainty(m) * (tt + tx) + s.temporal.tail.uncertainty(m) * (st + sx);
  return out;
}

std::string angular_csv(const AngularSpectrum& a) {
  CsvTable t({"n", "Gamma", "B_n"});
  for (std::size_t n = 0; n < a.coeffs.size(); ++n)
    t.add({fmt(static_cast<long long>(n)), fmt(a.dims[n]), fmt(a.coeffs[n])});
  return t.str();
}

std::string temporal_csv(const std::vector<double>& eigenvalues, long first_index) {
  CsvTable t({"k", "B_k"});
  for (std::size_t k = 0; k < eigenvalues.size(); ++k)
    t.add({fmt(static_cast<long long>(first_index + static_cast<long>(k))), fmt(eigenvalues[k])});
  return t.str();
}

}  // namespace strf

#include "strf/fieldsim.hpp"

#include <cmath>
#include <numbers>

#include "strf/error.hpp"
#include "strf/quadrature.hpp"
#include "strf/rng.hpp"

namespace strf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kFieldTag = 0x4b4c;

void check_truncation(const KLSample& s, std::size_t n_spatial, std::size_t n_temporal) {
  if (n_spatial < static_cast<std::size_t>(s.N_max + 1) || n_temporal < static_cast<std::size_t>(s.K_max))
    throw ValidationError("fieldsim: spectra shorter than the sample truncation");
}

}  // namespace

KLSample sample_field(int d, int N_max, int K_max, double T, double gamma, std::uint64_t seed, std::uint64_t replicate) {
  if (d < 1 || N_max < 0 || K_max < 1) throw ValidationError("sample_field: bad truncation");
  KLSample s;
  s.d = d;
  s.N_max = N_max;
  s.K_max = K_max;
  s.T = T;
  s.gamma = gamma;
  s.seed = seed;
  s.replicate = replicate;
  long long off = 0;
  for (int n = 0; n <= N_max; ++n) {
    s.dims.push_back(eigenspace_dim(n, d));
    s.offsets.push_back(off);
    off += s.dims.back() * K_max;
  }
  const Stream st(seed, replicate, kFieldTag);
  s.eta.resize(off);
  for (long long i = 0; i < off; ++i) s.eta[i] = st.normal_at(static_cast<std::uint64_t>(i));
  return s;
}

KLSample sample_field(const AngularSpectrum& ang, const TemporalEigensystem& temps, double gamma, std::uint64_t seed,
                      std::uint64_t replicate) {
  if (ang.coeffs.empty() || temps.eigenvalues.empty()) throw ValidationError("sample_field: empty spectra");
  return sample_field(ang.d, static_cast<int>(ang.coeffs.size()) - 1, static_cast<int>(temps.eigenvalues.size()),
                      temps.T, gamma, seed, replicate);
}

FunctionalResult functional_S_T(const KLSample& s, const std::vector<double>& spatial, const std::vector<double>& temporal,
                                double d_T) {
  check_truncation(s, spatial.size(), temporal.size());
  if (!(d_T > 0.0)) throw ValidationError("functional_S_T: d_T must be positive");
  double acc = 0.0;
  for (int n = 0; n <= s.N_max; ++n)
    for (int k = 0; k < s.K_max; ++k) {
      double q = 0.0;
      for (long long j = 0; j < s.dims[n]; ++j) {
        const double e = s.at(n, j, k);
        q += e * e - 1.0;
      }
      acc += spatial[n] * temporal[k] * q;
    }
  return {acc / d_T, "parseval", "S_T", s.T};
}

FunctionalResult functional_S_T(const KLSample& s, const AngularSpectrum& ang, const TemporalEigensystem& temps,
                                double d_T) {
  return functional_S_T(s, ang.coeffs, temps.eigenvalues, d_T);
}

std::vector<double> real_harmonics(int d, int N_max, const double* x) {
  std::vector<double> out;
  if (d == 1) {
    const double phi = std::atan2(x[1], x[0]);
    out.push_back(1.0 / std::sqrt(2.0 * kPi));
    for (int n = 1; n <= N_max; ++n) {
      out.push_back(std::cos(n * phi) / std::sqrt(kPi));
      out.push_back(std::sin(n * phi) / std::sqrt(kPi));
    }
    return out;
  }
  if (d != 2) throw ValidationError("real_harmonics: only d = 1 and d = 2 are supported");
  const double z = std::max(-1.0, std::min(1.0, x[2])), st = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = std::atan2(x[1], x[0]);
  // normalized associated Legendre p̄_n^m, fully normalized over the sphere for m = 0
  std::vector<std::vector<double>> P(N_max + 1, std::vector<double>(N_max + 1, 0.0));
  P[0][0] = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= N_max; ++m) P[m][m] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * P[m - 1][m - 1];
  for (int m = 0; m < N_max; ++m) P[m + 1][m] = std::sqrt(2.0 * m + 3.0) * z * P[m][m];
  for (int m = 0; m <= N_max; ++m)
    for (int n = m + 2; n <= N_max; ++n) {
      const double a = std::sqrt((4.0 * n * n - 1.0) / (static_cast<double>(n) * n - static_cast<double>(m) * m));
      const double b = std::sqrt(((n - 1.0) * (n - 1.0) - static_cast<double>(m) * m) / (4.0 * (n - 1.0) * (n - 1.0) - 1.0));
      P[n][m] = a * (z * P[n - 1][m] - b * P[n - 2][m]);
    }
  for (int n = 0; n <= N_max; ++n) {
    out.push_back(P[n][0]);
    for (int m = 1; m <= n; ++m) {
      out.push_back(std::sqrt(2.0) * P[n][m] * std::cos(m * phi));
      out.push_back(std::sqrt(2.0) * P[n][m] * std::sin(m * phi));
    }
  }
  return out;
}

FieldGrid make_grid(int d, double R, int n_lat, int n_lon, const TemporalEigensystem& temps) {
  if (d != 1 && d != 2) throw ValidationError("make_grid: only d = 1 and d = 2 are supported");
  if (n_lon < 1 || (d == 2 && n_lat < 1) || !(R > 0.0)) throw ValidationError("make_grid: bad grid size");
  if (temps.nodes.empty()) throw ValidationError("make_grid: temporal eigensystem carries no nodes (use the Nyström method)");
  FieldGrid g;
  g.d = d;
  g.R = R;
  g.t_nodes = temps.nodes;
  g.t_weights = temps.weights;
  const double dphi = 2.0 * kPi / n_lon;
  if (d == 1) {
    for (int i = 0; i < n_lon; ++i) {
      const double a = i * dphi;
      g.points.insert(g.points.end(), {std::cos(a), std::sin(a), 0.0});
      g.weights.push_back(R * dphi);
    }
    return g;
  }
  const Rule q = gauss_legendre(n_lat);
  for (int i = 0; i < n_lat; ++i) {
    const double z = q.x[i], r = std::sqrt(1.0 - z * z);
    for (int j = 0; j < n_lon; ++j) {
      const double a = (j + 0.5) * dphi;
      g.points.insert(g.points.end(), {r * std::cos(a), r * std::sin(a), z});
      g.weights.push_back(R * R * q.w[i] * dphi);
    }
  }
  return g;
}

Eigen::MatrixXd evaluate_field(const KLSample& s, const AngularSpectrum& ang, const TemporalEigensystem& temps,
                               const FieldGrid& g) {
  check_truncation(s, ang.coeffs.size(), temps.eigenvalues.size());
  if (g.d != s.d) throw ValidationError("evaluate_field: grid and sample dimensions differ");
  if (temps.eigenvectors.cols() < s.K_max || temps.eigenvectors.rows() != static_cast<Eigen::Index>(g.t_nodes.size()))
    throw ValidationError("evaluate_field: eigenvectors do not match the grid");
  long long H = 0;
  for (auto v : s.dims) H += v;
  const int P = g.n_points();
  // harmonics of S_d(R): R^{-d/2} Y(x/R)
  const double scale = std::pow(g.R, -s.d / 2.0);
  Eigen::MatrixXd Y(P, H);
  for (int p = 0; p < P; ++p) {
    const auto y = real_harmonics(s.d, s.N_max, &g.points[3 * p]);
    for (long long h = 0; h < H; ++h) Y(p, h) = scale * y[h];
  }
  Eigen::MatrixXd C(H, s.K_max);
  long long h = 0;
  for (int n = 0; n <= s.N_max; ++n)
    for (long long j = 0; j < s.dims[n]; ++j, ++h)
      for (int k = 0; k < s.K_max; ++k)
        C(h, k) = std::sqrt(std::max(0.0, ang.coeffs[n] * temps.eigenvalues[k])) * s.at(n, j, k);
  const Eigen::MatrixXd A = Y * C;
  return A * temps.eigenvectors.leftCols(s.K_max).transpose();
}

std::vector<double> pointwise_variance(const AngularSpectrum& ang, const TemporalEigensystem& temps, int N_max,
                                       int K_max) {
  double spatial = 0.0;
  for (int n = 0; n <= N_max; ++n) spatial += static_cast<double>(ang.dims[n]) * ang.coeffs[n];
  spatial /= sphere_area(ang.d, ang.T_gamma);
  std::vector<double> out(temps.nodes.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = 0.0;
    for (int k = 0; k < K_max; ++k) v += temps.eigenvalues[k] * temps.eigenvectors(i, k) * temps.eigenvectors(i, k);
    out[i] = spatial * v;
  }
  return out;
}

FunctionalResult functional_S_T_grid(const Eigen::MatrixXd& Z, const FieldGrid& g, const AngularSpectrum& ang,
                                     const TemporalEigensystem& temps, int K_max, double d_T) {
  if (Z.rows() != g.n_points() || Z.cols() != static_cast<Eigen::Index>(g.t_nodes.size()))
    throw ValidationError("functional_S_T_grid: field does not match the grid");
  const int N_max = static_cast<int>(ang.coeffs.size()) - 1;
  double integral = 0.0;
  for (Eigen::Index t = 0; t < Z.cols(); ++t) {
    double row = 0.0;
    for (Eigen::Index p = 0; p < Z.rows(); ++p) row += g.weights[p] * Z(p, t) * Z(p, t);
    integral += g.t_weights[t] * row;
  }
  double centering = 0.0;
  for (int n = 0; n <= N_max; ++n)
    for (int k = 0; k < K_max; ++k) centering += static_cast<double>(ang.dims[n]) * ang.coeffs[n] * temps.eigenvalues[k];
  return {(integral - centering) / d_T, "grid", "S_T", temps.T};
}

FunctionalResult functional_A_T(const Eigen::MatrixXd& Z, const FieldGrid& g, const AngularSpectrum& ang,
                                const TemporalEigensystem& temps, int K_max, const std::function<double(double)>& J,
                                const HermiteCoeffs& hc, double d_T) {
  if (!hc.hermite_rank || *hc.hermite_rank != 2)
    throw ValidationError("functional_A_T: the subordinator must have Hermite rank 2");
  if (Z.rows() != g.n_points() || Z.cols() != static_cast<Eigen::Index>(g.t_nodes.size()))
    throw ValidationError("functional_A_T: field does not match the grid");
  const int N_max = static_cast<int>(ang.coeffs.size()) - 1;
  const auto var = pointwise_variance(ang, temps, N_max, K_max);
  const Rule gh = gauss_hermite(80);
  double integral = 0.0;
  for (Eigen::Index t = 0; t < Z.cols(); ++t) {
    const double sd = std::sqrt(std::max(0.0, var[t]));
    double mean = 0.0;
    for (int i = 0; i < gh.size(); ++i) mean += gh.w[i] * J(sd * gh.x[i]);
    double row = 0.0;
    for (Eigen::Index p = 0; p < Z.rows(); ++p) row += g.weights[p] * (J(Z(p, t)) - mean);
    integral += g.t_weights[t] * row;
  }
  return {integral / d_T / (hc.coeffs[2] / 2.0), "grid", "A_T", temps.T};
}

double coupled_gap_exact(const std::vector<double>& spatial_T, const std::vector<double>& temporal_T,
                         const std::vector<double>& spatial_inf, const std::vector<double>& temporal_inf,
                         const std::vector<long long>& dims) {
  if (spatial_T.size() != spatial_inf.size() || temporal_T.size() != temporal_inf.size() || dims.size() < spatial_T.size())
    throw ValidationError("coupled_gap_exact: truncations differ");
  double s = 0.0;
  for (std::size_t n = 0; n < spatial_T.size(); ++n)
    for (std::size_t k = 0; k < temporal_T.size(); ++k) {
      const double dw = spatial_T[n] * temporal_T[k] - spatial_inf[n] * temporal_inf[k];
      s += static_cast<double>(dims[n]) * dw * dw;
    }
  return 2.0 * s;
}

}  // namespace strf

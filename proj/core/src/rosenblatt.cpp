#include "strf/rosenblatt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <thread>

#include "strf/csv.hpp"
#include "strf/error.hpp"
#include "strf/rng.hpp"
#include "strf/specfun.hpp"

namespace strf {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

double power_sum(const std::vector<double>& w, const std::vector<double>* mult, int m) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += (mult ? (*mult)[i] : 1.0) * std::pow(w[i], m);
  return s;
}

// ½ Σ_{m=2}^{M} (2iξ)^m c_m / m, stopping once a term drops below tol; returns the last term modulus.
cplx cumulant_series(const std::vector<double>& c, double xi, double tol, double* last = nullptr, int* used = nullptr) {
  cplx s = 0.0, z = cplx(0.0, 2.0 * xi), zm = z;
  double term_mod = 0.0;
  int m = 2;
  for (; m < static_cast<int>(c.size()); ++m) {
    zm = (m == 2) ? z * z : zm * z;
    const cplx term = 0.5 * zm * c[m] / static_cast<double>(m);
    s += term;
    term_mod = std::abs(term);
    if (term_mod < tol) break;
  }
  if (last) *last = term_mod;
  if (used) *used = std::min(m, static_cast<int>(c.size()) - 1);
  return s;
}

// Centered log CF of Σ mult·w (χ²_1 - 1) terms: Σ mult [-½ log(1 - 2iξw) - iξw].
cplx log_cf_product(const std::vector<double>& w, const std::vector<double>& mult, double xi, bool centered) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const cplx f = cplx(1.0, -2.0 * xi * w[i]);
    s += mult[i] * (-0.5 * std::log(f) - (centered ? cplx(0.0, xi * w[i]) : cplx(0.0)));
  }
  return s;
}

// Sampling |Δ| on a side of length L with density ∝ u^{-β}: returns u and the density value.
double draw_power(Stream& rs, double L, double beta) {
  return L * std::pow(rs.uniform(), 1.0 / (1.0 - beta));
}

// Temporal chain step from t on [-1, 1] with proposal ∝ |s - t|^{-β}; returns s and multiplies
// the weight by Z(t) |s - t|^{β} (the inverse proposal density without the kernel).
double temporal_step(Stream& rs, double t, double beta, double& weight) {
  const double left = 1.0 + t, right = 1.0 - t;
  const double ml = std::pow(left, 1.0 - beta), mr = std::pow(right, 1.0 - beta);
  const double Z = (ml + mr) / (1.0 - beta);
  double s;
  if (rs.uniform() * (ml + mr) < ml)
    s = t - draw_power(rs, left, beta);
  else
    s = t + draw_power(rs, right, beta);
  const double u = std::max(std::abs(s - t), 1e-300);
  weight *= Z * std::pow(u, beta);
  return s;
}

using Vec3 = std::array<double, 3>;

Vec3 uniform_sphere(Stream& rs, int d) {
  if (d == 1) {
    const double a = 2.0 * kPi * rs.uniform();
    return {std::cos(a), std::sin(a), 0.0};
  }
  const double z = 2.0 * rs.uniform() - 1.0, a = 2.0 * kPi * rs.uniform(), r = std::sqrt(1.0 - z * z);
  return {r * std::cos(a), r * std::sin(a), z};
}

double chord(const Vec3& x, const Vec3& y) {
  const double a = x[0] - y[0], b = x[1] - y[1], c = x[2] - y[2];
  return std::sqrt(a * a + b * b + c * c);
}

// Spatial chain step on S_d(1), d ∈ {1, 2}, proposal ∝ ‖x - y‖^{-β} (d = 2) or ∝ |angle|^{-β}
// (d = 1); multiplies weight by 1/q so that the kernel factor can be applied separately.
Vec3 spatial_step(Stream& rs, const Vec3& x, int d, double beta, double& weight) {
  if (d == 1) {
    const double mag = draw_power(rs, kPi, beta);
    const double delta = rs.uniform() < 0.5 ? -mag : mag;
    const double q = (1.0 - beta) * std::pow(std::max(mag, 1e-300), -beta) / (2.0 * std::pow(kPi, 1.0 - beta));
    weight /= q;
    const double c = std::cos(delta), s = std::sin(delta);
    return {c * x[0] - s * x[1], s * x[0] + c * x[1], 0.0};
  }
  // u = 1 - cos θ on [0, 2] with density ∝ u^{-β/2}; surface measure 2π dt
  const double b = beta / 2.0;
  const double u = draw_power(rs, 2.0, b);
  const double qu = (1.0 - b) * std::pow(std::max(u, 1e-300), -b) / std::pow(2.0, 1.0 - b);
  weight *= 2.0 * kPi / qu;
  const double t = 1.0 - u, st = std::sqrt(std::max(0.0, 1.0 - t * t)), phi = 2.0 * kPi * rs.uniform();
  // orthonormal frame around x
  Vec3 e1 = std::abs(x[2]) < 0.9 ? Vec3{-x[1], x[0], 0.0} : Vec3{0.0, -x[2], x[1]};
  const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (double& v : e1) v /= n1;
  const Vec3 e2 = {x[1] * e1[2] - x[2] * e1[1], x[2] * e1[0] - x[0] * e1[2], x[0] * e1[1] - x[1] * e1[0]};
  Vec3 y;
  for (int i = 0; i < 3; ++i) y[i] = t * x[i] + st * (std::cos(phi) * e1[i] + std::sin(phi) * e2[i]);
  return y;
}

// Proposal exponent: for m = 2 the second moment needs β > 4α - δ (δ the local dimension).
double chain_beta(double alpha, int m, double dim) {
  return m == 2 ? std::max(alpha, 3.0 * alpha - dim / 2.0) : alpha;
}

}  // namespace

double CumulantTable::c(int m) const {
  if (m < m_min || m > m_max()) throw ValidationError("cumulant order out of table range");
  return values[m - m_min];
}

double CumulantTable::err(int m) const {
  if (m < m_min || m > m_max()) throw ValidationError("cumulant order out of table range");
  return stderr_[m - m_min];
}

CumulantTable cumulants_spectral(const RieszSpectrum& s, int M) {
  if (M < 2) throw ValidationError("cumulants_spectral: M must be >= 2");
  CumulantTable t;
  t.method = "spectral";
  for (int m = 2; m <= M; ++m) {
    const TracePower tp = trace_power(s, m);
    if (tp.tail_bound > 0.01 * tp.value)
      throw NumericalError("cumulants_spectral: tail uncertainty above 1% at m = " + std::to_string(m) +
                           "; increase N_max or K_max");
    t.values.push_back(tp.value);
    t.stderr_.push_back(tp.tail_bound);
  }
  return t;
}

CumulantTable cumulants_from_weights(const std::vector<double>& spatial, const std::vector<double>& dims,
                                     const std::vector<double>& temporal, int M) {
  if (M < 2 || dims.size() != spatial.size()) throw ValidationError("cumulants_from_weights: bad arguments");
  CumulantTable t;
  t.method = "spectral";
  for (int m = 2; m <= M; ++m) {
    t.values.push_back(power_sum(spatial, &dims, m) * power_sum(temporal, nullptr, m));
    t.stderr_.push_back(0.0);
  }
  return t;
}

McEstimate cumulants_montecarlo(const ModelParams& p, int m, long n_samples, std::uint64_t seed) {
  if (m < 2) throw ValidationError("cumulants_montecarlo: m must be >= 2");
  if (p.d != 1 && p.d != 2) throw ValidationError("cumulants_montecarlo: d must be 1 or 2");
  if (!(p.alpha_s > 0.0 && p.alpha_s < p.d / 2.0)) throw ValidationError("cumulants_montecarlo: need 0 < alpha_s < d/2");
  if (!(p.alpha_t > 0.0 && p.alpha_t < 0.5)) throw ValidationError("cumulants_montecarlo: need 0 < alpha_t < 1/2");
  if (n_samples < 2) throw ValidationError("cumulants_montecarlo: need n_samples >= 2");
  const double bt = chain_beta(p.alpha_t, m, 1.0), bs = chain_beta(p.alpha_s, m, p.d);
  const double area = sphere_area(p.d);
  Stream rs(seed, 0x6d6320, static_cast<std::uint64_t>(m));
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    double wt = 2.0;  // 1 / uniform density on [-1, 1]
    const double t1 = 2.0 * rs.uniform() - 1.0;
    double t = t1;
    for (int j = 1; j < m; ++j) {
      const double s = temporal_step(rs, t, bt, wt);
      wt *= std::pow(std::abs(s - t), -p.alpha_t);
      t = s;
    }
    wt *= std::pow(std::abs(t - t1), -p.alpha_t);
    double ws = area;
    const Vec3 x1 = uniform_sphere(rs, p.d);
    Vec3 x = x1;
    for (int j = 1; j < m; ++j) {
      const Vec3 y = spatial_step(rs, x, p.d, bs, ws);
      ws *= std::pow(chord(x, y), -p.alpha_s);
      x = y;
    }
    ws *= std::pow(chord(x, x1), -p.alpha_s);
    const double v = wt * ws;
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  McEstimate out;
  out.value = mean;
  out.stderr_ = std::sqrt(m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples));
  out.n_samples = n_samples;
  return out;
}

CharacteristicCurve limit_cf(const CumulantTable& c, const std::vector<double>& xi) {
  if (c.m_min != 2 || c.values.empty()) throw ValidationError("limit_cf: table must start at m = 2");
  // c_m^{1/m} bounds the largest eigenvalue from above
  double lam = 1e300;
  for (int m = 2; m <= c.m_max(); ++m)
    if (c.c(m) > 0) lam = std::min(lam, std::pow(c.c(m), 1.0 / m));
  CharacteristicCurve out;
  out.method = "series";
  out.radius = 0.5 / lam;
  std::vector<double> cm(c.m_max() + 1, 0.0);
  for (int m = 2; m <= c.m_max(); ++m) cm[m] = c.c(m);
  for (double x : xi)
    if (std::abs(x) >= out.radius)
      throw ValidationError("limit_cf: xi = " + fmt(x) + " outside the series domain |xi| < " + fmt(out.radius));
  for (double x : xi) {
    double last = 0.0;
    int used = 0;
    const cplx l = cumulant_series(cm, x, 1e-12, &last, &used);
    if (last >= 1e-12 && x != 0.0)
      throw NumericalError("limit_cf: cumulant table too short for xi = " + fmt(x));
    out.xi.push_back(x);
    out.values.push_back(std::exp(l));
    out.truncation_m = std::max(out.truncation_m, used);
  }
  return out;
}

TailCumulants tail_cumulants(const RieszSpectrum& s, int M) {
  if (M < 2) throw ValidationError("tail_cumulants: M must be >= 2");
  TailCumulants tc;
  tc.c.assign(M + 1, 0.0);
  for (int m = 2; m <= M; ++m) {
    const double si = s.spatial.power_sum(m, false), so = s.spatial.tail.sum(m);
    const double ti = s.temporal.power_sum(m, false), to = s.temporal.tail.sum(m);
    tc.c[m] = si * to + so * ti + so * to;
  }
  const double s_out = s.spatial.tail.extra.empty() ? s.spatial.tail.model.eval(s.spatial.tail.model_start)
                                                    : s.spatial.tail.extra.front();
  const double t_out = s.temporal.tail.extra.empty() ? s.temporal.tail.model.eval(s.temporal.tail.model_start)
                                                     : s.temporal.tail.extra.front();
  tc.lambda_max = std::max(s.spatial.values.front() * t_out, s_out * s.temporal.values.front());
  return tc;
}

CharacteristicCurve limit_cf(const RieszSpectrum& s, const std::vector<double>& xi) {
  std::vector<double> w, mult;
  for (std::size_t n = 0; n < s.spatial.values.size(); ++n)
    for (double b : s.temporal.values) {
      w.push_back(s.spatial.values[n] * b);
      mult.push_back(static_cast<double>(s.spatial.dims[n]));
    }
  const TailCumulants tc = tail_cumulants(s);
  CharacteristicCurve out;
  out.method = "product+tail";
  out.radius = tc.radius();
  for (double x : xi) {
    if (std::abs(x) >= out.radius)
      throw ValidationError("limit_cf: xi = " + fmt(x) + " outside the tail-series domain |xi| < " + fmt(out.radius));
    double last = 0.0;
    int used = 0;
    const cplx l = log_cf_product(w, mult, x, true) + cumulant_series(tc.c, x, 1e-15, &last, &used);
    if (last >= 1e-12) throw NumericalError("limit_cf: tail series not converged at xi = " + fmt(x));
    out.xi.push_back(x);
    out.values.push_back(std::exp(l));
    out.truncation_m = std::max(out.truncation_m, used);
  }
  return out;
}

CharacteristicCurve finite_T_cf(const AngularSpectrum& ang, const std::vector<double>& temporal, double d_T,
                                const std::vector<double>& xi, int M, const TailCumulants* tail, bool centered) {
  if (!(d_T > 0.0)) throw ValidationError("finite_T_cf: d_T must be positive");
  if (M < 2) throw ValidationError("finite_T_cf: M must be >= 2");
  std::vector<double> w, mult;
  double wmax = 0.0;
  for (std::size_t n = 0; n < ang.coeffs.size(); ++n)
    for (double b : temporal) {
      w.push_back(ang.coeffs[n] * b / d_T);
      mult.push_back(static_cast<double>(ang.dims[n]));
      wmax = std::max(wmax, w.back());
    }
  std::vector<double> cm(M + 1, 0.0);
  for (int m = 2; m <= M; ++m) cm[m] = power_sum(w, &mult, m);
  CharacteristicCurve out;
  out.method = "fredholm_product";
  out.radius = wmax > 0.0 ? 0.5 / wmax : 1e300;
  for (double x : xi) {
    cplx tail_log = 0.0;
    if (tail) {
      if (std::abs(x) >= tail->radius())
        throw ValidationError("finite_T_cf: xi = " + fmt(x) + " outside the tail-series domain");
      tail_log = cumulant_series(tail->c, x, 1e-15);
    }
    const cplx prod = log_cf_product(w, mult, x, centered);
    if (std::abs(x) < out.radius) {
      // series route: ½ Σ (2iξ)^m c_m(T)/m, plus the mean term when uncentered
      double last = 0.0;
      int used = 0;
      cplx ser = cumulant_series(cm, x, 1e-14, &last, &used);
      if (!centered) ser += cplx(0.0, x * power_sum(w, &mult, 1));
      if (last < 1e-12) {
        const double gap = std::abs(std::exp(ser) - std::exp(prod));
        out.route_gap = std::max(out.route_gap, gap);
        out.truncation_m = std::max(out.truncation_m, used);
        if (gap > 1e-6) throw ConsistencyError("finite_T_cf: product and series routes disagree at xi = " + fmt(x));
      }
    }
    out.xi.push_back(x);
    out.values.push_back(std::exp(prod + tail_log));
  }
  return out;
}

std::complex<double> cf_product_uncentered(const std::vector<double>& w, const std::vector<double>& mult, double xi) {
  if (mult.size() != w.size()) throw ValidationError("cf_product_uncentered: size mismatch");
  // principal logs: each factor has positive real part
  return std::exp(log_cf_product(w, mult, xi, false));
}

std::complex<double> cf_trace_uncentered(const std::vector<double>& w, const std::vector<double>& mult, double xi) {
  if (mult.size() != w.size()) throw ValidationError("cf_trace_uncentered: size mismatch");
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, v);
  if (2.0 * std::abs(xi) * wmax >= 1.0) throw ValidationError("cf_trace_uncentered: |2 xi| max w must be < 1");
  // ½ Σ_{m>=1} (2iξ)^m tr(W^m)/m
  cplx s = 0.0, z = cplx(0.0, 2.0 * xi), zm = 1.0;
  for (int m = 1; m <= 4000; ++m) {
    zm *= z;
    const cplx term = 0.5 * zm * power_sum(w, &mult, m) / static_cast<double>(m);
    s += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(s))) break;
  }
  return std::exp(s);
}

std::complex<double> fredholm_det(const std::vector<double>& eigs, std::complex<double> omega) {
  cplx p = 1.0;
  for (double l : eigs) p *= (1.0 - omega * l);
  return p;
}

std::complex<double> fredholm_det_trace(const std::vector<double>& eigs, std::complex<double> omega) {
  double tr = 0.0;
  for (double l : eigs) {
    if (l < 0.0) throw ValidationError("fredholm_det_trace: eigenvalues must be nonnegative");
    tr += l;
  }
  if (std::abs(omega) * tr >= 1.0) throw ValidationError("fredholm_det_trace: requires |omega| * trace < 1");
  cplx s = 0.0, wk = 1.0;
  for (int k = 1; k <= 10000; ++k) {
    wk *= omega;
    double pk = 0.0;
    for (double l : eigs) pk += std::pow(l, k);
    const cplx term = wk * pk / static_cast<double>(k);
    s += term;
    if (std::abs(term) < 1e-18) break;
  }
  return std::exp(-s);
}

std::vector<double> sample_S_infinity(const RieszSpectrum& s, long n_samples, std::uint64_t seed,
                                      const SampleOptions& opt) {
  if (n_samples < 1) throw ValidationError("sample_S_infinity: n_samples must be >= 1");
  const int e = opt.squared_weights ? 2 : 1;
  const auto& sv = s.spatial.values;
  const auto& tv = s.temporal.values;
  std::vector<double> w;
  for (double a : sv)
    for (double b : tv) w.push_back(std::pow(a * b, e));
  // variance of the discarded part: 2 (c_2 - c_2 over the retained set), with weights to the power e
  double tail_sd = 0.0;
  if (opt.tail_compensation) {
    const int m = 2 * e;
    const double si = s.spatial.power_sum(m, false), ti = s.temporal.power_sum(m, false);
    const double so = s.spatial.tail.sum(m), to = s.temporal.tail.sum(m);
    tail_sd = std::sqrt(2.0 * (si * to + so * ti + so * to));
  }
  const int K = static_cast<int>(tv.size());
  std::vector<double> out(n_samples);
  auto work = [&](long lo, long hi) {
    for (long r = lo; r < hi; ++r) {
      Stream rs(seed, static_cast<std::uint64_t>(r), 0x5331);
      double acc = 0.0;
      for (std::size_t n = 0; n < sv.size(); ++n) {
        const double dof = static_cast<double>(s.spatial.dims[n]);
        for (int k = 0; k < K; ++k) acc += w[n * K + k] * (rs.chi_square(dof) - dof);
      }
      if (tail_sd > 0.0) acc += tail_sd * rs.normal();
      out[r] = acc;
    }
  };
  const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(std::min<long>(n_samples, 256))));
  if (threads == 1) {
    work(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i)
      pool.emplace_back(work, n_samples * i / threads, n_samples * (i + 1) / threads);
    for (auto& th : pool) th.join();
  }
  return out;
}

std::string cumulants_csv(const CumulantTable& t) {
  CsvTable c({"m", "c_m", "stderr", "method"});
  for (int m = t.m_min; m <= t.m_max(); ++m) c.add({fmt(static_cast<long long>(m)), fmt(t.c(m)), fmt(t.err(m)), t.method});
  return c.str();
}

std::string curve_csv(const CharacteristicCurve& c) {
  CsvTable t({"xi", "re", "im"});
  for (std::size_t i = 0; i < c.xi.size(); ++i) t.add({fmt(c.xi[i]), fmt(c.values[i].real()), fmt(c.values[i].imag())});
  return t.str();
}

}  // namespace strf

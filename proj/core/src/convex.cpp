#include "strf/convex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "strf/error.hpp"
#include "strf/specfun.hpp"

namespace strf {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(a ζ)/ζ with its limit a at ζ = 0
double sinc_scaled(double a, double z) {
  const double x = a * z;
  if (std::abs(x) < 1e-4) return a * (1.0 - x * x / 6.0);
  return std::sin(x) / z;
}

// Multiplies weight by the inverse proposal density of u ∈ [0, L] ∝ u^{-β} and returns u.
double draw_power(Stream& rs, double L, double beta, double& weight) {
  const double u = L * std::pow(rs.uniform(), 1.0 / (1.0 - beta));
  weight *= std::pow(L, 1.0 - beta) / (1.0 - beta) * std::pow(std::max(u, 1e-300), beta);
  return u;
}

// Point y near x in [-a, a] with |y - x| ∝ |Δ|^{-β} on each side; weight gets 1/q.
double draw_near(Stream& rs, double x, double a, double beta, double& weight) {
  const double left = x + a, right = a - x;
  const double ml = std::pow(left, 1.0 - beta), mr = std::pow(right, 1.0 - beta);
  double side_w = 1.0;
  double y;
  if (rs.uniform() * (ml + mr) < ml) {
    y = x - draw_power(rs, left, beta, side_w);
    side_w *= (ml + mr) / ml;
  } else {
    y = x + draw_power(rs, right, beta, side_w);
    side_w *= (ml + mr) / mr;
  }
  weight *= side_w;
  return y;
}

struct Welford {
  long n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  double stderr_() const { return n > 1 ? std::sqrt(m2 / (n - 1.0) / static_cast<double>(n)) : 0.0; }
};

}  // namespace

double ConvexBody::volume() const {
  if (kind == BodyKind::box) {
    double v = 1.0;
    for (double a : half_widths) v *= 2.0 * a;
    return v;
  }
  return std::pow(kPi, D / 2.0) * std::pow(radius, D) / std::tgamma(D / 2.0 + 1.0);
}

double ConvexBody::diameter() const {
  if (kind == BodyKind::ball) return 2.0 * radius;
  double s = 0.0;
  for (double a : half_widths) s += 4.0 * a * a;
  return std::sqrt(s);
}

ConvexBody make_box(int D, double half_width) {
  if (D < 1 || !(half_width > 0.0)) throw ValidationError("make_box: bad dimensions");
  return make_box(std::vector<double>(D, half_width));
}

ConvexBody make_box(std::vector<double> half_widths) {
  if (half_widths.empty()) throw ValidationError("make_box: need at least one dimension");
  for (double a : half_widths)
    if (!(a > 0.0)) throw ValidationError("make_box: half-widths must be positive");
  ConvexBody K;
  K.kind = BodyKind::box;
  K.D = static_cast<int>(half_widths.size());
  K.half_widths = std::move(half_widths);
  return K;
}

ConvexBody make_ball(int D, double radius) {
  if (D < 1 || !(radius > 0.0)) throw ValidationError("make_ball: bad dimensions");
  ConvexBody K;
  K.kind = BodyKind::ball;
  K.D = D;
  K.radius = radius;
  return K;
}

std::complex<double> indicator_ft(const ConvexBody& K, const double* lam) {
  if (K.kind == BodyKind::box) {
    double v = 1.0;
    for (int j = 0; j < K.D; ++j) v *= sinc_scaled(K.half_widths[j], lam[j]) / K.half_widths[j];
    return v;
  }
  double r2 = 0.0;
  for (int j = 0; j < K.D; ++j) r2 += lam[j] * lam[j];
  const double x = K.radius * std::sqrt(r2), nu = K.D / 2.0;
  if (x < 1e-6) return 1.0 - x * x / (2.0 * K.D + 4.0);
  return std::tgamma(nu + 1.0) * std::pow(2.0 / x, nu) * bessel_j(nu, x);
}

double interval_ft(double omega) { return sinc_scaled(1.0, omega); }

double riesz_constant(int D, double alpha_s, double alpha_t) {
  if (D < 1 || !(alpha_s > 0.0 && alpha_s < D) || !(alpha_t > 0.0 && alpha_t < 1.0))
    throw ValidationError("riesz_constant: parameters out of range");
  return riesz_fourier_constant(alpha_s, D) * riesz_fourier_constant(alpha_t, 1);
}

RieszIntegral riesz_double_integral(const ConvexBody& K, double alpha_s, double alpha_t, long n_samples,
                                    std::uint64_t seed, IntegralMethod method) {
  if (!(alpha_s > 0.0 && 2.0 * alpha_s < K.D)) throw ValidationError("riesz_double_integral: need 2 alpha_s < d + 1");
  if (!(alpha_t > 0.0 && 2.0 * alpha_t < 1.0)) throw ValidationError("riesz_double_integral: need 2 alpha_t < 1");
  if (n_samples < 100) throw ValidationError("riesz_double_integral: need at least 100 samples");
  Stream rs(seed, 0x5249, static_cast<std::uint64_t>(K.kind));
  const double vol = K.volume();
  Welford all, half, sp, tm;
  std::vector<double> x(K.D), y(K.D);
  for (long i = 0; i < n_samples; ++i) {
    // temporal pair
    double wt = 4.0;
    const double t = 2.0 * rs.uniform() - 1.0;
    double s;
    if (method == IntegralMethod::importance) {
      double w = 1.0;
      s = draw_near(rs, t, 1.0, 2.0 * alpha_t, w);
      wt = 2.0 * w;
    } else {
      s = 2.0 * rs.uniform() - 1.0;
    }
    wt *= std::pow(std::max(std::abs(t - s), 1e-300), -2.0 * alpha_t);
    // spatial pair
    double ws = vol * vol;
    if (K.kind == BodyKind::box && method == IntegralMethod::importance) {
      double w = vol;
      const double beta = 2.0 * alpha_s / K.D;
      for (int j = 0; j < K.D; ++j) {
        const double a = K.half_widths[j];
        x[j] = a * (2.0 * rs.uniform() - 1.0);
        y[j] = draw_near(rs, x[j], a, beta, w);
      }
      ws = w;
    } else if (K.kind == BodyKind::box) {
      for (int j = 0; j < K.D; ++j) {
        x[j] = K.half_widths[j] * (2.0 * rs.uniform() - 1.0);
        y[j] = K.half_widths[j] * (2.0 * rs.uniform() - 1.0);
      }
    } else {
      // uniform in the ball by rejection from the cube
      for (auto* v : {&x, &y}) {
        double r2;
        do {
          r2 = 0.0;
          for (int j = 0; j < K.D; ++j) {
            (*v)[j] = K.radius * (2.0 * rs.uniform() - 1.0);
            r2 += (*v)[j] * (*v)[j];
          }
        } while (r2 > K.radius * K.radius);
      }
    }
    double d2 = 0.0;
    for (int j = 0; j < K.D; ++j) d2 += (x[j] - y[j]) * (x[j] - y[j]);
    ws *= std::pow(std::max(d2, 1e-300), -alpha_s);
    all.add(wt * ws);
    sp.add(ws);
    tm.add(wt);
    if (i + 1 == n_samples / 2) half = all;
  }
  const double se_full = all.stderr_(), se_half = half.stderr_();
  if (!(se_full < se_half)) throw NumericalError("riesz_double_integral: stderr does not shrink under sample doubling");
  RieszIntegral out;
  out.value = all.mean;
  out.stderr_ = se_full;
  out.spatial = sp.mean;
  out.spatial_stderr = sp.stderr_();
  out.temporal = tm.mean;
  out.temporal_stderr = tm.stderr_();
  out.n_samples = n_samples;
  return out;
}

SpectralGrid::Nodes SpectralGrid::draw(Stream& rs) const {
  Nodes nd;
  const int C = D + 1;
  nd.xi.resize(2 * L * C);
  nd.cell.resize(2 * L);
  const double bs = tau * alpha_s, bt = tau * alpha_t;
  const double cS = riesz_fourier_constant(alpha_s, D) * sphere_area(D - 1) * std::pow(Lambda, bs) / bs;
  const double cT = riesz_fourier_constant(alpha_t, 1) * 2.0 * std::pow(Omega, bt) / bt;
  nd.mirror.resize(2 * L);
  std::vector<double> dir(D);
  for (int l = 0; l < L; ++l) {
    const double r = Lambda * std::pow(rs.uniform(), 1.0 / bs);
    double n2 = 0.0;
    if (D == 1) {
      dir[0] = rs.uniform() < 0.5 ? -1.0 : 1.0;
      n2 = 1.0;
    } else {
      do {
        n2 = 0.0;
        for (int j = 0; j < D; ++j) {
          dir[j] = rs.normal();
          n2 += dir[j] * dir[j];
        }
      } while (n2 < 1e-300);
    }
    const double inv = 1.0 / std::sqrt(n2);
    const double om = Omega * std::pow(rs.uniform(), 1.0 / bt) * (rs.uniform() < 0.5 ? -1.0 : 1.0);
    const double cell = cS * std::pow(r, alpha_s - bs) * cT * std::pow(std::abs(om), alpha_t - bt) / (2.0 * L);
    nd.cell[2 * l] = nd.cell[2 * l + 1] = cell;
    double* a = &nd.xi[(2 * l) * C];
    double* b = &nd.xi[(2 * l + 1) * C];
    for (int j = 0; j < D; ++j) {
      a[j] = r * dir[j] * inv;
      b[j] = -a[j];
    }
    a[D] = om;
    b[D] = -om;
    nd.mirror[2 * l] = 2 * l + 1;
    nd.mirror[2 * l + 1] = 2 * l;
  }
  return nd;
}

SpectralGrid make_spectral_grid(const ConvexBody& K, const ModelParams& p, int L, double loss, double tau) {
  validate(p, Mode::convex);
  const int D = p.d + 1;
  if (K.D != D) throw ValidationError("make_spectral_grid: body dimension must equal d + 1");
  if (L < 2) throw ValidationError("make_spectral_grid: need at least 2 features");
  if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("make_spectral_grid: tau must be in (0, 1]");
  if (!(loss > 0.0 && loss < 0.1)) throw ValidationError("make_spectral_grid: loss must be in (0, 0.1)");
  const double as = p.alpha_s, at = p.alpha_t;
  if (!(2.0 * as < D) || !(2.0 * at < 1.0)) throw ValidationError("make_spectral_grid: squared integrand not integrable");
  const double cS = riesz_fourier_constant(as, D), cT = riesz_fourier_constant(at, 1);
  const double area = sphere_area(D - 1), vol = K.volume();
  // temporal: discarded ≈ 2 c_T² (2 Ω^{2α-1}/(1-2α)) ∫ F_T², ∫ (2 sin ζ/ζ)² dζ = 4π
  const double VT = std::pow(2.0, 3.0 - 2.0 * at) / ((1.0 - 2.0 * at) * (2.0 - 2.0 * at));
  const double Omega = std::max(
      10.0, std::pow(loss * VT * (1.0 - 2.0 * at) / (16.0 * kPi * cT * cT), 1.0 / (2.0 * at - 1.0)));
  // spatial: discarded ≈ 2 c_S² |S^{D-1}| Λ^{2α-D}/(D-2α) (2π)^D |K|, against the lower bound |K|² diam^{-2α}
  const double VS = vol * vol * std::pow(K.diameter(), -2.0 * as);
  const double Lambda = std::max(10.0, std::pow(loss * VS * (D - 2.0 * as) /
                                                    (2.0 * cS * cS * area * std::pow(2.0 * kPi, D) * vol),
                                                1.0 / (2.0 * as - D)));
  SpectralGrid g;
  g.D = D;
  g.L = L;
  g.Lambda = Lambda;
  g.Omega = Omega;
  g.alpha_s = as;
  g.alpha_t = at;
  g.tau = tau;
  g.mass = cS * area * std::pow(Lambda, as) / as * cT * 2.0 * std::pow(Omega, at) / at;
  g.loss_temporal = 2.0 * cT * cT * 2.0 * std::pow(Omega, 2.0 * at - 1.0) / (1.0 - 2.0 * at) * 4.0 * kPi / VT;
  g.loss_spatial =
      2.0 * cS * cS * area * std::pow(Lambda, 2.0 * as - D) / (D - 2.0 * as) * std::pow(2.0 * kPi, D) * vol / VS;
  return g;
}

ConvexSamples sample_convex_limit(const ConvexBody& K, const ModelParams& p, const SpectralGrid& grid, long n_samples,
                                  std::uint64_t seed, int threads) {
  validate(p, Mode::convex);
  if (n_samples < 0) throw ValidationError("sample_convex_limit: n_samples must be >= 0");
  if (grid.D != K.D) throw ValidationError("sample_convex_limit: grid and body dimensions differ");
  const int D = K.D, C = D + 1, A = 2 * grid.L;
  // Lebesgue transform of K × [-1, 1]
  const double scale_K = K.kind == BodyKind::box ? 1.0 : K.volume();
  ConvexSamples out;
  out.values.assign(n_samples, 0.0);
  std::vector<double> imag(n_samples, 0.0);
  // U-statistic normalization: Var = 2 V_R exactly for i.i.d. features
  const double unorm = std::sqrt(static_cast<double>(grid.L) / (grid.L - 1.0));
  auto work = [&](long lo, long hi) {
    std::vector<double> sn(A * C), cs(A * C), ft(A);
    std::vector<std::complex<double>> Z(A);
    for (long r = lo; r < hi; ++r) {
      Stream rs(seed, static_cast<std::uint64_t>(r), 0x4358);
      const auto nd = grid.draw(rs);
      for (int a = 0; a < A; a += 2) {
        const double sd = std::sqrt(nd.cell[a] / 2.0);
        Z[a] = {sd * rs.normal(), sd * rs.normal()};
        Z[a + 1] = std::conj(Z[a]);
      }
      if (K.kind == BodyKind::box)
        for (int a = 0; a < A; ++a)
          for (int j = 0; j < C; ++j) {
            const double h = j < D ? K.half_widths[j] : 1.0;
            sn[a * C + j] = std::sin(h * nd.xi[a * C + j]);
            cs[a * C + j] = std::cos(h * nd.xi[a * C + j]);
          }
      std::complex<double> S = 0.0;
      for (int a = 0; a < A; ++a)
        for (int b = a + 1; b < A; ++b) {
          if (b == nd.mirror[a]) continue;
          double F = 1.0;
          if (K.kind == BodyKind::box) {
            for (int j = 0; j < C; ++j) {
              const double h = j < D ? K.half_widths[j] : 1.0;
              const double z = nd.xi[a * C + j] + nd.xi[b * C + j];
              if (std::abs(h * z) < 1e-3) {
                F *= 2.0 * sinc_scaled(h, z);
              } else {
                F *= 2.0 * (sn[a * C + j] * cs[b * C + j] + cs[a * C + j] * sn[b * C + j]) / z;
              }
            }
          } else {
            double lam[8];
            for (int j = 0; j < D; ++j) lam[j] = nd.xi[a * C + j] + nd.xi[b * C + j];
            F = scale_K * indicator_ft(K, lam).real() * 2.0 * interval_ft(nd.xi[a * C + D] + nd.xi[b * C + D]);
          }
          S += 2.0 * Z[a] * Z[b] * F;
        }
      out.values[r] = unorm * S.real();
      imag[r] = std::abs(unorm * S.imag());
    }
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<long>(1, std::min<long>(n_samples, 256)))));
  if (threads == 1 || n_samples < 2) {
    work(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work, n_samples * i / threads, n_samples * (i + 1) / threads);
    for (auto& t : pool) t.join();
  }
  for (double v : imag) out.max_imag = std::max(out.max_imag, v);
  if (out.max_imag > 1e-8) throw ConsistencyError("sample_convex_limit: Hermitian symmetry violated (imaginary residue)");
  return out;
}

const char* body_name(BodyKind k) { return k == BodyKind::box ? "box" : "ball"; }

BodyKind body_from_name(const std::string& s) {
  if (s == "box") return BodyKind::box;
  if (s == "ball") return BodyKind::ball;
  throw ValidationError("unknown body '" + s + "' (expected box or ball)");
}

}  // namespace strf

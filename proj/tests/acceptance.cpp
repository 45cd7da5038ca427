// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "strf/convex.hpp"
#include "strf/csv.hpp"
#include "strf/experiment.hpp"
#include "strf/fieldsim.hpp"
#include "strf/model.hpp"
#include "strf/quadrature.hpp"
#include "strf/rng.hpp"
#include "strf/rosenblatt.hpp"
#include "strf/specfun.hpp"
#include "strf/spectra.hpp"
#include "strf/stats.hpp"

using namespace strf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

Outcome hermite() {
  const bool exact = hermite_poly(2, 2.0) == 3.0 && hermite_poly(4, 1.0) == -2.0 && hermite_poly(3, 2.0) == 2.0;
  const Rule r = gauss_hermite(30);
  double worst = 0.0, fact[9] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
  for (int q = 0; q <= 8; ++q)
    for (int p = 0; p <= 8; ++p) {
      double s = 0.0;
      for (int i = 0; i < r.size(); ++i) s += r.w[i] * hermite_poly(q, r.x[i]) * hermite_poly(p, r.x[i]);
      worst = std::max(worst, std::abs(s - (p == q ? fact[q] : 0.0)));
    }
  return {exact && worst <= 1e-10,
          std::string("H_2(2), H_4(1), H_3(2) ") + (exact ? "exact" : "wrong") + ", orthogonality error " + num(worst)};
}

Outcome fredholm() {
  Stream rs(2024, 0, 0);
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const int n = 1 + static_cast<int>(rs.uniform() * 40);
    std::vector<double> eigs(n);
    double tr = 0.0;
    for (auto& e : eigs) {
      e = rs.uniform() * std::pow(rs.uniform(), 2.0);
      tr += e;
    }
    // inside the trace-series radius |ω| Σλ < 1
    const double rho = 0.9 * rs.uniform() / tr, ang = 2.0 * 3.141592653589793 * rs.uniform();
    const std::complex<double> w = std::polar(rho, ang);
    worst = std::max(worst, std::abs(fredholm_det(eigs, w) - fredholm_det_trace(eigs, w)));
  }
  bool rank_one = true;
  for (double lam : {0.3, 1.0, 2.5})
    for (std::complex<double> w : {std::complex<double>(0.2, 0.1), std::complex<double>(-0.3, 0.0)}) {
      rank_one = rank_one && fredholm_det({lam}, w) == 1.0 - w * lam;
      rank_one = rank_one && std::abs(fredholm_det_trace({lam}, w) - (1.0 - w * lam)) <= 1e-14;
    }
  return {worst <= 1e-10 && rank_one,
          "max route gap " + num(worst) + " on 100 instances, rank one " + (rank_one ? "exact" : "inexact")};
}

Outcome temporal_hs() {
  double worst = 0.0;
  for (double a : {0.1, 0.25, 0.4}) {
    const auto s = riesz_temporal_eigs(a, 50);
    const double exact = std::pow(2.0, 3.0 - 2.0 * a) / ((1.0 - 2.0 * a) * (2.0 - 2.0 * a));
    worst = std::max(worst, std::abs(s.power_sum(2) / exact - 1.0));
  }
  return {worst <= 1e-4, "max relative error " + num(worst)};
}

Outcome spatial_hs() {
  double worst = 0.0;
  for (double a : {0.2, 0.4}) {
    const auto s = riesz_spatial_eigs(a, 2, 30);
    // ∫_{S_2}∫_{S_2} ‖x-y‖^{-2a} = |S_2| 2π ∫_{-1}^{1} (2 - 2t)^{-a} dt
    const Rule r = gauss_jacobi(20, -a, 0.0);
    double z = 0.0;
    for (int i = 0; i < r.size(); ++i) z += r.w[i] * std::pow(2.0, -a);
    z *= 4.0 * 3.141592653589793 * 2.0 * 3.141592653589793;
    worst = std::max(worst, std::abs(s.power_sum(2) / z - 1.0));
  }
  return {worst <= 1e-4, "max relative error " + num(worst)};
}

Outcome cumulant_duality() {
  ModelParams p;  // d = 2, α_S = 0.3, α_T = 0.25
  const auto s = riesz_spectrum(p, 30, 50);
  const auto ct = cumulants_spectral(s, 3);
  bool ok = true;
  std::string d;
  for (int m : {2, 3}) {
    const auto e = cumulants_montecarlo(p, m, 1000000, 7 + m);
    const double z = (e.value - ct.c(m)) / std::hypot(e.stderr_, ct.err(m));
    ok = ok && std::abs(z) <= 3.0;
    d += "c" + std::to_string(m) + " spectral " + num(ct.c(m)) + " mc " + num(e.value) + " (z " + num(z) + ") ";
  }
  return {ok, d};
}

Outcome sampler_cf() {
  ModelParams p;
  const auto s = riesz_spectrum(p, 30, 50);
  const auto ct = cumulants_spectral(s, 3);
  const long n = 100000;
  const auto x = sample_S_infinity(s, n, 42);
  std::vector<double> xi;
  for (int i = -10; i <= 10; ++i) xi.push_back(0.03 * i);
  const auto lim = limit_cf(s, xi);
  double dev = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) dev = std::max(dev, std::abs(empirical_cf(x, xi[i]) - lim.values[i]));
  const double allow = 4.0 / std::sqrt(static_cast<double>(n)) + 0.005;
  const auto m = moments(x);
  const double zv = (m.variance - 2.0 * ct.c(2)) / m.variance_stderr;
  const double z3 = (m.k3 - 8.0 * ct.c(3)) / m.k3_stderr;
  return {dev <= allow && std::abs(zv) <= 3.0 && std::abs(z3) <= 5.0,
          "sup CF deviation " + num(dev) + " (allowed " + num(allow) + "), variance z " + num(zv) + ", k3 z " + num(z3)};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::runtime_error("missing column " + name);
  return static_cast<int>(it - header.begin());
}

// Runs converge once for criteria 7 and 8.
struct ConvergeRun {
  std::vector<double> dist, gap, gap_over_var;
  double route_gap = -1.0;
};

ConvergeRun converge_run() {
  ExperimentConfig c;
  c.horizons = {1.0, 10.0, 100.0, 1000.0};
  c.gap_replicates = 200;
  c.out = (fs::temp_directory_path() / "strf_acceptance_converge").string();
  fs::remove_all(c.out);
  cmd_converge(c);
  ConvergeRun r;
  const auto t = read_csv(fs::path(c.out) / "converge.csv");
  const int cT = column(t[0], "T"), cd = column(t[0], "cf_distance"), cg = column(t[0], "gap_exact"),
            cv = column(t[0], "gap_over_var");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i][cT] == "1") continue;
    r.dist.push_back(std::stod(t[i][cd]));
    r.gap.push_back(std::stod(t[i][cg]));
    r.gap_over_var.push_back(std::stod(t[i][cv]));
  }
  const auto rt = read_csv(fs::path(c.out) / "route_check_T1.csv");
  const int ca = column(rt[0], "abs_diff");
  r.route_gap = 0.0;
  for (std::size_t i = 1; i < rt.size(); ++i) r.route_gap = std::max(r.route_gap, std::stod(rt[i][ca]));
  fs::remove_all(c.out);
  return r;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return v.size() >= 2;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + num(x);
  return s;
}

Outcome finite_T(const ConvergeRun& r) {
  const bool ok = r.dist.size() == 3 && strictly_decreasing(r.dist) && r.route_gap >= 0.0 && r.route_gap <= 1e-8;
  return {ok, "distance at xi = 0.2: " + join(r.dist) + "; T = 1 route gap " + num(r.route_gap)};
}

Outcome mean_square(const ConvergeRun& r) {
  const bool ok = r.gap.size() == 3 && strictly_decreasing(r.gap) && r.gap_over_var.back() <= 0.1;
  return {ok, "coupled gap " + join(r.gap) + "; final / Var " + num(r.gap_over_var.back())};
}

Outcome reduction() {
  ModelParams p;
  p.gamma = 0.0;
  const int N = 8, K = 40, R = 400;
  const auto hz = hermite_coeffs([](double z) { return z * z; }, 4);
  const auto hc = hermite_coeffs([](double z) { return std::cos(z); }, 6);
  const auto ang = angular_coeffs(p, 1.0, N);
  double worst = 0.0;
  std::vector<double> ks;
  for (double T : {10.0, 100.0}) {
    const auto te = temporal_eigs(p, 0, T, K, static_cast<int>(8 * T) + 40, TemporalMethod::nystrom);
    const auto g = make_grid(2, 1.0, N + 1, 2 * N + 1, te);
    const auto g2 = make_grid(2, 1.0, 2 * N + 6, 4 * N + 8, te);
    const double dT = tail_amplitude(p) * scaling_d_T(p, Mode::sphere, T);
    std::vector<double> S, A;
    for (int r = 0; r < R; ++r) {
      const auto s = sample_field(ang, te, 0.0, 11, static_cast<std::uint64_t>(r));
      const double st = functional_S_T(s, ang, te, dT).value;
      const auto Z = evaluate_field(s, ang, te, g);
      const double az = functional_A_T(Z, g, ang, te, K, [](double z) { return z * z; }, hz, dT).value;
      worst = std::max(worst, std::abs(az - st));
      const auto Z2 = evaluate_field(s, ang, te, g2);
      A.push_back(functional_A_T(Z2, g2, ang, te, K, [](double z) { return std::cos(z); }, hc, dT).value);
      S.push_back(st);
    }
    ks.push_back(ks_distance(A, S));
  }
  return {worst <= 1e-10 && strictly_decreasing(ks), "max |A_T(z^2) - S_T| " + num(worst) + "; KS(cos) " + join(ks)};
}

Outcome convex_duality() {
  ModelParams p;
  p.d = 1;
  p.alpha_s = 0.4;
  p.alpha_t = 0.25;
  const auto K = make_box(2, 1.0);
  const auto grid = make_spectral_grid(K, p);
  const auto ri = riesz_double_integral(K, p.alpha_s, p.alpha_t, 4000000, 42);
  const auto xs = sample_convex_limit(K, p, grid, 10000, 42);
  const auto m = moments(xs.values);
  const double se = std::hypot(m.variance_stderr, 2.0 * ri.stderr_);
  const double z = (m.variance - 2.0 * ri.value) / se;
  return {std::abs(z) <= 3.0 && xs.max_imag <= 1e-10,
          "sample variance " + num(m.variance) + " vs 2 x integral " + num(2.0 * ri.value) + " (z " + num(z) +
              "), max imaginary residue " + num(xs.max_imag)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  int compared = 0;
  std::string bad;
  for (const char* cmd : {"spectra", "cumulants", "cf", "converge", "convex", "sample"}) {
    ExperimentConfig c;
    c.horizons = {1.0, 10.0, 100.0};
    c.mc_samples = 20000;
    c.gap_replicates = 50;
    c.n_replicates = 2000;
    c.convex.integral_samples = 100000;
    if (std::string(cmd) == "convex") {
      c.model.d = 1;
      c.model.alpha_s = 0.4;
    }
    c.out = (fs::temp_directory_path() / ("strf_acceptance_det_" + std::string(cmd))).string();
    fs::remove_all(c.out);
    const auto first = run_command(cmd, c);
    std::vector<std::string> bytes;
    for (const auto& f : first.files) bytes.push_back(slurp(fs::path(c.out) / f));
    fs::remove_all(c.out);
    c.threads = 2;  // thread count is not part of the output contract
    const auto second = run_command(cmd, c);
    c.threads = 1;
    if (second.files != first.files) bad += std::string(cmd) + ":files ";
    for (std::size_t i = 0; i < first.files.size(); ++i) {
      std::string again = slurp(fs::path(c.out) / first.files[i]);
      if (first.files[i] == "manifest.json") {
        // the manifest echoes the config, so compare it on a rerun with the original thread count
        fs::remove_all(c.out);
        run_command(cmd, c);
        again = slurp(fs::path(c.out) / first.files[i]);
      }
      ++compared;
      if (again != bytes[i]) bad += std::string(cmd) + ":" + first.files[i] + " ";
    }
    fs::remove_all(c.out);
  }
  return {bad.empty() && compared > 0, std::to_string(compared) + " files byte-identical on rerun" +
                                           (bad.empty() ? "" : "; differing: " + bad)};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  int failed = 0;
  auto run = [&](int id, const char* name, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), sec);
    if (!o.pass) ++failed;
  };
  run(1, "Hermite polynomials", hermite);
  run(2, "Fredholm determinant routes", fredholm);
  run(3, "temporal Riesz HS identity", temporal_hs);
  run(4, "spatial Riesz HS identity", spatial_hs);
  run(5, "cumulant duality", cumulant_duality);
  run(6, "sampler vs limit CF", sampler_cf);
  ConvergeRun cr;
  bool have_converge = false;
  auto converge = [&]() {
    if (!have_converge) {
      cr = converge_run();
      have_converge = true;
    }
    return cr;
  };
  run(7, "finite-T CF convergence", [&] { return finite_T(converge()); });
  run(8, "mean-square convergence", [&] { return mean_square(converge()); });
  run(9, "reduction to S_T", reduction);
  run(10, "convex-domain variance duality", convex_duality);
  run(11, "determinism", determinism);
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

#include "strf/experiment.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "strf/convex.hpp"
#include "strf/error.hpp"
#include "strf/fieldsim.hpp"
#include "strf/rosenblatt.hpp"
#include "strf/specfun.hpp"
#include "strf/spectra.hpp"
#include "strf/stats.hpp"

#ifndef STRF_VERSION
#define STRF_VERSION "0.0.0"
#endif

namespace strf {

namespace {

using ojson = nlohmann::ordered_json;

const char* mode_name(Mode m) { return m == Mode::sphere ? "sphere" : "convex"; }

Mode mode_from_name(const std::string& s) {
  if (s == "sphere") return Mode::sphere;
  if (s == "convex") return Mode::convex;
  throw ValidationError("unknown mode '" + s + "' (expected sphere or convex)");
}

std::string fmt_T(double T) { return std::isinf(T) ? std::string("inf") : fmt(T); }

std::vector<double> xi_grid(const ExperimentConfig& c) {
  if (!c.xi.empty()) return c.xi;
  std::vector<double> xi;
  for (int i = -10; i <= 10; ++i) xi.push_back(0.03 * i);
  return xi;
}

double kappa_dT(const ModelParams& p, double T) { return tail_amplitude(p) * scaling_d_T(p, Mode::sphere, T); }

class Writer {
 public:
  explicit Writer(const ExperimentConfig& c) : c_(c) { std::filesystem::create_directories(c.out); }

  void table(const std::string& stem, const CsvTable& t) {
    const std::string name = stem + (c_.format == "json" ? ".json" : ".csv");
    put(name, render_table(t, c_.format));
  }

  CommandResult finish(const std::string& command, std::vector<std::string> report) {
    ojson m;
    m["command"] = command;
    m["library_version"] = library_version();
    m["config"] = ojson::parse(config_json(c_));
    m["files"] = files_;
    m["report"] = report;
    put("manifest.json", m.dump(2) + "\n");
    return {files_, std::move(report)};
  }

 private:
  void put(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::path(c_.out) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << text;
    if (!f) throw NumericalError("write failed for " + path.string());
    files_.push_back(name);
  }

  const ExperimentConfig& c_;
  std::vector<std::string> files_;
};

void check_keys(const ojson& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ValidationError(where + ": unknown key '" + it.key() + "'");
  }
}

TemporalEigensystem temporal_at(const ExperimentConfig& c, double T) {
  return temporal_eigs(c.model, 0, T, c.K_max, resolved_nodes(c, T));
}

}  // namespace

const char* library_version() { return STRF_VERSION; }

ExperimentConfig parse_config(const std::string& json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  ExperimentConfig c;
  try {
    check_keys(j,
               {"model", "d", "gamma", "alpha_s", "alpha_t", "svf", "rho_s", "rho_t", "mode", "N_max", "K_max", "n_nodes",
                "M", "horizons", "n_replicates", "mc_samples", "gap_replicates", "xi", "xi_distance", "seed", "threads",
                "out", "format", "convex"},
               "config");
    ojson model = ojson::object();
    for (const char* k : {"d", "gamma", "alpha_s", "alpha_t", "svf", "rho_s", "rho_t"})
      if (j.contains(k)) model[k] = j[k];
    if (j.contains("model")) {
      check_keys(j["model"], {"d", "gamma", "alpha_s", "alpha_t", "svf", "rho_s", "rho_t"}, "config.model");
      for (auto it = j["model"].begin(); it != j["model"].end(); ++it) {
        if (model.contains(it.key())) throw ValidationError("config: '" + it.key() + "' given twice");
        model[it.key()] = it.value();
      }
    }
    c.model = model_from_json(model.dump());
    if (j.contains("mode") && !j["mode"].is_null()) c.mode = mode_from_name(j["mode"].get<std::string>());
    if (j.contains("N_max")) c.N_max = j["N_max"].get<int>();
    if (j.contains("K_max")) c.K_max = j["K_max"].get<int>();
    if (j.contains("n_nodes")) c.n_nodes = j["n_nodes"].get<int>();
    if (j.contains("M")) c.M = j["M"].get<int>();
    if (j.contains("horizons")) c.horizons = j["horizons"].get<std::vector<double>>();
    if (j.contains("n_replicates")) c.n_replicates = j["n_replicates"].get<long>();
    if (j.contains("mc_samples")) c.mc_samples = j["mc_samples"].get<long>();
    if (j.contains("gap_replicates")) c.gap_replicates = j["gap_replicates"].get<long>();
    if (j.contains("xi")) c.xi = j["xi"].get<std::vector<double>>();
    if (j.contains("xi_distance")) c.xi_distance = j["xi_distance"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("convex")) {
      const auto& v = j["convex"];
      check_keys(v, {"body", "half_width", "radius", "features", "loss", "tau", "integral_samples"}, "config.convex");
      if (v.contains("body")) c.convex.body = v["body"].get<std::string>();
      if (v.contains("half_width")) c.convex.half_width = v["half_width"].get<double>();
      if (v.contains("radius")) c.convex.radius = v["radius"].get<double>();
      if (v.contains("features")) c.convex.features = v["features"].get<int>();
      if (v.contains("loss")) c.convex.loss = v["loss"].get<double>();
      if (v.contains("tau")) c.convex.tau = v["tau"].get<double>();
      if (v.contains("integral_samples")) c.convex.integral_samples = v["integral_samples"].get<long>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string config_json(const ExperimentConfig& c) {
  ojson j;
  j["model"] = ojson::parse(to_json(c.model));
  j["mode"] = c.mode ? ojson(mode_name(*c.mode)) : ojson(nullptr);
  j["N_max"] = c.N_max;
  j["K_max"] = c.K_max;
  j["n_nodes"] = c.n_nodes;
  j["M"] = c.M;
  j["horizons"] = c.horizons;
  j["n_replicates"] = c.n_replicates;
  j["mc_samples"] = c.mc_samples;
  j["gap_replicates"] = c.gap_replicates;
  j["xi"] = xi_grid(c);
  j["xi_distance"] = c.xi_distance;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["out"] = c.out;
  j["format"] = c.format;
  ojson v;
  v["body"] = c.convex.body;
  v["half_width"] = c.convex.half_width;
  v["radius"] = c.convex.radius;
  v["features"] = c.convex.features;
  v["loss"] = c.convex.loss;
  v["tau"] = c.convex.tau;
  v["integral_samples"] = c.convex.integral_samples;
  j["convex"] = v;
  return j.dump(2);
}

void validate(const ExperimentConfig& c, Mode mode) {
  if (c.mode && *c.mode != mode)
    throw ValidationError(std::string("config mode is ") + mode_name(*c.mode) + " but the command needs " +
                          mode_name(mode));
  validate(c.model, mode);
  if (c.N_max < 0 || c.N_max > 200) throw ValidationError("N_max must be in [0, 200]");
  if (c.K_max < 1 || c.K_max > 200) throw ValidationError("K_max must be in [1, 200]");
  if (c.n_nodes < 0) throw ValidationError("n_nodes must be >= 0");
  if (c.n_nodes > 0 && c.n_nodes < 2 * c.K_max) throw ValidationError("n_nodes must be at least 2 K_max");
  if (c.M < 2 || c.M > 40) throw ValidationError("M must be in [2, 40]");
  if (c.horizons.empty()) throw ValidationError("horizons must not be empty");
  for (double T : c.horizons)
    if (!(T >= 1.0 && T <= 1e5)) throw ValidationError("horizons must lie in [1, 1e5]");
  if (c.n_replicates < 0) throw ValidationError("n_replicates must be >= 0");
  if (c.mc_samples < 0) throw ValidationError("mc_samples must be >= 0");
  if (c.gap_replicates < 0) throw ValidationError("gap_replicates must be >= 0");
  for (double x : c.xi)
    if (!std::isfinite(x)) throw ValidationError("xi values must be finite");
  if (c.threads < 1 || c.threads > 256) throw ValidationError("threads must be in [1, 256]");
  if (c.out.empty()) throw ValidationError("out must not be empty");
  if (c.format != "csv" && c.format != "json") throw ValidationError("format must be csv or json");
  if (mode == Mode::convex) {
    body_from_name(c.convex.body);
    if (!(c.convex.half_width > 0.0) || !(c.convex.radius > 0.0)) throw ValidationError("body size must be positive");
    if (c.convex.features < 2 || c.convex.features > 4096) throw ValidationError("convex.features must be in [2, 4096]");
    if (c.convex.integral_samples < 1000) throw ValidationError("convex.integral_samples must be >= 1000");
  }
}

int resolved_nodes(const ExperimentConfig& c, double T) {
  if (c.n_nodes > 0) return c.n_nodes;
  if (T <= 100.0) return std::max(4 * c.K_max, static_cast<int>(std::ceil(8.0 * T)) + 40);
  return std::max(120, 2 * c.K_max);
}

std::string render_table(const CsvTable& t, const std::string& format) {
  if (format == "csv") return t.str();
  if (format != "json") throw ValidationError("format must be csv or json");
  ojson j;
  j["columns"] = t.header();
  ojson rows = ojson::array();
  for (const auto& r : t.rows()) {
    ojson row = ojson::array();
    for (const auto& cell : r) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (!cell.empty() && res.ec == std::errc() && res.ptr == cell.data() + cell.size() && std::isfinite(v))
        row.push_back(v);
      else
        row.push_back(cell);
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

CommandResult cmd_spectra(const ExperimentConfig& c) {
  validate(c, Mode::sphere);
  const auto& p = c.model;
  Writer w(c);
  CsvTable ang_t({"T", "n", "multiplicity", "B_n", "method"});
  CsvTable tmp_t({"T", "k", "eigenvalue", "method", "nodes"});
  for (double T : c.horizons) {
    const auto a = angular_coeffs(p, std::pow(T, p.gamma), c.N_max);
    for (int n = 0; n <= c.N_max; ++n)
      ang_t.add({fmt_T(T), fmt(static_cast<long long>(n)), fmt(a.dims[n]), fmt(a.coeffs[n]), a.method});
    const auto te = temporal_at(c, T);
    for (std::size_t k = 0; k < te.eigenvalues.size(); ++k)
      tmp_t.add({fmt_T(T), fmt(static_cast<long long>(k + 1)), fmt(te.eigenvalues[k]), te.method,
                 fmt(static_cast<long long>(resolved_nodes(c, T)))});
  }
  w.table("angular", ang_t);
  w.table("temporal", tmp_t);

  std::vector<std::string> report;
  if (p.svf == Svf::constant) {
    const auto s = riesz_spectrum(p, c.N_max, c.K_max);
    CsvTable lim({"factor", "index", "multiplicity", "value", "source"});
    for (std::size_t i = 0; i < s.spatial.values.size(); ++i)
      lim.add({"spatial", fmt(static_cast<long long>(i)), fmt(s.spatial.dims[i]), fmt(s.spatial.values[i]),
               p.gamma > 0.0 ? "riesz_funk_hecke" : "angular_R1"});
    for (std::size_t i = 0; i < s.temporal.values.size(); ++i)
      lim.add({"temporal", fmt(static_cast<long long>(s.temporal.first_index + i)), "1", fmt(s.temporal.values[i]),
               "riesz_galerkin"});
    w.table("limit_spectrum", lim);
    CsvTable tails({"factor", "m", "retained", "tail", "tail_uncertainty", "fit_p", "fit_b", "fit_rms"});
    for (int m = 2; m <= c.M; ++m)
      for (const auto* seq : {&s.spatial, &s.temporal}) {
        tails.add({seq == &s.spatial ? "spatial" : "temporal", fmt(static_cast<long long>(m)),
                   fmt(seq->power_sum(m, false)), fmt(seq->tail.sum(m)), fmt(seq->tail.uncertainty(m)),
                   fmt(seq->tail.model.p), fmt(seq->tail.model.b), fmt(seq->tail.model.rms_residual)});
      }
    w.table("tails", tails);
    report.push_back("limit spectrum: B0 = " + fmt(s.spatial.values[0]) + ", B1(time) = " + fmt(s.temporal.values[0]));
  } else {
    report.push_back("svf = log: limit spectrum skipped (no Riesz limit with unit constant)");
  }
  return w.finish("spectra", report);
}

namespace {

void require_constant_svf(const ExperimentConfig& c, const char* cmd) {
  if (c.model.svf != Svf::constant)
    throw ValidationError(std::string(cmd) + " compares against the Riesz limit and needs svf = constant");
}

}  // namespace

CommandResult cmd_cumulants(const ExperimentConfig& c) {
  validate(c, Mode::sphere);
  require_constant_svf(c, "cumulants");
  Writer w(c);
  const auto s = riesz_spectrum(c.model, c.N_max, c.K_max);
  const auto ct = cumulants_spectral(s, c.M);
  CsvTable t({"m", "method", "value", "stderr", "truncated", "tail"});
  for (int m = 2; m <= c.M; ++m) {
    const auto tp = trace_power(s, m);
    t.add({fmt(static_cast<long long>(m)), ct.method, fmt(ct.c(m)), fmt(ct.err(m)), fmt(tp.truncated), fmt(tp.tail)});
  }
  std::vector<std::string> report;
  if (c.mc_samples > 0 && c.model.d <= 2) {
    CsvTable dual({"m", "spectral", "spectral_stderr", "montecarlo", "montecarlo_stderr", "z", "agree_3_stderr"});
    for (int m : {2, 3}) {
      if (m > c.M) break;
      const auto e = cumulants_montecarlo(c.model, m, c.mc_samples, c.seed);
      t.add({fmt(static_cast<long long>(m)), "montecarlo", fmt(e.value), fmt(e.stderr_), "", ""});
      const double se = std::hypot(e.stderr_, ct.err(m));
      const double z = (e.value - ct.c(m)) / se;
      dual.add({fmt(static_cast<long long>(m)), fmt(ct.c(m)), fmt(ct.err(m)), fmt(e.value), fmt(e.stderr_), fmt(z),
                std::abs(z) <= 3.0 ? "yes" : "no"});
      report.push_back("c" + std::to_string(m) + ": spectral " + fmt(ct.c(m)) + ", montecarlo " + fmt(e.value) +
                       " +- " + fmt(e.stderr_) + (std::abs(z) <= 3.0 ? " (agree)" : " (DISAGREE)"));
    }
    w.table("cumulants", t);
    w.table("cumulant_duality", dual);
  } else {
    w.table("cumulants", t);
    report.push_back("c2 = " + fmt(ct.c(2)) + "; montecarlo route skipped");
  }
  return w.finish("cumulants", report);
}

CommandResult cmd_cf(const ExperimentConfig& c) {
  validate(c, Mode::sphere);
  require_constant_svf(c, "cf");
  Writer w(c);
  const auto xi = xi_grid(c);
  const auto s = riesz_spectrum(c.model, c.N_max, c.K_max);
  const auto tc = tail_cumulants(s, 40);
  const auto lim = limit_cf(s, xi);
  CsvTable t({"T", "xi", "re", "im", "method"});
  for (std::size_t i = 0; i < xi.size(); ++i)
    t.add({"inf", fmt(xi[i]), fmt(lim.values[i].real()), fmt(lim.values[i].imag()), lim.method});
  std::vector<std::string> report;
  for (double T : c.horizons) {
    const auto ang = angular_coeffs(c.model, std::pow(T, c.model.gamma), c.N_max);
    const auto te = temporal_at(c, T);
    const auto cf = finite_T_cf(ang, te.eigenvalues, kappa_dT(c.model, T), xi, 40, &tc);
    double dist = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      t.add({fmt_T(T), fmt(xi[i]), fmt(cf.values[i].real()), fmt(cf.values[i].imag()), cf.method});
      dist = std::max(dist, std::abs(cf.values[i] - lim.values[i]));
    }
    report.push_back("T = " + fmt(T) + ": sup |psi_T - psi| = " + fmt(dist));
  }
  w.table("cf", t);
  return w.finish("cf", report);
}

CommandResult cmd_converge(const ExperimentConfig& c) {
  validate(c, Mode::sphere);
  require_constant_svf(c, "converge");
  const auto& p = c.model;
  if (p.d > 2 && c.gap_replicates > 0) throw ValidationError("converge: the coupled field sampler supports d <= 2");
  Writer w(c);
  const auto s = riesz_spectrum(p, c.N_max, c.K_max);
  const auto tc = tail_cumulants(s, 40);
  const std::vector<double> xd{c.xi_distance};
  const auto lim = limit_cf(s, xd);
  const auto lim_c = cumulants_spectral(s, c.M);
  const double var_inf = 2.0 * lim_c.c(2);

  std::vector<long long> dims;
  std::vector<double> dims_d;
  for (int n = 0; n <= c.N_max; ++n) {
    dims.push_back(eigenspace_dim(n, p.d));
    dims_d.push_back(static_cast<double>(dims.back()));
  }
  const std::vector<double> s_inf(s.spatial.values.begin(), s.spatial.values.begin() + c.N_max + 1);
  const std::vector<double> t_inf(s.temporal.values.begin(), s.temporal.values.begin() + c.K_max);
  const auto lim_trunc = cumulants_from_weights(s_inf, dims_d, t_inf, c.M);

  CsvTable conv({"T", "xi", "cf_distance", "gap_exact", "gap_mc", "gap_mc_stderr", "gap_over_var", "temporal_method",
                 "nodes"});
  CsvTable cum({"T", "m", "finite_T", "limit_truncated"});
  CsvTable route({"T", "xi", "product_re", "product_im", "trace_re", "trace_im", "abs_diff"});
  std::vector<std::string> report;
  std::vector<double> dists, gaps;
  for (double T : c.horizons) {
    const auto ang = angular_coeffs(p, std::pow(T, p.gamma), c.N_max);
    const auto te = temporal_at(c, T);
    const double dT = kappa_dT(p, T);
    const auto cf = finite_T_cf(ang, te.eigenvalues, dT, xd, 40, &tc);
    const double dist = std::abs(cf.values[0] - lim.values[0]);
    // S_T weights carry 1/d_T on the spatial factor; the product is what matters
    std::vector<double> sT;
    for (double b : ang.coeffs) sT.push_back(b / dT);
    const double gap = coupled_gap_exact(sT, te.eigenvalues, s_inf, t_inf, dims);
    double gap_mc = 0.0, gap_se = 0.0;
    if (c.gap_replicates > 0) {
      double sum = 0.0, sum2 = 0.0;
      for (long r = 0; r < c.gap_replicates; ++r) {
        const auto field = sample_field(p.d, c.N_max, c.K_max, T, p.gamma, c.seed, static_cast<std::uint64_t>(r));
        const double a = functional_S_T(field, sT, te.eigenvalues, 1.0).value;
        const double b = functional_S_T(field, s_inf, t_inf, 1.0).value;
        const double e = (a - b) * (a - b);
        sum += e;
        sum2 += e * e;
      }
      const double n = static_cast<double>(c.gap_replicates);
      gap_mc = sum / n;
      gap_se = n > 1 ? std::sqrt(std::max(0.0, sum2 / n - gap_mc * gap_mc) / (n - 1.0)) : 0.0;
    }
    conv.add({fmt_T(T), fmt(c.xi_distance), fmt(dist), fmt(gap), fmt(gap_mc), fmt(gap_se), fmt(gap / var_inf), te.method,
              fmt(static_cast<long long>(resolved_nodes(c, T)))});
    const auto ct = cumulants_from_weights(sT, dims_d, te.eigenvalues, c.M);
    for (int m = 2; m <= c.M; ++m)
      cum.add({fmt_T(T), fmt(static_cast<long long>(m)), fmt(ct.c(m)), fmt(lim_trunc.c(m))});
    if (T == 1.0) {
      // uncentered T = 1 family: product against exp-trace inside the trace-series radius
      std::vector<double> wts, mult;
      double wmax = 0.0;
      for (std::size_t n = 0; n < sT.size(); ++n)
        for (double b : te.eigenvalues) {
          wts.push_back(sT[n] * b);
          mult.push_back(dims_d[n]);
          wmax = std::max(wmax, wts.back());
        }
      double worst = 0.0;
      const double r = 0.5 / wmax;
      for (double f : {-0.8, -0.4, -0.1, 0.1, 0.4, 0.8}) {
        const double x = f * r;
        const auto a = cf_product_uncentered(wts, mult, x), b = cf_trace_uncentered(wts, mult, x);
        route.add({"1", fmt(x), fmt(a.real()), fmt(a.imag()), fmt(b.real()), fmt(b.imag()), fmt(std::abs(a - b))});
        worst = std::max(worst, std::abs(a - b));
      }
      report.push_back("T = 1: product vs exp-trace max difference " + fmt(worst) + " on " +
                       std::to_string(route.rows().size()) + " points");
    }
    dists.push_back(dist);
    gaps.push_back(gap);
  }
  auto decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return true;
  };
  report.push_back(std::string("cf distance strictly decreasing: ") + (decreasing(dists) ? "yes" : "no"));
  report.push_back(std::string("coupled gap strictly decreasing: ") + (decreasing(gaps) ? "yes" : "no") +
                   ", final gap / Var S_inf = " + fmt(gaps.back() / var_inf));
  w.table("converge", conv);
  w.table("cumulants_T", cum);
  if (!route.rows().empty()) w.table("route_check_T1", route);
  return w.finish("converge", report);
}

CommandResult cmd_convex(const ExperimentConfig& c) {
  validate(c, Mode::convex);
  require_constant_svf(c, "convex");
  const auto& p = c.model;
  const int D = p.d + 1;
  const auto kind = body_from_name(c.convex.body);
  const ConvexBody K = kind == BodyKind::box ? make_box(D, c.convex.half_width) : make_ball(D, c.convex.radius);
  const auto grid = make_spectral_grid(K, p, c.convex.features, c.convex.loss, c.convex.tau);
  Writer w(c);
  CsvTable k({"quantity", "value"});
  k.add({"body", body_name(kind)});
  k.add({"D", fmt(static_cast<long long>(D))});
  k.add({"volume", fmt(K.volume())});
  k.add({"diameter", fmt(K.diameter())});
  k.add({"riesz_constant", fmt(riesz_constant(D, p.alpha_s, p.alpha_t))});
  k.add({"Lambda", fmt(grid.Lambda)});
  k.add({"Omega", fmt(grid.Omega)});
  k.add({"spectral_mass", fmt(grid.mass)});
  k.add({"loss_spatial", fmt(grid.loss_spatial)});
  k.add({"loss_temporal", fmt(grid.loss_temporal)});
  k.add({"features", fmt(static_cast<long long>(grid.L))});
  k.add({"tau", fmt(grid.tau)});
  w.table("convex_grid", k);
  CsvTable ind({"lambda_1", "indicator_ft"});
  std::vector<double> lam(D, 0.0);
  for (double x : {0.5, 1.0, 2.0}) {
    lam[0] = x;
    ind.add({fmt(x), fmt(indicator_ft(K, lam.data()).real())});
  }
  w.table("indicator_ft", ind);
  std::vector<std::string> report;
  if (c.n_replicates > 0) {
    const auto ri = riesz_double_integral(K, p.alpha_s, p.alpha_t, c.convex.integral_samples, c.seed);
    const auto xs = sample_convex_limit(K, p, grid, c.n_replicates, c.seed, c.threads);
    const auto mo = moments(xs.values, static_cast<int>(std::min<long>(100, std::max<long>(1, c.n_replicates / 10))));
    const double target = 2.0 * ri.value, target_se = 2.0 * ri.stderr_;
    const double se = std::hypot(mo.variance_stderr, target_se);
    const double z = (mo.variance - target) / se;
    const double mean_se = std::sqrt(mo.variance / static_cast<double>(mo.n));
    CsvTable d({"quantity", "value", "stderr"});
    d.add({"sample_mean", fmt(mo.mean), fmt(mean_se)});
    d.add({"sample_variance", fmt(mo.variance), fmt(mo.variance_stderr)});
    d.add({"physical_variance", fmt(target), fmt(target_se)});
    d.add({"spatial_integral", fmt(ri.spatial), fmt(ri.spatial_stderr)});
    d.add({"temporal_integral", fmt(ri.temporal), fmt(ri.temporal_stderr)});
    d.add({"temporal_exact", fmt(std::pow(2.0, 3.0 - 2.0 * p.alpha_t) / ((1.0 - 2.0 * p.alpha_t) * (2.0 - 2.0 * p.alpha_t))),
           "0"});
    d.add({"z_variance", fmt(z), ""});
    d.add({"max_imag", fmt(xs.max_imag), ""});
    w.table("convex_duality", d);
    CsvTable smp({"replicate", "value"});
    for (std::size_t r = 0; r < xs.values.size(); ++r) smp.add({fmt(static_cast<long long>(r)), fmt(xs.values[r])});
    w.table("convex_samples", smp);
    report.push_back(std::string("variance duality ") + (std::abs(z) <= 3.0 ? "PASS" : "FAIL") + ": sample " +
                     fmt(mo.variance) + " vs physical " + fmt(target) + ", combined stderr " + fmt(se));
  } else {
    report.push_back("dry run: grid and constants only");
  }
  return w.finish("convex", report);
}

CommandResult cmd_sample(const ExperimentConfig& c) {
  validate(c, Mode::sphere);
  require_constant_svf(c, "sample");
  if (c.n_replicates < 1) throw ValidationError("sample: n_replicates must be >= 1");
  Writer w(c);
  const auto s = riesz_spectrum(c.model, c.N_max, c.K_max);
  const auto ct = cumulants_spectral(s, 3);
  SampleOptions opt;
  opt.threads = c.threads;
  const auto x = sample_S_infinity(s, c.n_replicates, c.seed, opt);
  CsvTable smp({"replicate", "value"});
  for (std::size_t r = 0; r < x.size(); ++r) smp.add({fmt(static_cast<long long>(r)), fmt(x[r])});
  w.table("samples", smp);
  std::vector<std::string> report;
  if (x.size() >= 30) {
    const auto mo = moments(x, static_cast<int>(std::min<std::size_t>(100, x.size() / 10)));
    CsvTable sum({"quantity", "value", "stderr", "target"});
    sum.add({"mean", fmt(mo.mean), fmt(std::sqrt(mo.variance / static_cast<double>(mo.n))), "0"});
    sum.add({"variance", fmt(mo.variance), fmt(mo.variance_stderr), fmt(2.0 * ct.c(2))});
    sum.add({"k3", fmt(mo.k3), fmt(mo.k3_stderr), fmt(8.0 * ct.c(3))});
    w.table("sample_summary", sum);
    const auto xi = xi_grid(c);
    const auto lim = limit_cf(s, xi);
    CsvTable cf({"xi", "empirical_re", "empirical_im", "limit_re", "limit_im", "abs_diff"});
    double dev = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const auto e = empirical_cf(x, xi[i]);
      cf.add({fmt(xi[i]), fmt(e.real()), fmt(e.imag()), fmt(lim.values[i].real()), fmt(lim.values[i].imag()),
              fmt(std::abs(e - lim.values[i]))});
      dev = std::max(dev, std::abs(e - lim.values[i]));
    }
    w.table("sample_cf", cf);
    report.push_back("variance " + fmt(mo.variance) + " vs 2 c2 = " + fmt(2.0 * ct.c(2)) + "; sup CF deviation " +
                     fmt(dev));
  }
  return w.finish("sample", report);
}

CommandResult run_command(const std::string& name, const ExperimentConfig& c) {
  if (name == "spectra") return cmd_spectra(c);
  if (name == "cumulants") return cmd_cumulants(c);
  if (name == "cf") return cmd_cf(c);
  if (name == "converge") return cmd_converge(c);
  if (name == "convex") return cmd_convex(c);
  if (name == "sample") return cmd_sample(c);
  throw ValidationError("unknown command '" + name + "'");
}

}  // namespace strf

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "strf/error.hpp"
#include "strf/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"strf: long-range dependent random fields on spheres and convex sets"};
  app.set_version_flag("--version", strf::library_version());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, format;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));

  const char* commands[][2] = {
      {"spectra", "angular, temporal and limit spectra with tail fits"},
      {"cumulants", "limit cumulants, spectral route against Monte Carlo"},
      {"cf", "limit and finite-T characteristic functions"},
      {"converge", "CF distance and coupled mean-square gap over the horizons"},
      {"convex", "convex-body limit sampler and variance duality"},
      {"sample", "chi-squared series samples of the limit"},
  };
  for (const auto& c : commands) app.add_subcommand(c[0], c[1])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : strf::exit_code(strf::ErrorKind::validation);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    strf::ExperimentConfig cfg = config_path.empty() ? strf::ExperimentConfig{} : strf::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out) cfg.out = *out;
    if (format) cfg.format = *format;
    if (threads) cfg.threads = *threads;
    const auto res = strf::run_command(name, cfg);
    for (const auto& line : res.report) std::cout << line << '\n';
    for (const auto& f : res.files) std::cout << "wrote " << cfg.out << '/' << f << '\n';
    return 0;
  } catch (const strf::Error& e) {
    std::cerr << "strf " << name << ": " << strf::kind_name(e.kind()) << " error: " << e.what() << '\n';
    return strf::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "strf " << name << ": internal error: " << e.what() << '\n';
    return strf::exit_code(strf::ErrorKind::consistency);
  }
}

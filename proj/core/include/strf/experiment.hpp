#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strf/csv.hpp"
#include "strf/model.hpp"

namespace strf {

struct ConvexSettings {
  std::string body = "box";
  double half_width = 1.0;          // box [-a, a]^{d+1}
  double radius = 1.0;              // ball
  int features = 128;
  double loss = 4e-3;
  double tau = 0.5;
  long integral_samples = 4000000;
};

struct ExperimentConfig {
  ModelParams model;
  std::optional<Mode> mode;         // unset: the command's own mode
  int N_max = 30;
  int K_max = 50;
  int n_nodes = 0;                  // 0: chosen per horizon
  int M = 8;                        // highest cumulant in tables
  std::vector<double> horizons{10.0, 100.0, 1000.0};
  long n_replicates = 10000;
  long mc_samples = 1000000;
  long gap_replicates = 1000;
  std::vector<double> xi;           // empty: 21 points on [-0.3, 0.3]
  double xi_distance = 0.2;
  std::uint64_t seed = 42;
  int threads = 1;
  std::string out = "out";
  std::string format = "csv";
  ConvexSettings convex;
};

// JSON with the model keys (d, gamma, alpha_s, alpha_t, svf, rho_s, rho_t) at the top level or under
// "model". Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_json(const ExperimentConfig& c);

// Range checks for everything a command reads; run before any computation.
void validate(const ExperimentConfig& c, Mode mode);

const char* library_version();

// Temporal basis or node count actually used at horizon T.
int resolved_nodes(const ExperimentConfig& c, double T);

struct CommandResult {
  std::vector<std::string> files;   // written, relative to c.out
  std::vector<std::string> report;  // one-line summaries
};

CommandResult cmd_spectra(const ExperimentConfig& c);
CommandResult cmd_cumulants(const ExperimentConfig& c);
CommandResult cmd_cf(const ExperimentConfig& c);
CommandResult cmd_converge(const ExperimentConfig& c);
CommandResult cmd_convex(const ExperimentConfig& c);
CommandResult cmd_sample(const ExperimentConfig& c);

// Dispatch by name; throws ValidationError for unknown commands.
CommandResult run_command(const std::string& name, const ExperimentConfig& c);

// Table as CSV or as a JSON object {"columns": [...], "rows": [[...]]} with numeric cells unquoted.
std::string render_table(const CsvTable& t, const std::string& format);

}  // namespace strf

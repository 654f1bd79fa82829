#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dicke/observables.hpp"

namespace dicke {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Model { Rwa, A2, FullDm };

std::string to_string(Model m);
Model model_from_string(const std::string& s);

struct SweepConfig {
  Model model = Model::Rwa;
  int n_atoms = 1;
  double omega = 1.0;
  double omega0 = 1.0;
  std::vector<double> epsilon_list{0.0};
  double lambda_start = 0.0;
  double lambda_stop = 2.0;
  double lambda_step = 0.01;
  std::set<std::string> outputs{"energy", "gap",      "gamma1",
                                "gamma2", "fidelity", "derivative"};
  // tolerances
  double e_tol = 1e-10;
  double b_tol = 1e-10;
  double f_threshold = 0.5;
  std::optional<double> h;             // derivative step; default: grid step
  std::optional<double> delta_lambda;  // fidelity step; default: grid step
  int ntr_cap = 4096;
  int jobs = 0;  // 0 = hardware concurrency
  std::string output_path = "out";
  std::string gamma2_frame = "a";  // "a" (physical) or "b" (transformed)

  void validate() const;
};

SweepConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const SweepConfig& c);
SweepConfig load_config_file(const std::string& path);

struct SweepResult {
  double epsilon = 0.0;
  std::vector<SweepRecord> records;
  std::vector<double> transitions;  // from fidelity drops
  int max_ntr = 0;
  double wall_time_s = 0.0;
  // Set when a grid point failed to converge; records then hold the grid
  // prefix before the first failure.
  bool incomplete = false;
  std::string error;
};

// Sweep one epsilon over the lambda grid. Grid points are independent and
// run on `jobs` workers; the result is identical for any worker count.
SweepResult run_sweep(const SweepConfig& config, double epsilon);

// Fixed CSV layout, 17 significant digits, LF line endings.
extern const char* const kCsvHeader;
std::string format_csv(const std::vector<SweepRecord>& records);

// Full driver: one CSV per (model, epsilon) plus one JSON summary under
// config.output_path. Returns the process exit status (0 ok, 2 solver
// failure with a partial CSV flushed).
int run(const SweepConfig& config);

}  // namespace dicke

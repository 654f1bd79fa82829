#include "dicke/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "dicke/log.hpp"

namespace dicke {

namespace {

using nlohmann::ordered_json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

int worker_count(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(0..n-1) on `jobs` workers. All indices are always attempted;
// the lowest failing index (if any) is reported so partial output stays
// deterministic regardless of scheduling.
struct ParallelStatus {
  bool failed = false;
  std::size_t first_failed = 0;
  std::string what;
};

ParallelStatus parallel_for(std::size_t n, int jobs,
                            const std::function<void(std::size_t)>& fn) {
  ParallelStatus status;
  const int nw = std::min<std::size_t>(worker_count(jobs), n == 0 ? 1 : n);
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (const std::exception& ex) {
        if (!status.failed || i < status.first_failed) {
          status = {true, i, ex.what()};
        }
      }
    }
    return status;
  }

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(mu);
        if (!status.failed || i < status.first_failed) {
          status = {true, i, ex.what()};
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int t = 0; t < nw; ++t) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  return status;
}

std::vector<double> lambda_grid(const SweepConfig& c) {
  const std::size_t n = static_cast<std::size_t>(
      std::floor((c.lambda_stop - c.lambda_start) / c.lambda_step + 1e-9));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid[i] = c.lambda_start + static_cast<double>(i) * c.lambda_step;
  }
  return grid;
}

// ---------------------------------------------------------------------
// Model drivers: one uniform shape over the RWA and truncated paths so the
// sweep engine is written once.
// ---------------------------------------------------------------------

struct RwaDriver {
  using State = RwaGroundState;
  ModelParams base;

  State solve(double lambda) const {
    ModelParams p = base;
    p.lambda = lambda;
    return ground_state(p);
  }
  static double gamma1_raw(const State& s) { return berry_phase_jz(s).raw; }
  double gamma2_raw(const State& s) const {
    return berry_phase_photon(s).raw;
  }
  static double overlap(const State& a, const State& b) {
    return fidelity(a, b);
  }
  static double gap(const State& s) { return energy_gap(s); }
  static double energy(const State& s) { return s.energy; }
  static long excitation(const State& s) { return s.sector.excitation; }
  static int ntr(const State&) { return 0; }
};

struct TruncatedDriver {
  using State = TruncatedGroundState;
  ModelParams base;
  bool full_dm = false;
  TruncationPolicy policy;
  SolverOptions opts;
  PhotonFrame frame = PhotonFrame::Original;

  State solve(double lambda) const {
    ModelParams p = base;
    p.lambda = lambda;
    return full_dm ? ground_state_full_dm(p, policy, opts)
                   : ground_state_a2(p, policy, opts);
  }
  static double gamma1_raw(const State& s) { return berry_phase_jz(s).raw; }
  double gamma2_raw(const State& s) const {
    return berry_phase_photon(s, frame).raw;
  }
  static double overlap(const State& a, const State& b) {
    return fidelity(a, b);
  }
  static double gap(const State& s) { return energy_gap(s); }
  static double energy(const State& s) { return s.energy; }
  static long excitation(const State&) { return -1; }
  static int ntr(const State& s) { return s.ntr; }
};

template <class Driver>
std::pair<std::vector<SweepRecord>, ParallelStatus> sweep_points(
    const Driver& driver, const SweepConfig& config, double epsilon) {
  const std::vector<double> grid = lambda_grid(config);
  const std::size_t n = grid.size();
  const bool neighbor_fidelity = !config.delta_lambda.has_value();
  const bool grid_derivative = !config.h.has_value();

  // Pass 1: base states; one extra point past the grid end when the
  // fidelity partner is the grid neighbor.
  const std::size_t n_states = neighbor_fidelity ? n + 1 : n;
  std::vector<typename Driver::State> states(n_states);
  auto solve_at = [&](std::size_t i) {
    const double lam = config.lambda_start +
                       static_cast<double>(i) * config.lambda_step;
    states[i] = driver.solve(lam);
  };
  const ParallelStatus st1 = parallel_for(n_states, config.jobs, solve_at);

  // Pass 2: records. Fidelity partners / derivative stencils may need extra
  // solves when explicit delta_lambda or h were given. A record written for
  // index i only reads states [i-1, i+1], so after a pass-1 failure at f the
  // prefix [0, f-1) still comes out byte-identical to a complete run.
  auto fill_record = [&](std::size_t i) {
    const typename Driver::State& s = states[i];
    SweepRecord r;
    r.lambda = grid[i];
    r.epsilon = epsilon;
    r.n_atoms = config.n_atoms;
    r.energy = Driver::energy(s);
    r.gap = Driver::gap(s);
    const BerryPhase g1 = make_berry_phase(Driver::gamma1_raw(s),
                                           config.n_atoms);
    r.gamma1_per_atom_raw = g1.per_atom_raw;
    r.gamma1_per_atom_reduced = g1.per_atom_reduced;
    r.gamma2_per_atom = driver.gamma2_raw(s) / config.n_atoms;
    r.excitation_L = Driver::excitation(s);
    r.ntr = Driver::ntr(s);

    if (neighbor_fidelity) {
      r.fidelity = Driver::overlap(s, states[i + 1]);
    } else {
      r.fidelity = Driver::overlap(s, driver.solve(grid[i] +
                                                   *config.delta_lambda));
    }

    if (grid_derivative) {
      const std::size_t lo = i > 0 ? i - 1 : 0;
      const std::size_t hi = i + 1 < n ? i + 1 : n - 1;
      if (hi > lo) {
        r.dgamma1_dlambda =
            (Driver::gamma1_raw(states[hi]) - Driver::gamma1_raw(states[lo])) /
            (static_cast<double>(hi - lo) * config.lambda_step);
      }
    } else {
      const double h = *config.h;
      r.dgamma1_dlambda = (Driver::gamma1_raw(driver.solve(grid[i] + h)) -
                           Driver::gamma1_raw(driver.solve(grid[i] - h))) /
                          (2.0 * h);
    }
    return r;
  };

  if (st1.failed) {
    std::vector<SweepRecord> prefix;
    const std::size_t usable =
        std::min(n, st1.first_failed > 1 ? st1.first_failed - 1 : 0);
    for (std::size_t i = 0; i < usable; ++i) {
      try {
        prefix.push_back(fill_record(i));
      } catch (const std::exception&) {
        break;  // an explicit-h/delta partner solve failed too
      }
    }
    return {std::move(prefix), st1};
  }

  std::vector<SweepRecord> records(n);
  ParallelStatus st2 = parallel_for(
      n, config.jobs, [&](std::size_t i) { records[i] = fill_record(i); });
  if (st2.failed) {
    records.resize(st2.first_failed);
    return {std::move(records), st2};
  }
  return {std::move(records), ParallelStatus{}};
}

}  // namespace

std::string to_string(Model m) {
  switch (m) {
    case Model::Rwa: return "rwa";
    case Model::A2: return "a2";
    case Model::FullDm: return "full_dm";
  }
  return "?";
}

Model model_from_string(const std::string& s) {
  if (s == "rwa") return Model::Rwa;
  if (s == "a2") return Model::A2;
  if (s == "full_dm") return Model::FullDm;
  throw ConfigError("unknown model '" + s + "' (rwa|a2|full_dm)");
}

void SweepConfig::validate() const {
  if (!(lambda_step > 0.0)) throw ConfigError("lambda_step must be > 0");
  if (!(lambda_start < lambda_stop)) {
    throw ConfigError("lambda_start must be < lambda_stop");
  }
  if (epsilon_list.empty()) throw ConfigError("epsilon_list must be nonempty");
  if (model == Model::Rwa) {
    for (double e : epsilon_list) {
      if (e != 0.0) throw ConfigError("model rwa requires epsilon_list == {0}");
    }
  }
  for (double e : epsilon_list) {
    if (e < 0.0) throw ConfigError("epsilon must be >= 0");
  }
  if (n_atoms < 1) throw ConfigError("n_atoms must be >= 1");
  if (!(omega > 0.0) || !(omega0 > 0.0)) {
    throw ConfigError("omega and omega0 must be > 0");
  }
  if (h.has_value() && !(*h > 0.0)) throw ConfigError("h must be > 0");
  if (delta_lambda.has_value() && !(*delta_lambda > 0.0)) {
    throw ConfigError("delta_lambda must be > 0");
  }
  if (ntr_cap < 16) throw ConfigError("ntr_cap must be >= 16");
  if (gamma2_frame != "a" && gamma2_frame != "b") {
    throw ConfigError("gamma2_frame must be 'a' or 'b'");
  }
}

SweepConfig config_from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config parse error: ") + ex.what());
  }
  SweepConfig c;
  try {
    if (j.contains("model")) c.model = model_from_string(j["model"]);
    if (j.contains("n_atoms")) c.n_atoms = j["n_atoms"];
    if (j.contains("omega")) c.omega = j["omega"];
    if (j.contains("omega0")) c.omega0 = j["omega0"];
    if (j.contains("epsilon_list")) {
      c.epsilon_list = j["epsilon_list"].get<std::vector<double>>();
    }
    if (j.contains("lambda_start")) c.lambda_start = j["lambda_start"];
    if (j.contains("lambda_stop")) c.lambda_stop = j["lambda_stop"];
    if (j.contains("lambda_step")) c.lambda_step = j["lambda_step"];
    if (j.contains("outputs")) {
      c.outputs.clear();
      for (const auto& o : j["outputs"]) c.outputs.insert(o.get<std::string>());
    }
    if (j.contains("e_tol")) c.e_tol = j["e_tol"];
    if (j.contains("b_tol")) c.b_tol = j["b_tol"];
    if (j.contains("f_threshold")) c.f_threshold = j["f_threshold"];
    if (j.contains("h") && !j["h"].is_null()) c.h = j["h"].get<double>();
    if (j.contains("delta_lambda") && !j["delta_lambda"].is_null()) {
      c.delta_lambda = j["delta_lambda"].get<double>();
    }
    if (j.contains("ntr_cap")) c.ntr_cap = j["ntr_cap"];
    if (j.contains("jobs")) c.jobs = j["jobs"];
    if (j.contains("output_path")) c.output_path = j["output_path"];
    if (j.contains("gamma2_frame")) c.gamma2_frame = j["gamma2_frame"];
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config field error: ") + ex.what());
  }
  return c;
}

std::string config_to_json_text(const SweepConfig& c) {
  ordered_json j;
  j["model"] = to_string(c.model);
  j["n_atoms"] = c.n_atoms;
  j["omega"] = c.omega;
  j["omega0"] = c.omega0;
  j["epsilon_list"] = c.epsilon_list;
  j["lambda_start"] = c.lambda_start;
  j["lambda_stop"] = c.lambda_stop;
  j["lambda_step"] = c.lambda_step;
  j["outputs"] = c.outputs;
  j["e_tol"] = c.e_tol;
  j["b_tol"] = c.b_tol;
  j["f_threshold"] = c.f_threshold;
  if (c.h.has_value()) {
    j["h"] = *c.h;
  } else {
    j["h"] = nullptr;
  }
  if (c.delta_lambda.has_value()) {
    j["delta_lambda"] = *c.delta_lambda;
  } else {
    j["delta_lambda"] = nullptr;
  }
  j["ntr_cap"] = c.ntr_cap;
  j["jobs"] = c.jobs;
  j["output_path"] = c.output_path;
  j["gamma2_frame"] = c.gamma2_frame;
  return j.dump(2);
}

SweepConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return config_from_json_text(text);
}

SweepResult run_sweep(const SweepConfig& config, double epsilon) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SweepResult result;
  result.epsilon = epsilon;

  ModelParams base;
  base.omega = config.omega;
  base.omega0 = config.omega0;
  base.epsilon = epsilon;
  base.n_atoms = config.n_atoms;

  ParallelStatus st;
  if (config.model == Model::Rwa) {
    RwaDriver driver{base};
    std::tie(result.records, st) = sweep_points(driver, config, epsilon);
  } else {
    TruncatedDriver driver;
    driver.base = base;
    driver.full_dm = (config.model == Model::FullDm);
    driver.policy.ntr_cap = config.ntr_cap;
    driver.policy.e_tol = config.e_tol;
    driver.policy.b_tol = config.b_tol;
    // sweeps prefer the Lanczos path earlier than the module default
    driver.opts.dense_threshold = 512;
    driver.frame = config.gamma2_frame == "b" ? PhotonFrame::Transformed
                                              : PhotonFrame::Original;
    std::tie(result.records, st) = sweep_points(driver, config, epsilon);
  }
  if (st.failed) {
    result.incomplete = true;
    result.error = "grid point " + std::to_string(st.first_failed) +
                   " failed: " + st.what;
  }

  for (const SweepRecord& r : result.records) {
    result.max_ntr = std::max(result.max_ntr, r.ntr);
  }
  if (!result.records.empty()) {
    result.transitions =
        detect_transitions_from_sweep(result.records, config.f_threshold);
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

const char* const kCsvHeader =
    "lambda,epsilon,N,L,energy,gap,gamma1_per_atom_raw,"
    "gamma1_per_atom_reduced,gamma2_per_atom,fidelity,dgamma1_dlambda";

std::string format_csv(const std::vector<SweepRecord>& records) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const SweepRecord& r : records) {
    out += fmt17(r.lambda);
    out.push_back(',');
    out += fmt17(r.epsilon);
    out.push_back(',');
    out += std::to_string(r.n_atoms);
    out.push_back(',');
    out += std::to_string(r.excitation_L);
    out.push_back(',');
    out += fmt17(r.energy);
    out.push_back(',');
    out += fmt17(r.gap);
    out.push_back(',');
    out += fmt17(r.gamma1_per_atom_raw);
    out.push_back(',');
    out += fmt17(r.gamma1_per_atom_reduced);
    out.push_back(',');
    out += fmt17(r.gamma2_per_atom);
    out.push_back(',');
    out += fmt17(r.fidelity);
    out.push_back(',');
    out += fmt17(r.dgamma1_dlambda);
    out.push_back('\n');
  }
  return out;
}

namespace {

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", eps);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

int run(const SweepConfig& config) {
  config.validate();
  const std::filesystem::path dir(config.output_path);
  std::filesystem::create_directories(dir);

  ordered_json summary;
  summary["model"] = to_string(config.model);
  summary["n_atoms"] = config.n_atoms;
  summary["omega"] = config.omega;
  summary["omega0"] = config.omega0;
  summary["config"] = ordered_json::parse(config_to_json_text(config));
  summary["sweeps"] = ordered_json::array();

  int exit_code = 0;
  for (double eps : config.epsilon_list) {
    const std::string csv_name =
        "sweep_" + to_string(config.model) + "_eps" + eps_tag(eps) + ".csv";
    ordered_json entry;
    entry["epsilon"] = eps;
    entry["csv"] = csv_name;

    const SweepResult res = run_sweep(config, eps);
    std::string csv = format_csv(res.records);
    if (res.incomplete) csv += "# INCOMPLETE\n";
    write_text(dir / csv_name, csv);

    entry["points"] = res.records.size();
    entry["transitions"] = res.transitions;
    if (res.transitions.empty()) {
      entry["first_lambda_c"] = nullptr;
    } else {
      entry["first_lambda_c"] = res.transitions.front();
    }
    entry["max_ntr"] = res.max_ntr;
    entry["wall_time_s"] = res.wall_time_s;
    entry["incomplete"] = res.incomplete;
    if (res.incomplete) {
      entry["error"] = res.error;
      log::error("sweep eps=" + eps_tag(eps) + " incomplete: " + res.error);
      exit_code = 2;
    } else {
      log::info("sweep eps=" + eps_tag(eps) + ": " +
                std::to_string(res.records.size()) + " points, " +
                std::to_string(res.transitions.size()) + " transitions");
    }
    summary["sweeps"].push_back(entry);
  }

  write_text(dir / ("summary_" + to_string(config.model) + ".json"),
             summary.dump(2) + "\n");
  return exit_code;
}

}  // namespace dicke

// Command-line driver: parameter sweeps, staircases, transition searches and
// gap queries over the RWA Dicke model and its A^2-term extensions.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dicke/a2_model.hpp"
#include "dicke/log.hpp"
#include "dicke/observables.hpp"
#include "dicke/rwa_model.hpp"
#include "dicke/spin_algebra.hpp"
#include "dicke/sweep.hpp"

namespace {

using dicke::Model;
using dicke::ModelParams;
using dicke::SweepConfig;

struct CommonFlags {
  std::string config_path;
  std::string model;
  int n_atoms = 0;
  double omega = 0.0, omega0 = 0.0;
  std::vector<double> eps;
  double from = 0.0, to = 0.0, step = 0.0;
  double delta_lambda = 0.0, h = 0.0;
  int ntr_cap = 0;
  int jobs = -1;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->set_help_flag("--help", "print help");  // frees -h for the step flag
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--model", f.model, "rwa|a2|full_dm");
  cmd->add_option("--n", f.n_atoms, "number of atoms N");
  cmd->add_option("--omega", f.omega, "field frequency");
  cmd->add_option("--omega0", f.omega0, "atomic level splitting");
  cmd->add_option("--eps", f.eps, "A^2 strengths (repeatable)");
  cmd->add_option("--from", f.from, "lambda grid start");
  cmd->add_option("--to", f.to, "lambda grid stop");
  cmd->add_option("--step", f.step, "lambda grid step");
  cmd->add_option("--delta-lambda", f.delta_lambda,
                  "fidelity perturbation (default: grid step)");
  cmd->add_option("--h", f.h, "derivative step (default: grid step)");
  cmd->add_option("--ntr-cap", f.ntr_cap, "Fock truncation cap");
  cmd->add_option("--jobs", f.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--out", f.out, "output directory");
}

SweepConfig make_config(const CLI::App* cmd, const CommonFlags& f) {
  SweepConfig c;
  if (!f.config_path.empty()) c = dicke::load_config_file(f.config_path);
  // explicit flags win over the config file
  if (cmd->count("--model")) c.model = dicke::model_from_string(f.model);
  if (cmd->count("--n")) c.n_atoms = f.n_atoms;
  if (cmd->count("--omega")) c.omega = f.omega;
  if (cmd->count("--omega0")) c.omega0 = f.omega0;
  if (cmd->count("--eps")) c.epsilon_list = f.eps;
  if (cmd->count("--from")) c.lambda_start = f.from;
  if (cmd->count("--to")) c.lambda_stop = f.to;
  if (cmd->count("--step")) c.lambda_step = f.step;
  if (cmd->count("--delta-lambda")) c.delta_lambda = f.delta_lambda;
  if (cmd->count("--h")) c.h = f.h;
  if (cmd->count("--ntr-cap")) c.ntr_cap = f.ntr_cap;
  if (cmd->count("--jobs")) c.jobs = f.jobs;
  if (cmd->count("--out")) c.output_path = f.out;
  c.validate();
  return c;
}

ModelParams params_from(const SweepConfig& c, double epsilon, double lambda) {
  ModelParams p;
  p.omega = c.omega;
  p.omega0 = c.omega0;
  p.lambda = lambda;
  p.epsilon = epsilon;
  p.n_atoms = c.n_atoms;
  return p;
}

int cmd_sweep(const CLI::App* cmd, const CommonFlags& f) {
  return dicke::run(make_config(cmd, f));
}

int cmd_staircase(const CLI::App* cmd, const CommonFlags& f) {
  SweepConfig c = make_config(cmd, f);
  const std::size_t n_pts = static_cast<std::size_t>(std::floor(
                                (c.lambda_stop - c.lambda_start) /
                                    c.lambda_step + 1e-9)) + 1;
  std::vector<double> grid(n_pts);
  for (std::size_t i = 0; i < n_pts; ++i) {
    grid[i] = c.lambda_start + static_cast<double>(i) * c.lambda_step;
  }
  ModelParams tmpl = params_from(c, 0.0, 0.0);
  const auto steps = dicke::excitation_staircase(tmpl, grid);

  std::string csv = "lambda,L\n";
  for (const auto& [lam, L] : steps) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g,%ld\n", lam, L);
    csv += buf;
  }
  const std::filesystem::path dir(c.output_path);
  std::filesystem::create_directories(dir);
  const std::string name =
      "staircase_rwa_N" + std::to_string(c.n_atoms) + ".csv";
  std::ofstream out(dir / name, std::ios::binary);
  out << csv;
  std::printf("wrote %s (%zu points, L in [%ld, %ld])\n",
              (dir / name).c_str(), steps.size(), steps.front().second,
              steps.back().second);
  return 0;
}

int cmd_transitions(const CLI::App* cmd, const CommonFlags& f, double tol) {
  SweepConfig c = make_config(cmd, f);
  nlohmann::ordered_json out;
  if (c.model == Model::Rwa) {
    ModelParams tmpl = params_from(c, 0.0, 0.0);
    out = dicke::find_transitions(tmpl, c.lambda_start, c.lambda_stop, tol);
  } else {
    // grid sweep + fidelity-drop detection for the non-conserving models
    for (double eps : c.epsilon_list) {
      dicke::SweepResult res = dicke::run_sweep(c, eps);
      if (res.incomplete) {
        std::fprintf(stderr, "error: %s\n", res.error.c_str());
        return 2;
      }
      out.push_back({{"epsilon", eps}, {"transitions", res.transitions}});
    }
  }
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

int cmd_gap(const CLI::App* cmd, const CommonFlags& f, double lambda) {
  SweepConfig c = make_config(cmd, f);
  const double eps = c.epsilon_list.front();
  double gap = 0.0, energy = 0.0;
  long L = -1;
  if (c.model == Model::Rwa) {
    const auto gs = dicke::ground_state(params_from(c, 0.0, lambda));
    gap = dicke::energy_gap(gs);
    energy = gs.energy;
    L = gs.sector.excitation;
  } else {
    dicke::TruncationPolicy policy;
    policy.ntr_cap = c.ntr_cap;
    policy.e_tol = c.e_tol;
    policy.b_tol = c.b_tol;
    const auto gs =
        c.model == Model::A2
            ? dicke::ground_state_a2(params_from(c, eps, lambda), policy)
            : dicke::ground_state_full_dm(params_from(c, eps, lambda), policy);
    gap = dicke::energy_gap(gs);
    energy = gs.energy;
  }
  std::printf("lambda %.17g energy %.17g gap %.17g", lambda, energy, gap);
  if (L >= 0) std::printf(" L %ld", L);
  std::printf("\n");
  return 0;
}

// ----------------------------------------------------------------------
// selftest: fast identity and oracle-equivalence checks, one line each.
// ----------------------------------------------------------------------

constexpr double kTwoPi = 6.283185307179586476925286766559;

// small deterministic generator for the solver checks
double next_uniform(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
}

int cmd_selftest() {
  int failures = 0;
  auto report = [&](const char* name, bool ok) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };

  // ladder-coefficient identities
  {
    bool ok = true;
    for (int n = 1; n <= 12 && ok; ++n) {
      for (int e = 0; e <= n && ok; ++e) {
        const dicke::DickeLabel s(n, e);
        const double jp = dicke::jplus_coeff(s);
        const double jm = dicke::jminus_coeff(s);
        const double jz = dicke::jz_eigenvalue(s);
        if (e < n) {
          const double adj = dicke::jminus_coeff(dicke::DickeLabel(n, e + 1));
          ok = ok && std::fabs(adj - jp) < 1e-12;
        }
        ok = ok && std::fabs(jm * jm - jp * jp - 2.0 * jz) < 1e-9;
        const double casimir = jz * jz + 0.5 * (jp * jp + jm * jm);
        ok = ok && std::fabs(casimir - 0.25 * n * (n + 2.0)) < 1e-9;
      }
    }
    report("spin-algebra ladder identities", ok);
  }

  // Bogoliubov identities
  {
    bool ok = true;
    for (double eps = 0.0; eps <= 10.0; eps += 0.25) {
      const auto b = dicke::bogoliubov(1.0, eps);
      ok = ok && std::fabs(b.mu * b.mu - b.nu * b.nu - 1.0) < 1e-12;
      ok = ok && std::fabs(b.mu * b.nu - eps / b.omega_eps) < 1e-12;
      const double d = b.mu - b.nu;
      ok = ok && std::fabs(d * d - 1.0 / b.omega_eps) < 1e-12;
    }
    report("bogoliubov transform identities", ok);
  }

  // eigensolver residual + orthogonality on seeded random matrices
  {
    bool ok = true;
    for (int inst = 0; inst < 20 && ok; ++inst) {
      const std::size_t d = 3 + 7 * (inst % 5);
      std::uint64_t rng = 1234 + inst;
      dicke::TridiagonalMatrix m;
      m.diag.resize(d);
      m.offdiag.resize(d - 1);
      for (auto& x : m.diag) x = 3.0 * next_uniform(rng);
      for (auto& x : m.offdiag) x = 2.0 * next_uniform(rng);
      const auto pairs = dicke::lowest_eigenpairs_tridiagonal(
          m, std::min<std::size_t>(3, d));
      const double nrm = 1.0 + std::fabs(pairs.back().value);
      for (std::size_t a = 0; a < pairs.size() && ok; ++a) {
        double res = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          double r = (m.diag[i] - pairs[a].value) * pairs[a].vector[i];
          if (i > 0) r += m.offdiag[i - 1] * pairs[a].vector[i - 1];
          if (i + 1 < d) r += m.offdiag[i] * pairs[a].vector[i + 1];
          res += r * r;
        }
        ok = ok && std::sqrt(res) < 1e-9 * nrm;
        for (std::size_t b = 0; b < a; ++b) {
          double ovl = 0.0;
          for (std::size_t i = 0; i < d; ++i) {
            ovl += pairs[a].vector[i] * pairs[b].vector[i];
          }
          ok = ok && std::fabs(ovl) < 1e-9;
        }
      }
    }
    report("tridiagonal eigensolver residual/orthogonality", ok);
  }

  // RWA charge sum rule and fidelity dichotomy on a short sweep
  {
    SweepConfig c;
    c.model = Model::Rwa;
    c.n_atoms = 3;
    c.lambda_start = 0.505;
    c.lambda_stop = 1.605;
    c.lambda_step = 0.011;
    c.output_path = "";
    bool ok = true;
    const auto res = dicke::run_sweep(c, 0.0);
    ok = !res.incomplete;
    for (const auto& r : res.records) {
      const double g1 = r.gamma1_per_atom_raw * r.n_atoms;
      const double g2 = r.gamma2_per_atom * r.n_atoms;
      const double charge =
          g1 + g2 - kTwoPi * (r.excitation_L - 0.5 * r.n_atoms);
      ok = ok && std::fabs(charge) < 1e-10;
      ok = ok && (r.fidelity >= 1.0 - 1e-9 || r.fidelity <= 1e-9);
    }
    report("rwa charge sum rule + fidelity dichotomy", ok);
  }

  // epsilon = 0 cross-model equivalence
  {
    ModelParams p;
    p.n_atoms = 2;
    p.lambda = 0.9;
    const double e_rwa = dicke::ground_state(p).energy;
    const double e_a2 = dicke::ground_state_a2(p).energy;
    report("a2 model reduces to rwa at epsilon=0",
           std::fabs(e_rwa - e_a2) < 1e-8);
  }

  // N=1 closed-form crossings at 1 and 1+sqrt(2)
  {
    ModelParams p;
    p.n_atoms = 1;
    const auto ts = dicke::find_transitions(p, 0.5, 3.0, 1e-8);
    const bool ok = ts.size() == 2 && std::fabs(ts[0] - 1.0) < 1e-6 &&
                    std::fabs(ts[1] - (1.0 + std::sqrt(2.0))) < 1e-6;
    report("rwa N=1 closed-form transitions", ok);
  }

  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact finite-N RWA Dicke model solver with A^2 extensions"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  CommonFlags f_sweep, f_stair, f_trans, f_gap;
  double tol = 1e-8;
  double lambda_query = 1.0;

  CLI::App* sweep = app.add_subcommand("sweep", "full sweep, CSV + summary");
  add_common(sweep, f_sweep);
  CLI::App* stair = app.add_subcommand("staircase", "L(lambda) staircase");
  add_common(stair, f_stair);
  CLI::App* trans =
      app.add_subcommand("transitions", "locate ground-sector changes");
  add_common(trans, f_trans);
  trans->add_option("--tol", tol, "bisection width (rwa)");
  CLI::App* gap = app.add_subcommand("gap", "energy gap at one lambda");
  add_common(gap, f_gap);
  gap->add_option("--lambda", lambda_query, "coupling to evaluate");
  app.add_subcommand("selftest", "identity and oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(sweep, f_sweep);
    if (stair->parsed()) return cmd_staircase(stair, f_stair);
    if (trans->parsed()) return cmd_transitions(trans, f_trans, tol);
    if (gap->parsed()) return cmd_gap(gap, f_gap, lambda_query);
    return cmd_selftest();
  } catch (const dicke::ConfigError& ex) {
    std::fprintf(stderr, "config error: %s\n", ex.what());
    return 1;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}

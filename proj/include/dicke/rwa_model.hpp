#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "dicke/eigensolve.hpp"

namespace dicke {

// Physical inputs, hbar = 1.
struct ModelParams {
  double omega = 1.0;    // field frequency
  double omega0 = 1.0;   // atomic level splitting
  double lambda = 0.0;   // atom-field coupling
  double epsilon = 0.0;  // A^2 strength (ignored by the RWA path)
  int n_atoms = 1;       // N

  void validate() const;
};

// Ground state of one excitation sector: coeffs[e] is the amplitude on
// |photons = L - e>_f (x) |e excited>_a, e = 0 .. min(N, L).
struct SectorState {
  long excitation = 0;  // L
  std::vector<double> coeffs;
};

struct RwaGroundState {
  ModelParams params;
  SectorState sector;
  double energy = 0.0;
  // Global second-lowest level across all scanned sectors, including the
  // second eigenvalue of the winning sector.
  double first_excited_energy = 0.0;
};

struct ScanPolicy {
  int patience = 5;    // stop after this many non-improving sectors
  long l_max = -1;     // cap on L; -1 means 64 * N
  bool exhaustive = false;  // scan all sectors up to l_max regardless
};

// The sector scan hit l_max while sector minima were still improving.
class ScanExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tridiagonal matrix of the fixed-L block: diagonal
// omega (L - e) + omega0 (e - N/2), off-diagonal
// (lambda/sqrt(N)) sqrt(L - e) sqrt((e+1)(N-e)) between e and e+1.
// The conserved charge convention is L = <a'a> + <Jz> + N/2.
TridiagonalMatrix build_sector_matrix(const ModelParams& p, long L);

// Lowest eigenpair of the L sector (normalized, sign-fixed).
std::pair<double, SectorState> sector_ground(const ModelParams& p, long L,
                                             const SolverOptions& opts = {});

// Scans sectors L = 0, 1, 2, ... and returns the global ground state.
RwaGroundState ground_state(const ModelParams& p, const ScanPolicy& scan = {},
                            const SolverOptions& opts = {});

// L(lambda) on an ascending grid.
std::vector<std::pair<double, long>> excitation_staircase(
    const ModelParams& tmpl, const std::vector<double>& lambda_grid,
    const ScanPolicy& scan = {}, const SolverOptions& opts = {});

// Every coupling in (lambda_lo, lambda_hi) where the ground sector changes,
// located by bisection on the integer L(lambda) to width tol. Ascending.
std::vector<double> find_transitions(const ModelParams& tmpl, double lambda_lo,
                                     double lambda_hi, double tol,
                                     const ScanPolicy& scan = {},
                                     const SolverOptions& opts = {});

}  // namespace dicke

#pragma once

#include <stdexcept>
#include <vector>

#include "dicke/eigensolve.hpp"
#include "dicke/rwa_model.hpp"

namespace dicke {

// Bogoliubov transform b = mu a + nu a' diagonalizing
// omega a'a + epsilon (a' + a)^2, with mu^2 - nu^2 = 1.
struct BogoliubovData {
  double mu = 1.0;
  double nu = 0.0;
  double omega_eps = 0.0;   // sqrt(omega^2 + 4 omega epsilon)
  double zero_point = 0.0;  // (omega_eps - omega) / 2
};

BogoliubovData bogoliubov(double omega, double epsilon);

struct TruncationPolicy {
  int ntr_init = 16;
  int ntr_cap = 4096;
  double e_tol = 1e-10;  // |dE| between successive truncations
  double b_tol = 1e-10;  // ground-state weight on the last boson level
};

class TruncationExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ground state in the truncated |e excited>_a (x) |m>_b product basis.
// amplitudes is (N+1) x (ntr+1) row-major over e.
struct TruncatedGroundState {
  ModelParams params;
  int ntr = 0;
  std::vector<double> amplitudes;
  double energy = 0.0;
  double first_excited_energy = 0.0;
  BogoliubovData bogo;
  double boundary_weight = 0.0;

  double amp(int e, int m) const {
    return amplitudes[static_cast<std::size_t>(e) * (ntr + 1) + m];
  }
};

// Matrix of the RWA Hamiltonian with the A^2 term after the Bogoliubov
// transform: diagonal omega_eps m + omega0 (e - N/2) + (omega_eps-omega)/2,
// rotating couplings (weight lambda mu / sqrt(N)) between (e,m) and
// (e-1,m+1), counter-rotating couplings (weight -lambda nu / sqrt(N))
// between (e,m) and (e+1,m+1). Dimension (N+1)(ntr+1).
SymmetricMatrix build_a2_hamiltonian(const ModelParams& p, int ntr);

// Rotated full Dicke model with the A^2 term: omega_eps b'b - omega0 Jx
// + (omega_eps-omega)/2 + (2 lambda/sqrt(N)) (mu-nu) (b'+b) Jz.
SymmetricMatrix build_full_dm_hamiltonian(const ModelParams& p, int ntr);

// Doubles ntr until the ground energy is stable to e_tol and the boundary
// weight is below b_tol; throws TruncationExhausted past ntr_cap.
TruncatedGroundState ground_state_a2(const ModelParams& p,
                                     const TruncationPolicy& policy = {},
                                     const SolverOptions& opts = {});

// Same convergence loop for the rotated full DM.
TruncatedGroundState ground_state_full_dm(const ModelParams& p,
                                          const TruncationPolicy& policy = {},
                                          const SolverOptions& opts = {});

// <b'b> in the transformed frame.
double photon_number_bframe(const TruncatedGroundState& s);

// <a'a> in the original (physical) frame, via a = mu b - nu b':
// (mu^2+nu^2) <b'b> + nu^2 - mu nu <b'^2 + b^2>.
double photon_number_aframe(const TruncatedGroundState& s);

// <Jz> = sum over basis of amplitude^2 (e - N/2).
double jz_expectation(const TruncatedGroundState& s);

}  // namespace dicke

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "dicke/a2_model.hpp"
#include "dicke/rwa_model.hpp"

namespace dicke {

class BasisMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptySweep : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Berry phase 2 pi <O>; `reduced` folds the raw value into [0, 2 pi).
// Phases are defined mod 2 pi, so both branches are carried: below the
// first transition the raw per-atom phase is -pi, reported as pi reduced.
struct BerryPhase {
  double raw = 0.0;
  double reduced = 0.0;
  double per_atom_raw = 0.0;
  double per_atom_reduced = 0.0;
};

BerryPhase make_berry_phase(double raw, int n_atoms);

// gamma1 = 2 pi <Jz>
BerryPhase berry_phase_jz(const RwaGroundState& s);
BerryPhase berry_phase_jz(const TruncatedGroundState& s);

enum class PhotonFrame { Original, Transformed };

// gamma2 = 2 pi <a'a> (Original) or 2 pi <b'b> (Transformed). The two
// frames coincide for RWA states and at epsilon = 0.
BerryPhase berry_phase_photon(const RwaGroundState& s);
BerryPhase berry_phase_photon(const TruncatedGroundState& s,
                              PhotonFrame frame = PhotonFrame::Original);

// |<state_a|state_b>|. RWA states in different sectors are orthogonal by
// charge conservation and return exactly 0; truncated states are zero-padded
// to the larger ntr. Throws BasisMismatch when the atom numbers differ.
double fidelity(const RwaGroundState& a, const RwaGroundState& b);
double fidelity(const TruncatedGroundState& a, const TruncatedGroundState& b);

double energy_gap(const RwaGroundState& s);
double energy_gap(const TruncatedGroundState& s);

// Central difference [g(lambda+h) - g(lambda-h)] / (2h) of a raw Berry
// phase evaluator.
double berry_phase_derivative(const std::function<double(double)>& gamma1_raw,
                              double lambda, double h = 1e-3);

// One grid point of a sweep; the CSV row unit.
struct SweepRecord {
  double lambda = 0.0;
  double epsilon = 0.0;
  int n_atoms = 0;
  double energy = 0.0;
  double gap = 0.0;
  double gamma1_per_atom_raw = 0.0;
  double gamma1_per_atom_reduced = 0.0;
  double gamma2_per_atom = 0.0;
  double fidelity = 1.0;
  long excitation_L = -1;  // RWA only; -1 otherwise
  int ntr = 0;             // truncated models only
  double dgamma1_dlambda = 0.0;
};

// Midpoints of adjacent grid pairs whose fidelity falls below f_threshold.
// Records must be sorted by lambda and share one (epsilon, N).
std::vector<double> detect_transitions_from_sweep(
    const std::vector<SweepRecord>& records, double f_threshold = 0.5);

}  // namespace dicke

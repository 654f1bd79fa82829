#include "dicke/observables.hpp"

#include <algorithm>
#include <cmath>

namespace dicke {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

double mod_two_pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace

BerryPhase make_berry_phase(double raw, int n_atoms) {
  BerryPhase p;
  p.raw = raw;
  p.reduced = mod_two_pi(raw);
  p.per_atom_raw = raw / n_atoms;
  p.per_atom_reduced = mod_two_pi(p.per_atom_raw);
  return p;
}

BerryPhase berry_phase_jz(const RwaGroundState& s) {
  const int n = s.params.n_atoms;
  double jz = 0.0;
  for (std::size_t e = 0; e < s.sector.coeffs.size(); ++e) {
    jz += s.sector.coeffs[e] * s.sector.coeffs[e] * (e - 0.5 * n);
  }
  return make_berry_phase(kTwoPi * jz, n);
}

BerryPhase berry_phase_jz(const TruncatedGroundState& s) {
  return make_berry_phase(kTwoPi * jz_expectation(s), s.params.n_atoms);
}

BerryPhase berry_phase_photon(const RwaGroundState& s) {
  const long L = s.sector.excitation;
  double n_ph = 0.0;
  for (std::size_t e = 0; e < s.sector.coeffs.size(); ++e) {
    n_ph += s.sector.coeffs[e] * s.sector.coeffs[e] *
            static_cast<double>(L - static_cast<long>(e));
  }
  return make_berry_phase(kTwoPi * n_ph, s.params.n_atoms);
}

BerryPhase berry_phase_photon(const TruncatedGroundState& s,
                              PhotonFrame frame) {
  const double n_ph = frame == PhotonFrame::Original
                          ? photon_number_aframe(s)
                          : photon_number_bframe(s);
  return make_berry_phase(kTwoPi * n_ph, s.params.n_atoms);
}

double fidelity(const RwaGroundState& a, const RwaGroundState& b) {
  if (a.params.n_atoms != b.params.n_atoms) {
    throw BasisMismatch("fidelity: atom numbers differ");
  }
  if (a.sector.excitation != b.sector.excitation) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.sector.coeffs.size(); ++i) {
    s += a.sector.coeffs[i] * b.sector.coeffs[i];
  }
  return std::min(std::fabs(s), 1.0);
}

double fidelity(const TruncatedGroundState& a, const TruncatedGroundState& b) {
  if (a.params.n_atoms != b.params.n_atoms) {
    throw BasisMismatch("fidelity: atom numbers differ");
  }
  const int n = a.params.n_atoms;
  const int ntr = std::min(a.ntr, b.ntr);  // the tail of the longer state
                                           // meets zero padding anyway
  double s = 0.0;
  for (int e = 0; e <= n; ++e) {
    for (int m = 0; m <= ntr; ++m) s += a.amp(e, m) * b.amp(e, m);
  }
  return std::min(std::fabs(s), 1.0);
}

double energy_gap(const RwaGroundState& s) {
  return s.first_excited_energy - s.energy;
}

double energy_gap(const TruncatedGroundState& s) {
  return s.first_excited_energy - s.energy;
}

double berry_phase_derivative(const std::function<double(double)>& gamma1_raw,
                              double lambda, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("berry_phase_derivative: h must be > 0");
  }
  return (gamma1_raw(lambda + h) - gamma1_raw(lambda - h)) / (2.0 * h);
}

std::vector<double> detect_transitions_from_sweep(
    const std::vector<SweepRecord>& records, double f_threshold) {
  if (records.empty()) throw EmptySweep("detect_transitions_from_sweep");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    if (records[i].fidelity < f_threshold) {
      out.push_back(0.5 * (records[i].lambda + records[i + 1].lambda));
    }
  }
  return out;
}

}  // namespace dicke

#include <cmath>
#include <vector>

#include <doctest.h>

#include "dicke/observables.hpp"
#include "dicke/sweep.hpp"

using dicke::BerryPhase;
using dicke::ModelParams;
using dicke::RwaGroundState;
using dicke::SweepRecord;

namespace {

constexpr double kPi = 3.14159265358979323846;

ModelParams resonant(int n, double lambda, double epsilon = 0.0) {
  ModelParams p;
  p.n_atoms = n;
  p.lambda = lambda;
  p.epsilon = epsilon;
  return p;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("weak-coupling plateau: gamma1/N reduces to pi, gamma2 = 0") {
  for (int n = 1; n <= 8; ++n) {
    const auto gs = dicke::ground_state(resonant(n, 0.5));
    const BerryPhase g1 = dicke::berry_phase_jz(gs);
    CHECK(g1.per_atom_raw == doctest::Approx(-kPi).epsilon(1e-12));
    CHECK(g1.per_atom_reduced == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(dicke::berry_phase_photon(gs).raw == doctest::Approx(0.0));
  }
}

TEST_CASE("all-excited state carries raw phase pi N") {
  RwaGroundState s;
  s.params = resonant(6, 0.0);
  s.sector.excitation = 6;
  s.sector.coeffs.assign(7, 0.0);
  s.sector.coeffs[6] = 1.0;
  CHECK(dicke::berry_phase_jz(s).raw ==
        doctest::Approx(kPi * 6.0).epsilon(1e-13));
}

TEST_CASE("N=1 above the crossing: phases from the 2x2 closed form") {
  // resonance: sector eigenvector (1, -1)/sqrt(2), <Jz> = 0
  const auto gs = dicke::ground_state(resonant(1, 1.2));
  REQUIRE(gs.sector.excitation == 1);
  CHECK(dicke::berry_phase_jz(gs).raw == doctest::Approx(0.0).epsilon(1e-12));
  // charge identity gives gamma2
  CHECK(dicke::berry_phase_photon(gs).raw ==
        doctest::Approx(2.0 * kPi * (1.0 - 0.5)).epsilon(1e-10));
}

TEST_CASE("charge identity gamma1 + gamma2 == 2 pi (L - N/2)") {
  for (int n : {1, 3, 4}) {
    for (double lam : {0.2, 1.1, 1.9, 3.1}) {
      const auto gs = dicke::ground_state(resonant(n, lam));
      const double sum = dicke::berry_phase_jz(gs).raw +
                         dicke::berry_phase_photon(gs).raw;
      const double expected =
          2.0 * kPi * (gs.sector.excitation - 0.5 * n);
      CHECK(sum == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("reduction into [0, 2 pi)") {
  const BerryPhase a = dicke::make_berry_phase(-kPi, 1);
  CHECK(a.reduced == doctest::Approx(kPi));
  const BerryPhase b = dicke::make_berry_phase(-4.0 * kPi, 4);
  CHECK(b.reduced == doctest::Approx(0.0));
  CHECK(b.per_atom_reduced == doctest::Approx(kPi));
  CHECK(b.reduced >= 0.0);
  CHECK(b.reduced < 2.0 * kPi);
}

TEST_CASE("fidelity: identity, crossing orthogonality, flat L=0 sector") {
  const auto a = dicke::ground_state(resonant(1, 0.99));
  const auto b = dicke::ground_state(resonant(1, 1.01));
  CHECK(dicke::fidelity(a, a) == doctest::Approx(1.0));
  CHECK(dicke::fidelity(a, b) == 0.0);  // exact: different sectors
  CHECK(dicke::fidelity(a, b) == dicke::fidelity(b, a));

  const auto c = dicke::ground_state(resonant(1, 0.30));
  const auto d = dicke::ground_state(resonant(1, 0.31));
  CHECK(dicke::fidelity(c, d) == 1.0);  // L = 0 state is lambda-independent

  const auto other_n = dicke::ground_state(resonant(2, 0.3));
  CHECK_THROWS_AS((void)dicke::fidelity(a, other_n), dicke::BasisMismatch);
}

TEST_CASE("fidelity for truncated states, including ntr padding") {
  const auto a = dicke::ground_state_a2(resonant(2, 0.4, 0.3));
  const auto b = dicke::ground_state_a2(resonant(2, 0.41, 0.3));
  const double f = dicke::fidelity(a, b);
  CHECK(f == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(f <= 1.0);
  CHECK(dicke::fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("photon Berry phase frames for a decoupled squeezed field") {
  const auto gs = dicke::ground_state_a2(resonant(2, 0.0, 0.8));
  const auto b_frame =
      dicke::berry_phase_photon(gs, dicke::PhotonFrame::Transformed);
  const auto a_frame =
      dicke::berry_phase_photon(gs, dicke::PhotonFrame::Original);
  CHECK(b_frame.raw == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a_frame.raw ==
        doctest::Approx(2.0 * kPi * gs.bogo.nu * gs.bogo.nu).epsilon(1e-10));
}

TEST_CASE("energy gap closed forms at N=1") {
  CHECK(dicke::energy_gap(dicke::ground_state(resonant(1, 0.0))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dicke::energy_gap(dicke::ground_state(resonant(1, 0.5))) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dicke::energy_gap(dicke::ground_state(resonant(1, 1.0))) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("berry phase derivative: plateau, spike, and h-refinement") {
  auto gamma1_of = [](double lam) {
    return dicke::berry_phase_jz(dicke::ground_state(resonant(2, lam))).raw;
  };
  // flat below the first transition
  CHECK(dicke::berry_phase_derivative(gamma1_of, 0.5, 1e-3) ==
        doctest::Approx(0.0));
  // a crossing inside the stencil contributes ~ jump / (2h); at resonance
  // the first crossing jumps <Jz> by 1/2, so the raw phase jumps by pi
  const double h = 1e-3;
  const double spike =
      std::fabs(dicke::berry_phase_derivative(gamma1_of, 1.0, h));
  CHECK(spike >= 0.9 * kPi / (2.0 * h));

  // off-resonant smooth segment: halving h changes the estimate by O(h^2)
  auto smooth = [](double lam) {
    ModelParams p = resonant(2, lam);
    p.omega0 = 1.3;
    return dicke::berry_phase_jz(dicke::ground_state(p)).raw;
  };
  const double d1 = dicke::berry_phase_derivative(smooth, 1.6, 2e-3);
  const double d2 = dicke::berry_phase_derivative(smooth, 1.6, 1e-3);
  CHECK(std::fabs(d1 - d2) < 1e-4);
}

TEST_CASE("transition detection from sweep records") {
  std::vector<SweepRecord> records;
  CHECK_THROWS_AS(dicke::detect_transitions_from_sweep(records, 0.5),
                  dicke::EmptySweep);
  for (int i = 0; i < 5; ++i) {
    SweepRecord r;
    r.lambda = 1.0 + 0.1 * i;
    r.fidelity = (i == 2) ? 0.01 : 1.0;
    records.push_back(r);
  }
  const auto t = dicke::detect_transitions_from_sweep(records, 0.5);
  REQUIRE(t.size() == 1);
  CHECK(t[0] == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("transition concordance: sector change, fidelity drop, gap") {
  // N = 2 around the first two transitions
  dicke::SweepConfig cfg;
  cfg.model = dicke::Model::Rwa;
  cfg.n_atoms = 2;
  cfg.lambda_start = 0.9005;
  cfg.lambda_stop = 1.6005;
  cfg.lambda_step = 0.005;
  const auto sweep = dicke::run_sweep(cfg, 0.0);
  REQUIRE(!sweep.incomplete);
  const auto drops = sweep.transitions;

  const auto exact =
      dicke::find_transitions(resonant(2, 0.0), 0.9005, 1.6005, 1e-9);
  REQUIRE(drops.size() == exact.size());
  for (std::size_t i = 0; i < drops.size(); ++i) {
    CHECK(std::fabs(drops[i] - exact[i]) <= cfg.lambda_step);
    // gap at the refined crossing closes
    const auto at = dicke::ground_state(resonant(2, exact[i]));
    CHECK(dicke::energy_gap(at) <= 1e-6);
  }

  // gamma2 increases across each jump; plateaus are flat at resonance
  for (std::size_t i = 0; i + 1 < sweep.records.size(); ++i) {
    const auto& a = sweep.records[i];
    const auto& b = sweep.records[i + 1];
    if (a.excitation_L != b.excitation_L) {
      CHECK(b.gamma2_per_atom > a.gamma2_per_atom);
    } else {
      CHECK(std::fabs(b.gamma1_per_atom_raw - a.gamma1_per_atom_raw) < 1e-10);
    }
  }
}

}  // TEST_SUITE

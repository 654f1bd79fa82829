#include <cmath>

#include <doctest.h>

#include "dicke/spin_algebra.hpp"
#include "oracles.hpp"

using dicke::DickeLabel;

TEST_SUITE("spin_algebra") {

TEST_CASE("jz eigenvalue is e - N/2") {
  CHECK(dicke::jz_eigenvalue(DickeLabel(1, 0)) == -0.5);
  CHECK(dicke::jz_eigenvalue(DickeLabel(4, 4)) == 2.0);
  CHECK(dicke::jz_eigenvalue(DickeLabel(4, 1)) == -1.0);
}

TEST_CASE("ladder coefficients at the ladder ends") {
  CHECK(dicke::jplus_coeff(DickeLabel(1, 0)) == 1.0);
  CHECK(dicke::jplus_coeff(DickeLabel(4, 4)) == 0.0);
  CHECK(dicke::jminus_coeff(DickeLabel(1, 1)) == 1.0);
  CHECK(dicke::jminus_coeff(DickeLabel(8, 0)) == 0.0);
}

TEST_CASE("interior coefficients against the Schwinger matrices") {
  // frozen values: sqrt(6) for both, read off the brute-force J+/J-
  const auto spin4 = oracle::schwinger_spin_matrices(4);
  const double jp42 = spin4.jplus(3, 2).real();
  const double jm43 = spin4.jminus(2, 3).real();
  CHECK(jp42 == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  CHECK(jm43 == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  CHECK(dicke::jplus_coeff(DickeLabel(4, 2)) ==
        doctest::Approx(jp42).epsilon(1e-14));
  CHECK(dicke::jminus_coeff(DickeLabel(4, 3)) ==
        doctest::Approx(jm43).epsilon(1e-14));
}

TEST_CASE("full element-wise match with the Schwinger representation") {
  for (int n : {1, 2, 3, 5, 9, 16}) {
    const auto spin = oracle::schwinger_spin_matrices(n);
    for (int e = 0; e <= n; ++e) {
      CHECK(dicke::jz_eigenvalue(DickeLabel(n, e)) ==
            doctest::Approx(spin.jz[e * spin.dim + e].real()).epsilon(1e-14));
      if (e < n) {
        CHECK(dicke::jplus_coeff(DickeLabel(n, e)) ==
              doctest::Approx(spin.jplus(e + 1, e).real()).epsilon(1e-14));
        CHECK(spin.jplus(e + 1, e).imag() == doctest::Approx(0.0));
      }
      if (e > 0) {
        CHECK(dicke::jminus_coeff(DickeLabel(n, e)) ==
              doctest::Approx(spin.jminus(e - 1, e).real()).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("adjointness, commutator and Casimir sum rules") {
  for (int n : {1, 2, 4, 7, 33}) {
    for (int e = 0; e <= n; ++e) {
      const DickeLabel s(n, e);
      const double jp = dicke::jplus_coeff(s);
      const double jm = dicke::jminus_coeff(s);
      const double jz = dicke::jz_eigenvalue(s);
      if (e < n) {
        CHECK(dicke::jminus_coeff(DickeLabel(n, e + 1)) ==
              doctest::Approx(jp).epsilon(1e-15));
      }
      // [J+, J-] = 2 Jz on |e>: <J+J-> - <J-J+> = jm^2 - jp^2
      CHECK(jm * jm - jp * jp == doctest::Approx(2.0 * jz).epsilon(1e-13));
      // Casimir j(j+1) with j = N/2
      CHECK(jz * jz + 0.5 * (jp * jp + jm * jm) ==
            doctest::Approx(0.25 * n * (n + 2.0)).epsilon(1e-13));
    }
  }
}

}  // TEST_SUITE

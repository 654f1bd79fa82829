#pragma once

#include <cassert>

namespace dicke {

// Collective-spin bookkeeping for the symmetric (j = N/2) Dicke sector.
// Basis states are labeled by the number of excited atoms e in {0,...,N};
// the Jz eigenvalue of |e> is e - N/2.
struct DickeLabel {
  int n_atoms;  // N >= 1
  int excited;  // e, 0 <= e <= N

  DickeLabel(int n, int e) : n_atoms(n), excited(e) {
    assert(n >= 1);
    assert(e >= 0 && e <= n);
  }
};

// Jz eigenvalue, e - N/2.
double jz_eigenvalue(const DickeLabel& s);

// Amplitude of J+ mapping e -> e+1: sqrt((e+1)(N-e)). Zero at the top of
// the ladder (e = N).
double jplus_coeff(const DickeLabel& s);

// Amplitude of J- mapping e -> e-1: sqrt(e(N-e+1)). Zero at e = 0.
double jminus_coeff(const DickeLabel& s);

}  // namespace dicke

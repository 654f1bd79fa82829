#include "dicke/spin_algebra.hpp"

#include <cmath>

namespace dicke {

double jz_eigenvalue(const DickeLabel& s) {
  return s.excited - 0.5 * s.n_atoms;
}

double jplus_coeff(const DickeLabel& s) {
  const int e = s.excited;
  const int n = s.n_atoms;
  if (e >= n) return 0.0;
  // Arguments stay below N(N+2)/4; plain double arithmetic is exact enough
  // for any N this library targets.
  return std::sqrt(static_cast<double>(e + 1) * static_cast<double>(n - e));
}

double jminus_coeff(const DickeLabel& s) {
  const int e = s.excited;
  const int n = s.n_atoms;
  if (e <= 0) return 0.0;
  return std::sqrt(static_cast<double>(e) * static_cast<double>(n - e + 1));
}

}  // namespace dicke

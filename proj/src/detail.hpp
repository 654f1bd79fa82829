#pragma once

// Internal numerics helpers shared by the eigensolver translation units.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dicke::detail {

// splitmix64: deterministic start-vector generator. Quality does not matter
// here, only reproducibility and a nonzero projection on every eigenvector.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in (-1, 1)
  double next_symmetric() {
    return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
  }

 private:
  std::uint64_t state_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) {
  return std::sqrt(dot(a, a));
}

inline void axpy(double alpha, const std::vector<double>& x,
                 std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(std::vector<double>& x, double alpha) {
  for (double& v : x) v *= alpha;
}

inline std::vector<double> random_unit_vector(std::size_t n,
                                              std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.next_symmetric();
  double nrm = norm2(v);
  if (nrm == 0.0) {  // astronomically unlikely; fall back to e0
    v.assign(n, 0.0);
    v[0] = 1.0;
    nrm = 1.0;
  }
  scale(v, 1.0 / nrm);
  return v;
}

// Largest-magnitude component positive, ties to the lowest index.
inline void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  double mag = std::fabs(v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::fabs(v[i]) > mag) {
      mag = std::fabs(v[i]);
      best = i;
    }
  }
  if (v[best] < 0.0) {
    for (double& x : v) x = -x;
  }
}

}  // namespace dicke::detail

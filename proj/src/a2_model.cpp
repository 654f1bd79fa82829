#include "dicke/a2_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dicke/spin_algebra.hpp"

namespace dicke {

BogoliubovData bogoliubov(double omega, double epsilon) {
  if (!(omega > 0.0) || epsilon < 0.0) {
    throw std::invalid_argument("bogoliubov: need omega > 0, epsilon >= 0");
  }
  BogoliubovData b;
  b.omega_eps = std::sqrt(omega * omega + 4.0 * omega * epsilon);
  const double ratio = (omega + 2.0 * epsilon) / b.omega_eps;
  b.mu = std::sqrt(0.5 * (ratio + 1.0));
  b.nu = std::sqrt(std::max(0.5 * (ratio - 1.0), 0.0));
  b.zero_point = 0.5 * (b.omega_eps - omega);
  return b;
}

namespace {

inline std::size_t flat(int e, int m, int ntr) {
  return static_cast<std::size_t>(e) * (ntr + 1) + m;
}

}  // namespace

SymmetricMatrix build_a2_hamiltonian(const ModelParams& p, int ntr) {
  p.validate();
  if (ntr < 1) throw std::invalid_argument("build_a2_hamiltonian: ntr < 1");
  const int n = p.n_atoms;
  const BogoliubovData b = bogoliubov(p.omega, p.epsilon);
  const double g_rot = p.lambda * b.mu / std::sqrt(static_cast<double>(n));
  const double g_ctr = -p.lambda * b.nu / std::sqrt(static_cast<double>(n));

  SymmetricMatrix h((n + 1) * static_cast<std::size_t>(ntr + 1));
  for (int e = 0; e <= n; ++e) {
    const DickeLabel label(n, e);
    for (int m = 0; m <= ntr; ++m) {
      h.add(flat(e, m, ntr), flat(e, m, ntr),
            b.omega_eps * m + p.omega0 * jz_eigenvalue(label) + b.zero_point);
      if (m + 1 <= ntr) {
        const double sq = std::sqrt(static_cast<double>(m + 1));
        // b' J-  : (e, m) -> (e-1, m+1)
        if (e >= 1 && g_rot != 0.0) {
          h.add(flat(e, m, ntr), flat(e - 1, m + 1, ntr),
                g_rot * sq * jminus_coeff(label));
        }
        // -nu b' J+ : (e, m) -> (e+1, m+1)
        if (e + 1 <= n && g_ctr != 0.0) {
          h.add(flat(e, m, ntr), flat(e + 1, m + 1, ntr),
                g_ctr * sq * jplus_coeff(label));
        }
      }
    }
  }
  return h;
}

SymmetricMatrix build_full_dm_hamiltonian(const ModelParams& p, int ntr) {
  p.validate();
  if (ntr < 1) {
    throw std::invalid_argument("build_full_dm_hamiltonian: ntr < 1");
  }
  const int n = p.n_atoms;
  const BogoliubovData b = bogoliubov(p.omega, p.epsilon);
  // (mu - nu) = sqrt(omega / omega_eps), used as computed from the transform
  const double g = 2.0 * p.lambda * (b.mu - b.nu) /
                   std::sqrt(static_cast<double>(n));

  SymmetricMatrix h((n + 1) * static_cast<std::size_t>(ntr + 1));
  for (int e = 0; e <= n; ++e) {
    const DickeLabel label(n, e);
    for (int m = 0; m <= ntr; ++m) {
      h.add(flat(e, m, ntr), flat(e, m, ntr), b.omega_eps * m + b.zero_point);
      // -omega0 Jx : (e, m) -> (e+1, m)
      if (e + 1 <= n) {
        h.add(flat(e, m, ntr), flat(e + 1, m, ntr),
              -0.5 * p.omega0 * jplus_coeff(label));
      }
      // g (b' + b) Jz : (e, m) -> (e, m+1); Jz vanishes on the equator
      if (m + 1 <= ntr && g != 0.0 && jz_eigenvalue(label) != 0.0) {
        h.add(flat(e, m, ntr), flat(e, m + 1, ntr),
              g * std::sqrt(static_cast<double>(m + 1)) *
                  jz_eigenvalue(label));
      }
    }
  }
  return h;
}

namespace {

TruncatedGroundState converge_truncation(const ModelParams& p,
                                         const TruncationPolicy& policy,
                                         const SolverOptions& opts,
                                         bool full_dm) {
  p.validate();
  double prev_energy = std::numeric_limits<double>::quiet_NaN();
  for (int ntr = policy.ntr_init; ntr <= policy.ntr_cap; ntr *= 2) {
    const SymmetricMatrix h = full_dm ? build_full_dm_hamiltonian(p, ntr)
                                      : build_a2_hamiltonian(p, ntr);
    std::vector<EigenPair> pairs = lowest_eigenpairs_symmetric(h, 2, opts);

    double bw = 0.0;
    for (int e = 0; e <= p.n_atoms; ++e) {
      const double c = pairs[0].vector[flat(e, ntr, ntr)];
      bw += c * c;
    }
    const bool stable = !std::isnan(prev_energy) &&
                        std::fabs(pairs[0].value - prev_energy) < policy.e_tol;
    if (stable && bw < policy.b_tol) {
      TruncatedGroundState s;
      s.params = p;
      s.ntr = ntr;
      s.amplitudes = std::move(pairs[0].vector);
      s.energy = pairs[0].value;
      s.first_excited_energy = pairs[1].value;
      s.bogo = bogoliubov(p.omega, p.epsilon);
      s.boundary_weight = bw;
      return s;
    }
    prev_energy = pairs[0].value;
  }
  throw TruncationExhausted(
      "truncated Fock space not converged at ntr_cap = " +
      std::to_string(policy.ntr_cap));
}

}  // namespace

TruncatedGroundState ground_state_a2(const ModelParams& p,
                                     const TruncationPolicy& policy,
                                     const SolverOptions& opts) {
  return converge_truncation(p, policy, opts, /*full_dm=*/false);
}

TruncatedGroundState ground_state_full_dm(const ModelParams& p,
                                          const TruncationPolicy& policy,
                                          const SolverOptions& opts) {
  return converge_truncation(p, policy, opts, /*full_dm=*/true);
}

double photon_number_bframe(const TruncatedGroundState& s) {
  double nb = 0.0;
  for (int e = 0; e <= s.params.n_atoms; ++e) {
    for (int m = 0; m <= s.ntr; ++m) {
      nb += m * s.amp(e, m) * s.amp(e, m);
    }
  }
  return nb;
}

double photon_number_aframe(const TruncatedGroundState& s) {
  const double mu = s.bogo.mu, nu = s.bogo.nu;
  double nb = 0.0, bb2 = 0.0;  // <b'b> and <b'^2 + b^2>
  for (int e = 0; e <= s.params.n_atoms; ++e) {
    for (int m = 0; m <= s.ntr; ++m) {
      const double c = s.amp(e, m);
      nb += m * c * c;
      if (m + 2 <= s.ntr) {
        bb2 += 2.0 * c * s.amp(e, m + 2) *
               std::sqrt(static_cast<double>(m + 1) * (m + 2));
      }
    }
  }
  return (mu * mu + nu * nu) * nb + nu * nu - mu * nu * bb2;
}

double jz_expectation(const TruncatedGroundState& s) {
  double jz = 0.0;
  for (int e = 0; e <= s.params.n_atoms; ++e) {
    double w = 0.0;
    for (int m = 0; m <= s.ntr; ++m) w += s.amp(e, m) * s.amp(e, m);
    jz += w * (e - 0.5 * s.params.n_atoms);
  }
  return jz;
}

}  // namespace dicke

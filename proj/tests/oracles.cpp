#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oracle {

JacobiResult jacobi_eigensystem(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("jacobi: size mismatch");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    }
    return std::sqrt(s);
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale, std::fabs(a[i * n + i]));
  }
  scale = std::max(scale, off_norm());
  const double tol = 1e-15 * std::max(scale, 1e-300);

  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::fabs(apq) <= 1e-300) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i * n + i] < a[j * n + j];
  });

  JacobiResult out;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (std::size_t i = 0; i < n; ++i) {
      out.vectors[k][i] = v[i * n + order[k]];
    }
  }
  return out;
}

SchwingerMatrices schwinger_spin_matrices(int n_atoms) {
  const std::size_t d = static_cast<std::size_t>(n_atoms) + 1;
  SchwingerMatrices m;
  m.dim = d;
  m.jx.assign(d * d, 0.0);
  m.jy.assign(d * d, 0.0);
  m.jz.assign(d * d, 0.0);

  // Two oscillators (up, down) with n_up + n_down = N, basis index
  // e = n_up. J+ = a_up' a_down, J- = a_down' a_up, Jz = (n_up - n_down)/2.
  const std::complex<double> half_i(0.0, 0.5);
  for (std::size_t e = 0; e < d; ++e) {
    const double n_up = static_cast<double>(e);
    const double n_down = static_cast<double>(n_atoms) - n_up;
    m.jz[e * d + e] = 0.5 * (n_up - n_down);
    if (e + 1 < d) {
      // <e+1| a_up' a_down |e> = sqrt(n_up + 1) sqrt(n_down)
      const double amp = std::sqrt((n_up + 1.0) * n_down);
      // Jx = (J+ + J-)/2, Jy = (J+ - J-)/(2i)
      m.jx[(e + 1) * d + e] += 0.5 * amp;
      m.jx[e * d + (e + 1)] += 0.5 * amp;
      m.jy[(e + 1) * d + e] += -half_i * amp;  // 1/(2i) = -i/2
      m.jy[e * d + (e + 1)] += half_i * amp;
    }
  }
  return m;
}

std::complex<double> SchwingerMatrices::jplus(std::size_t r,
                                              std::size_t c) const {
  return jx[r * dim + c] + std::complex<double>(0.0, 1.0) * jy[r * dim + c];
}

std::complex<double> SchwingerMatrices::jminus(std::size_t r,
                                               std::size_t c) const {
  return jx[r * dim + c] - std::complex<double>(0.0, 1.0) * jy[r * dim + c];
}

std::vector<double> brute_force_hamiltonian(const dicke::ModelParams& p,
                                            int photon_cap) {
  const int n = p.n_atoms;
  const std::size_t np = static_cast<std::size_t>(photon_cap) + 1;
  const std::size_t dim = (n + 1) * np;
  std::vector<double> h(dim * dim, 0.0);
  auto idx = [&](int e, int ph) {
    return static_cast<std::size_t>(e) * np + ph;
  };
  const double g = p.lambda / std::sqrt(static_cast<double>(n));
  const SchwingerMatrices spin = schwinger_spin_matrices(n);

  for (int e = 0; e <= n; ++e) {
    for (int ph = 0; ph <= photon_cap; ++ph) {
      const std::size_t i = idx(e, ph);
      h[i * dim + i] += p.omega * ph + p.omega0 * spin.jz[e * spin.dim + e].real();
      // a' J- : |e, ph> -> |e-1, ph+1>
      if (e >= 1 && ph + 1 <= photon_cap) {
        const double amp = g * std::sqrt(ph + 1.0) *
                           spin.jminus(e - 1, e).real();
        h[idx(e - 1, ph + 1) * dim + i] += amp;
        h[i * dim + idx(e - 1, ph + 1)] += amp;
      }
      // eps (a' + a)^2 = eps (a'a' + aa + 2 a'a + 1)
      if (p.epsilon > 0.0) {
        h[i * dim + i] += p.epsilon * (2.0 * ph + 1.0);
        if (ph + 2 <= photon_cap) {
          const double amp =
              p.epsilon * std::sqrt((ph + 1.0) * (ph + 2.0));
          h[idx(e, ph + 2) * dim + i] += amp;
          h[i * dim + idx(e, ph + 2)] += amp;
        }
      }
    }
  }
  return h;
}

double brute_force_ground_energy(const dicke::ModelParams& p, int photon_cap) {
  const std::size_t dim =
      (p.n_atoms + 1) * (static_cast<std::size_t>(photon_cap) + 1);
  return jacobi_eigensystem(brute_force_hamiltonian(p, photon_cap), dim)
      .values.front();
}

double brute_force_full_dm_ground_energy(const dicke::ModelParams& p,
                                         int photon_cap) {
  const int n = p.n_atoms;
  const std::size_t np = static_cast<std::size_t>(photon_cap) + 1;
  const std::size_t dim = (n + 1) * np;
  std::vector<double> h(dim * dim, 0.0);
  auto idx = [&](int e, int ph) {
    return static_cast<std::size_t>(e) * np + ph;
  };
  const double g = p.lambda / std::sqrt(static_cast<double>(n));
  const SchwingerMatrices spin = schwinger_spin_matrices(n);

  for (int e = 0; e <= n; ++e) {
    for (int ph = 0; ph <= photon_cap; ++ph) {
      const std::size_t i = idx(e, ph);
      h[i * dim + i] +=
          p.omega * ph + p.omega0 * spin.jz[e * spin.dim + e].real() +
          p.epsilon * (2.0 * ph + 1.0);
      // (a' + a)(J+ + J-): raise e, raise or lower the photon number;
      // the e-lowering partners enter through symmetrization
      if (e + 1 <= n) {
        const double jp = spin.jplus(e + 1, e).real();
        if (ph + 1 <= photon_cap) {
          const double amp = g * jp * std::sqrt(ph + 1.0);
          h[idx(e + 1, ph + 1) * dim + i] += amp;
          h[i * dim + idx(e + 1, ph + 1)] += amp;
        }
        if (ph >= 1) {
          const double amp = g * jp * std::sqrt(static_cast<double>(ph));
          h[idx(e + 1, ph - 1) * dim + i] += amp;
          h[i * dim + idx(e + 1, ph - 1)] += amp;
        }
      }
      if (p.epsilon > 0.0 && ph + 2 <= photon_cap) {
        const double amp = p.epsilon * std::sqrt((ph + 1.0) * (ph + 2.0));
        h[idx(e, ph + 2) * dim + i] += amp;
        h[i * dim + idx(e, ph + 2)] += amp;
      }
    }
  }
  return jacobi_eigensystem(std::move(h), dim).values.front();
}

namespace {

// classical surface of the rotated full DM on |alpha> (x) spin direction
double classical_minimum_displacement(double omega, double omega0,
                                      double epsilon, int n_atoms,
                                      double lambda) {
  const double we = std::sqrt(omega * omega + 4.0 * omega * epsilon);
  const double mu2 = 0.5 * ((omega + 2.0 * epsilon) / we + 1.0);
  const double nu2 = 0.5 * ((omega + 2.0 * epsilon) / we - 1.0);
  const double mu_minus_nu = std::sqrt(mu2) - std::sqrt(std::max(nu2, 0.0));
  const double rootn = std::sqrt(static_cast<double>(n_atoms));

  double best_e = std::numeric_limits<double>::infinity();
  double best_alpha = 0.0;
  const int steps = 4000;
  for (int i = 0; i <= steps; ++i) {
    const double phi = M_PI * i / steps;  // Jx = (N/2) cos, Jz = (N/2) sin
    const double coupling =
        2.0 * lambda * mu_minus_nu * rootn * 0.5 * std::sin(phi);
    const double alpha = -coupling / we;  // minimizer over the field
    const double e = we * alpha * alpha -
                     0.5 * omega0 * n_atoms * std::cos(phi) +
                     2.0 * coupling * alpha;
    if (e < best_e) {
      best_e = e;
      best_alpha = alpha;
    }
  }
  return std::fabs(best_alpha);
}

}  // namespace

double mean_field_critical_coupling(double omega, double omega0,
                                    double epsilon, int n_atoms) {
  double lo = 1e-3, hi = 20.0;
  if (classical_minimum_displacement(omega, omega0, epsilon, n_atoms, lo) >
      1e-9) {
    return lo;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (classical_minimum_displacement(omega, omega0, epsilon, n_atoms, mid) >
        1e-9) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo < 1e-10) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle

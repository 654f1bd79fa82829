#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"
#include "dicke/eigensolve.hpp"

namespace dicke {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// ----------------------------------------------------------------------
// Dense path: Householder reduction to tridiagonal form (reflectors kept),
// tridiagonal solve, back-transformation of the requested vectors.
// ----------------------------------------------------------------------

struct HouseholderReduction {
  std::size_t n;
  std::vector<double> a;     // work copy; columns below the subdiagonal
                             // hold the reflector vectors
  std::vector<double> tau;   // reflector scales
  TridiagonalMatrix tri;

  explicit HouseholderReduction(std::vector<double> dense, std::size_t dim)
      : n(dim), a(std::move(dense)), tau(dim, 0.0) {
    tri.diag.resize(n);
    tri.offdiag.assign(n > 0 ? n - 1 : 0, 0.0);
    std::vector<double> p(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
      // reflector annihilating column k below the subdiagonal
      double xnorm2 = 0.0;
      for (std::size_t i = k + 2; i < n; ++i) xnorm2 += at(i, k) * at(i, k);
      const double x0 = at(k + 1, k);
      if (xnorm2 == 0.0) {
        tri.offdiag[k] = x0;
        tau[k] = 0.0;
        continue;
      }
      const double beta = -std::copysign(std::sqrt(x0 * x0 + xnorm2), x0);
      // v = x - beta e1, scaled so v[0] = 1; H = I - tau v v^T, tau = 2/v^T v
      const double v0 = x0 - beta;
      for (std::size_t i = k + 2; i < n; ++i) at(i, k) /= v0;
      at(k + 1, k) = 1.0;
      double vtv = 1.0;
      for (std::size_t i = k + 2; i < n; ++i) vtv += at(i, k) * at(i, k);
      tau[k] = 2.0 / vtv;
      tri.offdiag[k] = beta;

      // symmetric rank-2 update of the trailing block: A <- H A H
      const double t = tau[k];
      for (std::size_t i = k + 1; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) s += sym_at(i, j) * v(j, k);
        p[i] = t * s;
      }
      double vp = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) vp += v(i, k) * p[i];
      for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - 0.5 * t * vp * v(i, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j <= i; ++j) {
          at(i, j) -= v(i, k) * w[j] + w[i] * v(j, k);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) tri.diag[i] = at(i, i);
    if (n >= 2) tri.offdiag[n - 2] = at(n - 1, n - 2);
  }

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  // reflector component i of reflector k (defined for i >= k+1)
  double v(std::size_t i, std::size_t k) const {
    return i == k + 1 ? 1.0 : at(i, k);
  }

  // lower triangle holds the reduced matrix during the update
  double sym_at(std::size_t i, std::size_t j) const {
    return i >= j ? at(i, j) : at(j, i);
  }

  // x <- Q x where T = Q^T A Q (apply reflectors in reverse order)
  void back_transform(std::vector<double>& x) const {
    if (n < 3) return;
    for (std::size_t kr = n - 2; kr-- > 0;) {
      const std::size_t k = kr;
      if (tau[k] == 0.0) continue;
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v(i, k) * x[i];
      s *= tau[k];
      for (std::size_t i = k + 1; i < n; ++i) x[i] -= s * v(i, k);
    }
  }
};

double residual_norm(const SymmetricMatrix& m, double value,
                     const std::vector<double>& x) {
  std::vector<double> r = m.apply(x);
  detail::axpy(-value, x, r);
  return detail::norm2(r);
}

std::vector<EigenPair> lowest_dense(const SymmetricMatrix& m,
                                    std::size_t count,
                                    const SolverOptions& opts) {
  HouseholderReduction red(m.dense(), m.dim());
  std::vector<EigenPair> pairs =
      lowest_eigenpairs_tridiagonal(red.tri, count, opts);
  const double nrm = std::max(m.norm_estimate(), 1e-300);
  for (EigenPair& p : pairs) {
    red.back_transform(p.vector);
    const double nv = detail::norm2(p.vector);
    detail::scale(p.vector, 1.0 / nv);
    detail::fix_sign(p.vector);
    if (residual_norm(m, p.value, p.vector) > opts.residual_rtol * nrm) {
      throw ConvergenceFailure("dense path residual check failed");
    }
  }
  return pairs;
}

// ----------------------------------------------------------------------
// Sparse path: Lanczos with full reorthogonalization. Eigenpairs are
// extracted one at a time; converged vectors are locked and deflated from
// later runs, which keeps quasi-degenerate pairs (parity doublets at large
// coupling) from stalling a single-vector recurrence.
// ----------------------------------------------------------------------

struct LanczosRun {
  bool converged = false;
  EigenPair pair;
};

LanczosRun lanczos_lowest(const SymmetricMatrix& m,
                          const std::vector<EigenPair>& locked,
                          std::uint64_t seed, std::size_t max_steps,
                          double accept, const SolverOptions& opts) {
  const std::size_t n = m.dim();
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;

  auto orth_all = [&](std::vector<double>& w) {
    for (const EigenPair& l : locked) {
      detail::axpy(-detail::dot(w, l.vector), l.vector, w);
    }
    for (const std::vector<double>& u : basis) {
      detail::axpy(-detail::dot(w, u), u, w);
    }
  };

  std::vector<double> v = detail::random_unit_vector(n, seed);
  for (const EigenPair& l : locked) {
    detail::axpy(-detail::dot(v, l.vector), l.vector, v);
  }
  {
    const double nv = detail::norm2(v);
    if (nv < 1e-8) return {};  // start vector swallowed by locked space
    detail::scale(v, 1.0 / nv);
  }

  LanczosRun out;
  basis.push_back(v);
  for (std::size_t j = 0; j < max_steps; ++j) {
    std::vector<double> w = m.apply(basis[j]);
    if (j > 0) detail::axpy(-beta[j - 1], basis[j - 1], w);
    const double a = detail::dot(w, basis[j]);
    alpha.push_back(a);
    detail::axpy(-a, basis[j], w);
    orth_all(w);  // full reorthogonalization,
    orth_all(w);  // twice
    const double b = detail::norm2(w);

    const bool check =
        (j + 1 >= 2 || b <= accept) && ((j % 4 == 3) || b <= accept ||
                                        j + 1 == max_steps);
    if (check) {
      TridiagonalMatrix t{alpha, beta};
      std::vector<EigenPair> ritz = lowest_eigenpairs_tridiagonal(t, 1, opts);
      const double bound = b * std::fabs(ritz[0].vector.back());
      if (bound <= 0.25 * accept || b <= accept) {
        std::vector<double> x(n, 0.0);
        for (std::size_t i = 0; i < basis.size(); ++i) {
          detail::axpy(ritz[0].vector[i], basis[i], x);
        }
        for (const EigenPair& l : locked) {
          detail::axpy(-detail::dot(x, l.vector), l.vector, x);
        }
        const double nx = detail::norm2(x);
        if (nx > 0.5) {
          detail::scale(x, 1.0 / nx);
          const double theta = detail::dot(x, m.apply(x));
          if (residual_norm(m, theta, x) <= accept) {
            out.converged = true;
            out.pair.value = theta;
            out.pair.vector = std::move(x);
            return out;
          }
        }
      }
    }

    if (b <= accept) {
      // invariant subspace exhausted without an acceptable Ritz pair;
      // caller restarts with a fresh vector
      return out;
    }
    beta.push_back(b);
    detail::scale(w, 1.0 / b);
    basis.push_back(std::move(w));
  }
  return out;
}

std::vector<EigenPair> lowest_lanczos(const SymmetricMatrix& m,
                                      std::size_t count,
                                      const SolverOptions& opts) {
  const std::size_t n = m.dim();
  const double nrm = std::max(m.norm_estimate(), 1e-300);
  const double accept = opts.residual_rtol * nrm;
  std::size_t max_steps = opts.max_lanczos_steps
                              ? opts.max_lanczos_steps
                              : std::min<std::size_t>(n, 600);

  std::vector<EigenPair> locked;
  for (std::size_t k = 0; k < count; ++k) {
    bool ok = false;
    std::size_t steps = max_steps;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
      LanczosRun run = lanczos_lowest(
          m, locked, opts.seed ^ (0xd1342543de82ef95ull * (k + 1) + restart),
          std::min(steps, n), accept, opts);
      if (run.converged) {
        locked.push_back(std::move(run.pair));
        ok = true;
        break;
      }
      steps = std::min(n, steps * 2);
    }
    if (!ok) {
      throw ConvergenceFailure("Lanczos failed to converge eigenpair " +
                               std::to_string(k));
    }
  }

  std::sort(locked.begin(), locked.end(),
            [](const EigenPair& a, const EigenPair& b) {
              return a.value < b.value;
            });
  for (EigenPair& p : locked) detail::fix_sign(p.vector);
  return locked;
}

}  // namespace

void SymmetricMatrix::add(std::size_t i, std::size_t j, double v) {
  if (i >= dim_ || j >= dim_) {
    throw std::invalid_argument("SymmetricMatrix::add: index out of range");
  }
  if (i > j) std::swap(i, j);
  entries_.push_back(Entry{i, j, v});
}

void SymmetricMatrix::apply(const double* x, double* y) const {
  for (std::size_t i = 0; i < dim_; ++i) y[i] = 0.0;
  for (const Entry& e : entries_) {
    y[e.row] += e.value * x[e.col];
    if (e.row != e.col) y[e.col] += e.value * x[e.row];
  }
}

std::vector<double> SymmetricMatrix::apply(const std::vector<double>& x) const {
  std::vector<double> y(dim_);
  apply(x.data(), y.data());
  return y;
}

double SymmetricMatrix::norm_estimate() const {
  std::vector<double> rowsum(dim_, 0.0);
  for (const Entry& e : entries_) {
    rowsum[e.row] += std::fabs(e.value);
    if (e.row != e.col) rowsum[e.col] += std::fabs(e.value);
  }
  double nrm = 0.0;
  for (double r : rowsum) nrm = std::max(nrm, r);
  return nrm;
}

std::vector<double> SymmetricMatrix::dense() const {
  std::vector<double> a(dim_ * dim_, 0.0);
  for (const Entry& e : entries_) {
    a[e.row * dim_ + e.col] += e.value;
    if (e.row != e.col) a[e.col * dim_ + e.row] += e.value;
  }
  return a;
}

std::vector<EigenPair> lowest_eigenpairs_symmetric(const SymmetricMatrix& m,
                                                   std::size_t count,
                                                   const SolverOptions& opts) {
  const std::size_t n = m.dim();
  if (n == 0 || count == 0 || count > n) {
    throw std::invalid_argument("lowest_eigenpairs_symmetric: bad count");
  }
  if (n == 1) {
    double d = 0.0;
    for (const auto& e : m.entries()) d += e.value;
    return {EigenPair{d, {1.0}}};
  }
  if (n <= opts.dense_threshold) return lowest_dense(m, count, opts);
  return lowest_lanczos(m, count, opts);
}

}  // namespace dicke

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"
#include "dicke/eigensolve.hpp"

// Tridiagonal path: Sturm-sequence bisection for eigenvalues, inverse
// iteration with a pivoted tridiagonal LU for eigenvectors. Sector matrices
// are small but solved millions of times across sweeps, so everything here
// is O(d) per eigenvalue and allocation-light.

namespace dicke {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

double inf_norm(const TridiagonalMatrix& m) {
  const std::size_t n = m.dim();
  double nrm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::fabs(m.diag[i]);
    if (i > 0) row += std::fabs(m.offdiag[i - 1]);
    if (i + 1 < n) row += std::fabs(m.offdiag[i]);
    nrm = std::max(nrm, row);
  }
  return nrm;
}

// Smallest pivot magnitude tolerated in the Sturm recurrence.
double pivmin_for(const TridiagonalMatrix& m) {
  double maxoff2 = 1.0;
  for (double e : m.offdiag) maxoff2 = std::max(maxoff2, e * e);
  return kSafeMin * maxoff2;
}

std::size_t count_below(const TridiagonalMatrix& m, double x, double pivmin) {
  const std::size_t n = m.dim();
  std::size_t count = 0;
  double t = m.diag[0] - x;
  if (std::fabs(t) <= pivmin) t = -pivmin;
  if (t < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    t = m.diag[i] - x - m.offdiag[i - 1] * m.offdiag[i - 1] / t;
    if (std::fabs(t) <= pivmin) t = -pivmin;
    if (t < 0.0) ++count;
  }
  return count;
}

// Bisection for the k-th (0-based) smallest eigenvalue.
double bisect_kth(const TridiagonalMatrix& m, std::size_t k, double lo,
                  double hi, double pivmin) {
  for (int it = 0; it < 220; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at machine resolution
    if (count_below(m, mid, pivmin) >= k + 1) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 2.0 * kEps * std::max(std::fabs(lo), std::fabs(hi)) +
                       2.0 * kSafeMin) {
      break;
    }
  }
  return 0.5 * (lo + hi);
}

// Pivoted LU of (T - shift I), LAPACK dgttrf layout: dl carries the L
// multipliers, d/du/du2 the three U bands, pivot[i] marks a row swap.
struct TridiagLU {
  std::vector<double> dl, d, du, du2;
  std::vector<char> pivot;

  TridiagLU(const TridiagonalMatrix& m, double shift, double pivfloor) {
    const std::size_t n = m.dim();
    d.resize(n);
    dl.assign(n > 0 ? n - 1 : 0, 0.0);
    du.assign(n > 0 ? n - 1 : 0, 0.0);
    du2.assign(n > 1 ? n - 2 : 0, 0.0);
    pivot.assign(n > 0 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = m.diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      dl[i] = m.offdiag[i];
      du[i] = m.offdiag[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::fabs(d[i]) >= std::fabs(dl[i])) {
        if (std::fabs(d[i]) < pivfloor) d[i] = std::copysign(pivfloor, d[i]);
        const double mult = dl[i] / d[i];
        dl[i] = mult;
        d[i + 1] -= mult * du[i];
      } else {
        const double mult = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = mult;
        const double tmp = d[i + 1];
        d[i + 1] = du[i] - mult * tmp;
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -mult * du[i + 1];
        }
        du[i] = tmp;
        pivot[i] = 1;
      }
    }
    if (!d.empty() && std::fabs(d[n - 1]) < pivfloor) {
      d[n - 1] = std::copysign(pivfloor, d[n - 1]);
    }
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (pivot[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ir = n; ir >= 3; --ir) {
      const std::size_t i = ir - 3;
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
  }
};

double residual_norm(const TridiagonalMatrix& m, double value,
                     const std::vector<double>& v) {
  const std::size_t n = m.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (m.diag[i] - value) * v[i];
    if (i > 0) r += m.offdiag[i - 1] * v[i - 1];
    if (i + 1 < n) r += m.offdiag[i] * v[i + 1];
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace

std::size_t eigenvalue_count_below(const TridiagonalMatrix& m, double x) {
  return count_below(m, x, pivmin_for(m));
}

std::vector<EigenPair> lowest_eigenpairs_tridiagonal(
    const TridiagonalMatrix& m, std::size_t count, const SolverOptions& opts) {
  const std::size_t n = m.dim();
  if (n == 0 || count == 0 || count > n) {
    throw std::invalid_argument("lowest_eigenpairs_tridiagonal: bad count");
  }
  if (m.offdiag.size() + 1 != n) {
    throw std::invalid_argument("TridiagonalMatrix: offdiag size mismatch");
  }

  if (n == 1) {
    return {EigenPair{m.diag[0], {1.0}}};
  }

  const double raw_norm = inf_norm(m);
  if (raw_norm == 0.0) {  // zero matrix: canonical basis, all values zero
    std::vector<EigenPair> out(count);
    for (std::size_t k = 0; k < count; ++k) {
      out[k].value = 0.0;
      out[k].vector.assign(n, 0.0);
      out[k].vector[k] = 1.0;
    }
    return out;
  }

  const double pivmin = pivmin_for(m);
  // keep the scale clear of the subnormal range so pivot floors and
  // residual thresholds stay representable
  const double nrm = std::max(raw_norm, kSafeMin / kEps);

  // Gershgorin enclosure.
  double lo = m.diag[0], hi = m.diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::fabs(m.offdiag[i - 1]);
    if (i + 1 < n) r += std::fabs(m.offdiag[i]);
    lo = std::min(lo, m.diag[i] - r);
    hi = std::max(hi, m.diag[i] + r);
  }
  const double pad = kEps * std::max(std::fabs(lo), std::fabs(hi)) + kSafeMin;
  lo -= pad;
  hi += pad;

  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) {
    values[k] = bisect_kth(m, k, lo, hi, pivmin);
  }
  std::sort(values.begin(), values.end());

  // Orthogonalization groups: inverse iteration alone cannot guarantee
  // orthogonality for close eigenvalues, so vectors of eigenvalues within
  // ortho_window of their predecessor are orthogonalized jointly. The much
  // tighter cluster_rtol window additionally gets distinct perturbed shifts.
  const double ortho_window = 1e-4 * nrm;
  const double cluster_window = opts.cluster_rtol * nrm;

  std::vector<EigenPair> out(count);
  std::vector<double> shifts(values);
  for (std::size_t k = 1; k < count; ++k) {
    if (shifts[k] - shifts[k - 1] < cluster_window) {
      shifts[k] = shifts[k - 1] + std::max(cluster_window, kEps * nrm);
    }
  }

  std::size_t group_start = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0 && values[k] - values[k - 1] > ortho_window) group_start = k;

    const TridiagLU lu(m, shifts[k], kEps * nrm);
    const double accept = opts.residual_rtol * nrm;
    bool done = false;
    for (int restart = 0; restart <= opts.max_restarts && !done; ++restart) {
      std::vector<double> x = detail::random_unit_vector(
          n, opts.seed ^ (0x517cc1b727220a95ull * (k + 1) + restart));
      for (int iter = 0; iter < 12; ++iter) {
        lu.solve(x);
        // keep the iterate orthogonal to earlier members of the group
        for (std::size_t j = group_start; j < k; ++j) {
          detail::axpy(-detail::dot(x, out[j].vector), out[j].vector, x);
        }
        const double growth = detail::norm2(x);
        if (growth == 0.0 || !std::isfinite(growth)) break;
        detail::scale(x, 1.0 / growth);
        if (iter >= 1 || growth > 1.0 / (kEps * 100.0)) {
          if (residual_norm(m, values[k], x) <= accept) {
            out[k].value = values[k];
            out[k].vector = x;
            done = true;
            break;
          }
        }
      }
    }
    if (!done) {
      throw ConvergenceFailure(
          "inverse iteration failed at eigenvalue index " + std::to_string(k) +
          " (degenerate cluster?)");
    }
  }

  // Final safety: repair any residual non-orthogonality (possible at the
  // edges of the grouping window), then re-check the invariants.
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      const double ovl = detail::dot(out[k].vector, out[j].vector);
      if (std::fabs(ovl) > 1e-11) {
        detail::axpy(-ovl, out[j].vector, out[k].vector);
      }
    }
    const double nv = detail::norm2(out[k].vector);
    if (nv < 0.1) {
      throw ConvergenceFailure("orthogonalization collapsed an eigenvector");
    }
    detail::scale(out[k].vector, 1.0 / nv);
    detail::fix_sign(out[k].vector);
    if (residual_norm(m, out[k].value, out[k].vector) >
        opts.residual_rtol * nrm) {
      throw ConvergenceFailure("residual check failed after orthogonalization");
    }
  }
  return out;
}

}  // namespace dicke

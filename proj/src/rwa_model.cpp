#include "dicke/rwa_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dicke/spin_algebra.hpp"

namespace dicke {

void ModelParams::validate() const {
  if (!(omega > 0.0) || !(omega0 > 0.0)) {
    throw std::invalid_argument("ModelParams: omega and omega0 must be > 0");
  }
  if (lambda < 0.0 || epsilon < 0.0) {
    throw std::invalid_argument("ModelParams: lambda and epsilon must be >= 0");
  }
  if (n_atoms < 1) {
    throw std::invalid_argument("ModelParams: n_atoms must be >= 1");
  }
}

TridiagonalMatrix build_sector_matrix(const ModelParams& p, long L) {
  p.validate();
  if (L < 0) throw std::invalid_argument("build_sector_matrix: L < 0");
  const int n = p.n_atoms;
  const long e_max = std::min<long>(n, L);
  const std::size_t dim = static_cast<std::size_t>(e_max) + 1;

  TridiagonalMatrix m;
  m.diag.resize(dim);
  m.offdiag.resize(dim - 1);
  const double g = p.lambda / std::sqrt(static_cast<double>(n));
  for (long e = 0; e <= e_max; ++e) {
    m.diag[e] = p.omega * static_cast<double>(L - e) +
                p.omega0 * (e - 0.5 * n);
    if (e < e_max) {
      m.offdiag[e] = g * std::sqrt(static_cast<double>(L - e)) *
                     jplus_coeff(DickeLabel(n, static_cast<int>(e)));
    }
  }
  return m;
}

std::pair<double, SectorState> sector_ground(const ModelParams& p, long L,
                                             const SolverOptions& opts) {
  const TridiagonalMatrix m = build_sector_matrix(p, L);
  std::vector<EigenPair> pairs = lowest_eigenpairs_tridiagonal(m, 1, opts);
  SectorState s;
  s.excitation = L;
  s.coeffs = std::move(pairs[0].vector);
  return {pairs[0].value, std::move(s)};
}

RwaGroundState ground_state(const ModelParams& p, const ScanPolicy& scan,
                            const SolverOptions& opts) {
  p.validate();
  const long l_max = scan.l_max >= 0 ? scan.l_max : 64L * p.n_atoms;

  RwaGroundState best;
  best.params = p;
  best.energy = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  double best_second_of_winner = std::numeric_limits<double>::infinity();

  int stale = 0;
  bool stopped_early = false;
  for (long L = 0; L <= l_max; ++L) {
    const TridiagonalMatrix m = build_sector_matrix(p, L);
    const std::size_t want = std::min<std::size_t>(2, m.dim());
    std::vector<EigenPair> pairs = lowest_eigenpairs_tridiagonal(m, want, opts);
    const double e0 = pairs[0].value;

    if (e0 < best.energy) {  // ties break to the smaller (earlier) L
      if (best.energy < second) second = best.energy;
      best.energy = e0;
      best.sector.excitation = L;
      best.sector.coeffs = std::move(pairs[0].vector);
      best_second_of_winner = pairs.size() > 1
                                  ? pairs[1].value
                                  : std::numeric_limits<double>::infinity();
      stale = 0;
    } else {
      if (e0 < second) second = e0;
      ++stale;
      if (!scan.exhaustive && stale >= scan.patience) {
        stopped_early = true;
        break;
      }
    }
  }
  if (!stopped_early && !scan.exhaustive) {
    throw ScanExhausted("sector scan still improving at L = " +
                        std::to_string(l_max) +
                        " (increase l_max or reduce lambda)");
  }

  best.first_excited_energy = std::min(second, best_second_of_winner);
  return best;
}

std::vector<std::pair<double, long>> excitation_staircase(
    const ModelParams& tmpl, const std::vector<double>& lambda_grid,
    const ScanPolicy& scan, const SolverOptions& opts) {
  std::vector<std::pair<double, long>> out;
  out.reserve(lambda_grid.size());
  for (double lam : lambda_grid) {
    ModelParams p = tmpl;
    p.lambda = lam;
    out.emplace_back(lam, ground_state(p, scan, opts).sector.excitation);
  }
  return out;
}

namespace {

void bisect_transitions(const ModelParams& tmpl, double lo, long l_lo,
                        double hi, long l_hi, double tol,
                        const ScanPolicy& scan, const SolverOptions& opts,
                        std::vector<double>& out) {
  if (l_lo == l_hi) return;
  if (hi - lo <= tol) {
    out.push_back(0.5 * (lo + hi));
    return;
  }
  const double mid = 0.5 * (lo + hi);
  ModelParams p = tmpl;
  p.lambda = mid;
  const long l_mid = ground_state(p, scan, opts).sector.excitation;
  bisect_transitions(tmpl, lo, l_lo, mid, l_mid, tol, scan, opts, out);
  bisect_transitions(tmpl, mid, l_mid, hi, l_hi, tol, scan, opts, out);
}

}  // namespace

std::vector<double> find_transitions(const ModelParams& tmpl, double lambda_lo,
                                     double lambda_hi, double tol,
                                     const ScanPolicy& scan,
                                     const SolverOptions& opts) {
  if (!(lambda_lo < lambda_hi) || !(tol > 0.0)) {
    throw std::invalid_argument("find_transitions: need lo < hi and tol > 0");
  }
  auto sector_at = [&](double lam) {
    ModelParams p = tmpl;
    p.lambda = lam;
    return ground_state(p, scan, opts).sector.excitation;
  };
  std::vector<double> out;
  bisect_transitions(tmpl, lambda_lo, sector_at(lambda_lo), lambda_hi,
                     sector_at(lambda_hi), tol, scan, opts, out);
  return out;
}

}  // namespace dicke

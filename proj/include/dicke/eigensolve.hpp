#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicke {

// Thrown when bisection/inverse iteration or Lanczos fails to reach the
// requested residual after the configured number of restarts. Usually
// signals a degenerate cluster the caller should widen.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Symmetric tridiagonal matrix; only one off-diagonal is stored.
struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size diag.size() - 1

  std::size_t dim() const { return diag.size(); }
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

struct SolverOptions {
  // Accept a pair only if ||M v - value v||_2 <= residual_rtol * ||M||.
  double residual_rtol = 1e-10;
  // Eigenvalues closer than cluster_rtol * scale are treated as one cluster
  // and their vectors are orthogonalized jointly during inverse iteration.
  double cluster_rtol = 1e-12;
  // Symmetric solver: dense Householder reduction up to this dimension,
  // Lanczos with full reorthogonalization above it.
  std::size_t dense_threshold = 2048;
  // Restarts with fresh start vectors before giving up.
  int max_restarts = 4;
  // Lanczos iteration cap per deflation step (0 = choose from dimension).
  std::size_t max_lanczos_steps = 0;
  // Seed for the deterministic start-vector generator.
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// Number of eigenvalues of `m` strictly below `x` (Sturm/LDL^T count).
std::size_t eigenvalue_count_below(const TridiagonalMatrix& m, double x);

// The `count` smallest eigenpairs in ascending order. Eigenvectors are
// orthonormal and sign-fixed: the largest-magnitude component is positive,
// ties broken toward the lowest index. Bit-deterministic for fixed input.
std::vector<EigenPair> lowest_eigenpairs_tridiagonal(
    const TridiagonalMatrix& m, std::size_t count,
    const SolverOptions& opts = {});

// Sparse symmetric matrix in coordinate form. Each off-diagonal coupling is
// stored exactly once (upper triangle); symmetry is implied by storage.
class SymmetricMatrix {
 public:
  struct Entry {
    std::size_t row, col;  // row <= col
    double value;
  };

  explicit SymmetricMatrix(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // Stores M(i,j) = M(j,i) = v. Callers must write each coupling once.
  void add(std::size_t i, std::size_t j, double v);

  // y = M x
  void apply(const double* x, double* y) const;
  std::vector<double> apply(const std::vector<double>& x) const;

  // Gershgorin bound on max |eigenvalue|; also used as the residual scale.
  double norm_estimate() const;

  // Row-major dense copy (for the dense reduction path and tests).
  std::vector<double> dense() const;

 private:
  std::size_t dim_;
  std::vector<Entry> entries_;
};

// The `count` smallest eigenpairs of a sparse symmetric matrix, ascending,
// orthonormal, sign-fixed as above. Dense Householder reduction below
// opts.dense_threshold, deflated Lanczos with full reorthogonalization
// above it.
std::vector<EigenPair> lowest_eigenpairs_symmetric(
    const SymmetricMatrix& m, std::size_t count,
    const SolverOptions& opts = {});

}  // namespace dicke

#pragma once

// Lowest eigenvalues of a sparse symmetric positive semidefinite matrix by
// Chebyshev-filtered subspace iteration.
//
// Each iteration applies a degree-d Chebyshev polynomial that is bounded on
// [a, b] and grows below a, then a Rayleigh-Ritz step. b is the Gershgorin
// bound. a is normally the largest Ritz value of the block; when that value
// sits in the same cluster as the wanted ones (a degenerate eigenvalue
// straddling the block edge, common on lattices) the filter would no longer
// separate the cluster from the eigenvalues above it, so a is moved to twice
// the largest wanted Ritz value instead.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>

namespace hk {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// max_i Σ_j |a_ij|, an upper bound on the spectral radius.
[[nodiscard]] double gershgorin_bound(const SparseMatrix& a);

struct EigenOptions {
    int block = 0;          // 0 selects count + 12
    int degree = 30;        // Chebyshev filter degree
    int max_iterations = 80;
    double tol = 1e-9;      // residual ‖Ay − θy‖ relative to the Gershgorin bound
    std::uint64_t seed = 1;
};

struct EigenResult {
    Eigen::VectorXd values;     // ascending
    Eigen::VectorXd residuals;  // per Ritz pair, absolute
    double bound = 0.0;         // Gershgorin bound
    int iterations = 0;
    bool converged = false;
};

/// The `count` smallest eigenvalues. Small matrices (n <= 400) go straight to
/// a dense solver.
[[nodiscard]] EigenResult lowest_eigenvalues(const SparseMatrix& a, int count,
                                             const EigenOptions& options = {});

}  // namespace hk

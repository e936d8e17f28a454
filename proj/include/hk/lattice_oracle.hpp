#pragma once

// Twisted discrete Hodge Laplacian on 𝔤-valued cochains of the periodic grid
// (ℤ/N)⁴, used as an independent check of the harmonic model on T⁴.
//
// Link (x, μ) joins x to x + e_μ. Crossing the cut x_μ = N−1 → 0 picks up the
// parallel transport Ad(φ_μ); every other link is untwisted. Since the φ_μ
// commute, d1∘d0 = 0 and ker Δ1 ≅ H¹(T⁴, E_φ).

#include <hk/spectral.hpp>
#include <hk/torus_moduli.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace hk {

inline constexpr int kOracleMinGrid = 4;
inline constexpr int kOracleMaxGrid = 10;
inline constexpr int kOracleHead = 20;
inline constexpr double kOracleGuardTolerance = 1e-6;

struct TwistedComplex {
    int grid = 0;
    int algebra_dim = 0;
    SparseMatrix d0;  // 0-cochains → 1-cochains
    SparseMatrix d1;  // 1-cochains → 2-cochains

    /// d0·d0ᵀ + d1ᵀ·d1 on 1-cochains.
    [[nodiscard]] SparseMatrix laplacian() const;
};

/// Cochain indices: site s = x0 + N(x1 + N(x2 + N x3)); a 0-cochain entry is
/// s·D + c, a 1-cochain entry (4s + μ)·D + c and a 2-cochain entry
/// (6s + p)·D + c with p enumerating μ < ν lexicographically.
[[nodiscard]] TwistedComplex twisted_complex(const HolonomyTuple& tuple, int grid);

/// Throws when some Ad(φ_μ) eigenphase lies within kOracleGuardTolerance of
/// 2πj/N for j ≢ 0 mod N.
void check_spurious_kernel_guard(const HolonomyTuple& tuple, int grid);

struct OracleResult {
    int grid = 0;
    int kernel_dim = 0;
    double spectral_gap = 0.0;  // first eigenvalue above 1e-6 of the Gershgorin bound
    double gap_ratio = 0.0;     // gap / largest eigenvalue below it
    std::vector<double> eigenvalues_head;
    int solver_iterations = 0;
    bool converged = false;
};

/// k = 1 only. Kernel = eigenvalues below 1% of the gap; throws when the gap
/// ratio is under 10 or the kernel fills the computed head.
[[nodiscard]] OracleResult lattice_harmonic_oracle(const HolonomyTuple& tuple, int k, int grid,
                                                   std::uint64_t seed = 1);

}  // namespace hk

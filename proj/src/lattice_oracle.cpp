#include <hk/lattice_oracle.hpp>

#include <hk/error.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hk {

namespace {

constexpr int kDims = 4;
constexpr std::array<std::array<int, 2>, 6> kPlanes{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

struct Grid {
    int n;

    [[nodiscard]] int sites() const { return n * n * n * n; }
    [[nodiscard]] int coord(int s, int mu) const {
        for (int i = 0; i < mu; ++i) s /= n;
        return s % n;
    }
    [[nodiscard]] int shift(int s, int mu) const {
        int stride = 1;
        for (int i = 0; i < mu; ++i) stride *= n;
        return coord(s, mu) == n - 1 ? s - (n - 1) * stride : s + stride;
    }
};

using Triplets = std::vector<Eigen::Triplet<double>>;

// rows[row0 + a] += sign · T (a, b) · col[col0 + b], T = identity off the cut.
void add_block(Triplets& out, int row0, int col0, double sign, const Eigen::MatrixXd* twist,
               int dim) {
    for (int a = 0; a < dim; ++a) {
        if (twist == nullptr) {
            out.emplace_back(row0 + a, col0 + a, sign);
            continue;
        }
        for (int b = 0; b < dim; ++b) {
            const double v = (*twist)(a, b);
            if (v != 0.0) out.emplace_back(row0 + a, col0 + b, sign * v);
        }
    }
}

}  // namespace

SparseMatrix TwistedComplex::laplacian() const {
    const SparseMatrix down = d0 * SparseMatrix(d0.transpose());
    const SparseMatrix up = SparseMatrix(d1.transpose()) * d1;
    return down + up;
}

TwistedComplex twisted_complex(const HolonomyTuple& tuple, int grid) {
    if (tuple.size() != kDims) {
        throw Error("lattice complex is built on (Z/N)^4 and needs 4 holonomy generators, got " +
                    std::to_string(tuple.size()));
    }
    if (grid < kOracleMinGrid || grid > kOracleMaxGrid) {
        throw Error("lattice grid size must lie in [" + std::to_string(kOracleMinGrid) + ", " +
                    std::to_string(kOracleMaxGrid) + "], got " + std::to_string(grid));
    }
    validate_tuple(tuple);
    const int dim = tuple.group.algebra_dim();
    std::array<Eigen::MatrixXd, kDims> ad;
    for (int mu = 0; mu < kDims; ++mu) ad[mu] = adjoint_matrix(tuple.group, tuple.generators[mu]);

    const Grid g{grid};
    const int sites = g.sites();
    const auto twist = [&](int s, int mu) -> const Eigen::MatrixXd* {
        return g.coord(s, mu) == grid - 1 ? &ad[mu] : nullptr;
    };
    const auto vertex = [&](int s) { return s * dim; };
    const auto edge = [&](int s, int mu) { return (s * kDims + mu) * dim; };
    const auto face = [&](int s, int p) { return (s * 6 + p) * dim; };

    Triplets t0;
    Triplets t1;
    for (int s = 0; s < sites; ++s) {
        for (int mu = 0; mu < kDims; ++mu) {
            add_block(t0, edge(s, mu), vertex(g.shift(s, mu)), 1.0, twist(s, mu), dim);
            add_block(t0, edge(s, mu), vertex(s), -1.0, nullptr, dim);
        }
        for (int p = 0; p < 6; ++p) {
            const auto [mu, nu] = kPlanes[p];
            add_block(t1, face(s, p), edge(s, mu), 1.0, nullptr, dim);
            add_block(t1, face(s, p), edge(g.shift(s, mu), nu), 1.0, twist(s, mu), dim);
            add_block(t1, face(s, p), edge(g.shift(s, nu), mu), -1.0, twist(s, nu), dim);
            add_block(t1, face(s, p), edge(s, nu), -1.0, nullptr, dim);
        }
    }
    TwistedComplex c;
    c.grid = grid;
    c.algebra_dim = dim;
    c.d0.resize(sites * kDims * dim, sites * dim);
    c.d0.setFromTriplets(t0.begin(), t0.end());
    c.d1.resize(sites * 6 * dim, sites * kDims * dim);
    c.d1.setFromTriplets(t1.begin(), t1.end());
    return c;
}

void check_spurious_kernel_guard(const HolonomyTuple& tuple, int grid) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double step = two_pi / grid;
    for (int mu = 0; mu < tuple.size(); ++mu) {
        const Eigen::MatrixXd ad = adjoint_matrix(tuple.group, tuple.generators[mu]);
        Eigen::EigenSolver<Eigen::MatrixXd> eig(ad, false);
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
            double phase = std::fmod(std::arg(eig.eigenvalues()(i)), two_pi);
            if (phase < 0.0) phase += two_pi;
            const long j = std::lround(phase / step);
            if (j % grid == 0) continue;
            if (std::abs(phase - static_cast<double>(j) * step) < kOracleGuardTolerance) {
                std::ostringstream msg;
                msg << "holonomy generator " << mu << " has adjoint eigenphase " << phase
                    << " within " << kOracleGuardTolerance << " of 2pi*" << j << "/" << grid
                    << "; the lattice would carry a spurious kernel";
                throw Error(msg.str());
            }
        }
    }
}

OracleResult lattice_harmonic_oracle(const HolonomyTuple& tuple, int k, int grid,
                                     std::uint64_t seed) {
    if (k != 1) throw Error("lattice oracle supports k = 1 only, got " + std::to_string(k));
    const TwistedComplex complex = twisted_complex(tuple, grid);
    check_spurious_kernel_guard(tuple, grid);

    EigenOptions options;
    options.seed = seed;
    const EigenResult eig = lowest_eigenvalues(complex.laplacian(), kOracleHead, options);

    OracleResult r;
    r.grid = grid;
    r.converged = eig.converged;
    r.solver_iterations = eig.iterations;
    r.eigenvalues_head.assign(eig.values.data(), eig.values.data() + eig.values.size());
    const double cut = 1e-6 * eig.bound;
    Eigen::Index gap_index = 0;
    while (gap_index < eig.values.size() && eig.values(gap_index) <= cut) ++gap_index;
    if (gap_index == eig.values.size()) {
        throw Error("lattice kernel fills all " + std::to_string(kOracleHead) +
                    " computed eigenvalues; no spectral gap found");
    }
    r.spectral_gap = eig.values(gap_index);
    const double below =
        gap_index > 0 ? std::max(eig.values(gap_index - 1), 0.0) : 0.0;
    const double floor = std::numeric_limits<double>::epsilon() * eig.bound;
    r.gap_ratio = r.spectral_gap / std::max(below, floor);
    if (r.gap_ratio < 10.0) {
        std::ostringstream msg;
        msg << "lattice spectral gap ratio " << r.gap_ratio << " is under 10; kernel is ambiguous";
        throw Error(msg.str());
    }
    for (double v : r.eigenvalues_head) r.kernel_dim += v < 0.01 * r.spectral_gap ? 1 : 0;
    return r;
}

}  // namespace hk

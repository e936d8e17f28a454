#include <hk/lattice_oracle.hpp>
#include <hk/spectral.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace {

hk::HolonomyTuple tuple_of(std::vector<double> angles) {
    return hk::su2_holonomy_from_angles(angles);
}

// Spectrum of the twisted 1-form Laplacian by Fourier analysis. Each su(2)
// component picks up the phase 0 or ±2θ_μ across the cut; gauging it evenly
// over the N links gives momenta (2πm + α_μ)/N, and Δ1 acts on the four link
// directions as the scalar Laplacian Σ_μ 4 sin²(q_μ/2).
std::vector<double> fourier_spectrum(const std::vector<double>& angles, int n) {
    std::vector<double> out;
    for (int sign : {0, 1, -1}) {
        for (int m0 = 0; m0 < n; ++m0)
        for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2)
        for (int m3 = 0; m3 < n; ++m3) {
            const int m[4] = {m0, m1, m2, m3};
            double lambda = 0.0;
            for (int mu = 0; mu < 4; ++mu) {
                const double q = (2.0 * std::numbers::pi * m[mu] + 2.0 * sign * angles[mu]) / n;
                lambda += 4.0 * std::sin(q / 2.0) * std::sin(q / 2.0);
            }
            for (int dir = 0; dir < 4; ++dir) out.push_back(lambda);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

hk::SparseMatrix random_sparse_psd(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<Eigen::Triplet<double>> trips;
    for (int r = 0; r < 3 * n; ++r) {
        const int i = pick(rng), j = pick(rng);
        trips.emplace_back(r, i, normal(rng));
        trips.emplace_back(r, j, normal(rng));
    }
    hk::SparseMatrix b(3 * n, n);
    b.setFromTriplets(trips.begin(), trips.end());
    return hk::SparseMatrix(b.transpose() * b);
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("gershgorin bound dominates the spectrum") {
    const hk::SparseMatrix a = random_sparse_psd(60, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(a)};
    CHECK(hk::gershgorin_bound(a) >= eig.eigenvalues().maxCoeff());
}

TEST_CASE("subspace iteration matches a dense solver") {
    for (int n : {120, 700}) {
        const hk::SparseMatrix a = random_sparse_psd(n, static_cast<std::uint64_t>(n));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(a)};
        const hk::EigenResult r = hk::lowest_eigenvalues(a, 10);
        CHECK(r.converged);
        REQUIRE(r.values.size() == 10);
        for (int i = 0; i < 10; ++i) {
            CHECK(r.values(i) == doctest::Approx(eig.eigenvalues()(i)).epsilon(1e-8).scale(r.bound));
        }
    }
}

TEST_CASE("differentials compose to zero") {
    for (const auto& angles : {std::vector<double>{0.7, 1.3, 2.1, 0.4}, std::vector<double>{0, 0, 0, 0}}) {
        const hk::TwistedComplex c = hk::twisted_complex(tuple_of(angles), 4);
        CHECK(c.d0.cols() == 4 * 4 * 4 * 4 * 3);
        CHECK(c.d1.rows() == 6 * 4 * 4 * 4 * 4 * 3);
        const hk::SparseMatrix dd = c.d1 * c.d0;
        double worst = 0.0;
        for (int k = 0; k < dd.outerSize(); ++k) {
            for (hk::SparseMatrix::InnerIterator it(dd, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
        }
        CHECK(worst < 1e-14);
    }
}

TEST_CASE("lattice spectrum matches Fourier analysis") {
    const std::vector<double> angles{0.7, 1.3, 2.1, 0.4};
    const hk::TwistedComplex c = hk::twisted_complex(tuple_of(angles), 4);
    const hk::SparseMatrix lap = c.laplacian();
    const std::vector<double> ref = fourier_spectrum(angles, 4);
    REQUIRE(static_cast<Eigen::Index>(ref.size()) == lap.rows());
    const hk::EigenResult r = hk::lowest_eigenvalues(lap, 40);
    CHECK(r.converged);
    for (int i = 0; i < 40; ++i) CHECK(r.values(i) == doctest::Approx(ref[static_cast<std::size_t>(i)]).scale(1.0).epsilon(1e-8));
}

TEST_CASE("oracle head matches Fourier analysis at N=6") {
    for (const auto& angles : {std::vector<double>{0.7, 1.3, 2.1, 0.4}, std::vector<double>{0, 0, 0, 0}}) {
        const hk::OracleResult o = hk::lattice_harmonic_oracle(tuple_of(angles), 1, 6);
        const std::vector<double> ref = fourier_spectrum(angles, 6);
        REQUIRE(o.eigenvalues_head.size() == static_cast<std::size_t>(hk::kOracleHead));
        for (std::size_t i = 0; i < o.eigenvalues_head.size(); ++i) {
            CHECK(o.eigenvalues_head[i] == doctest::Approx(ref[i]).scale(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("kernel dimension is 4r across grids") {
    const std::vector<double> generic{0.7, 1.3, 2.1, 0.4};
    const std::vector<double> trivial{0, 0, 0, 0};
    for (int n : {4, 6, 8}) {
        const hk::OracleResult g = hk::lattice_harmonic_oracle(tuple_of(generic), 1, n);
        CHECK(g.kernel_dim == 4);
        CHECK(g.gap_ratio > 10.0);
        if (n < 8) {
            const hk::OracleResult t = hk::lattice_harmonic_oracle(tuple_of(trivial), 1, n);
            CHECK(t.kernel_dim == 12);
        }
    }
    const double pi = std::numbers::pi;
    CHECK(hk::lattice_harmonic_oracle(tuple_of({pi, pi, pi, pi}), 1, 4).kernel_dim == 12);
}

TEST_CASE("spurious kernel guard") {
    CHECK_THROWS_AS(hk::check_spurious_kernel_guard(tuple_of({2 * std::numbers::pi / 6, 0, 0, 0}), 6),
                    hk::Error);
    CHECK_THROWS_AS(hk::check_spurious_kernel_guard(tuple_of({1.047198, 0, 0, 0}), 6), hk::Error);
    CHECK_THROWS_AS(hk::check_spurious_kernel_guard(tuple_of({0, 0, std::numbers::pi / 4, 0}), 4),
                    hk::Error);
    CHECK_NOTHROW(hk::check_spurious_kernel_guard(tuple_of({0.7, 1.3, 2.1, 0.4}), 6));
    CHECK_NOTHROW(hk::check_spurious_kernel_guard(tuple_of({std::numbers::pi, 0, 0, 0}), 6));
    CHECK_THROWS_AS((void)hk::lattice_harmonic_oracle(tuple_of({1.047198, 0, 0, 0}), 1, 6), hk::Error);
}

TEST_CASE("oracle preconditions") {
    const hk::HolonomyTuple t = tuple_of({0.7, 1.3, 2.1, 0.4});
    CHECK_THROWS_AS((void)hk::lattice_harmonic_oracle(t, 1, 3), hk::Error);
    CHECK_THROWS_AS((void)hk::lattice_harmonic_oracle(t, 1, 11), hk::Error);
    CHECK_THROWS_AS((void)hk::lattice_harmonic_oracle(t, 2, 6), hk::Error);
}

}

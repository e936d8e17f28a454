#include "helpers.hpp"

#include <hk/quaternionic.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using hk::Axis;
using testing::e;

namespace {

// Columns are images of basis vectors: table[i] = {target, sign}.
Eigen::MatrixXd from_table(const int (&table)[4][2]) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) m(table[i][0], i) = table[i][1];
    return m;
}

const int kI[4][2] = {{1, 1}, {0, -1}, {3, 1}, {2, -1}};
const int kJ[4][2] = {{2, 1}, {3, -1}, {0, -1}, {1, 1}};
const int kK[4][2] = {{3, 1}, {2, 1}, {1, -1}, {0, -1}};

// ω(e_i, e_j) = g(A e_i, e_j) evaluated entry by entry.
Eigen::MatrixXd kahler_oracle(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& a) {
    const auto n = gram.rows();
    Eigen::MatrixXd w(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            w(i, j) = (a.col(i)).dot(gram.col(j));
        }
    }
    return w;
}

}  // namespace

TEST_SUITE("quaternionic") {

TEST_CASE("standard k=1 structure tables") {
    const hk::HyperKahlerSpace s = hk::standard_space(1);
    CHECK(s.structure(Axis::I) == from_table(kI));
    CHECK(s.structure(Axis::J) == from_table(kJ));
    CHECK(s.structure(Axis::K) == from_table(kK));
    const Eigen::MatrixXd ijk = s.structure(Axis::I) * s.structure(Axis::J) * s.structure(Axis::K);
    CHECK(ijk == -Eigen::MatrixXd::Identity(4, 4));
}

TEST_CASE("standard k=2 structures are orthogonal and block diagonal") {
    const hk::HyperKahlerSpace s = hk::standard_space(2);
    for (Axis a : hk::kAxes) {
        const Eigen::MatrixXd& m = s.structure(a);
        CHECK(m.transpose() * m == Eigen::MatrixXd::Identity(8, 8));
        CHECK(m.block(0, 4, 4, 4).isZero());
        CHECK(m.block(0, 0, 4, 4) == m.block(4, 4, 4, 4));
    }
}

TEST_CASE("standard_space rejects k out of range") {
    CHECK_THROWS_AS((void)hk::standard_space(0), hk::Error);
    CHECK_THROWS_AS((void)hk::standard_space(5), hk::Error);
}

TEST_CASE("identity frame reproduces the standard space") {
    const hk::HyperKahlerSpace s = hk::conjugated_space(2, Eigen::MatrixXd::Identity(8, 8));
    const hk::HyperKahlerSpace ref = hk::standard_space(2);
    CHECK(s.gram() == ref.gram());
    for (Axis a : hk::kAxes) CHECK(s.structure(a) == ref.structure(a));
}

TEST_CASE("random spaces satisfy the relations and compatibility") {
    for (int k = 1; k <= 3; ++k) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const hk::HyperKahlerSpace s = hk::random_space(k, seed);
            const auto rep = hk::check_quaternionic(s, 1e-9);
            CHECK(rep.pass);
            CHECK(rep.relations.max() < 1e-9);
            const hk::KahlerForms f = hk::kahler_forms(s);
            for (Axis a : hk::kAxes) {
                const Eigen::MatrixXd& w = f.matrix(a);
                CHECK((w + w.transpose()).norm() < 1e-10 * w.norm());
                CHECK(w.isApprox(kahler_oracle(s.gram(), s.structure(a)), 1e-12));
                CHECK(std::abs(w.determinant()) > 0.0);
            }
        }
    }
}

TEST_CASE("random_space is a pure function of its seed") {
    const hk::HyperKahlerSpace a = hk::random_space(2, 99);
    const hk::HyperKahlerSpace b = hk::random_space(2, 99);
    CHECK(a.gram() == b.gram());
    CHECK(a.gram() != hk::random_space(2, 100).gram());
}

TEST_CASE("standard Kähler forms") {
    const hk::KahlerForms f = hk::kahler_forms(hk::standard_space(1));
    CHECK(testing::identical(f.form(Axis::I), e(4, {0, 1}) + e(4, {2, 3})));
    CHECK(testing::identical(f.form(Axis::J), e(4, {0, 2}) - e(4, {1, 3})));
    CHECK(testing::identical(f.form(Axis::K), e(4, {0, 3}) + e(4, {1, 2})));
    CHECK(testing::identical(hk::wedge(f.form(Axis::I), f.form(Axis::I)), e(4, {0, 1, 2, 3}, 2.0)));
    CHECK(hk::wedge(f.form(Axis::I), f.form(Axis::J)).is_zero());
}

TEST_CASE("top power equals n! vol on random spaces") {
    for (int k = 1; k <= 3; ++k) {
        const hk::HyperKahlerSpace s = hk::random_space(k, 40 + static_cast<std::uint64_t>(k));
        const hk::KahlerForms f = hk::kahler_forms(s);
        const int n = 2 * k;
        double fact = 1.0;
        for (int i = 2; i <= n; ++i) fact *= i;
        for (Axis a : hk::kAxes) {
            const double ratio = hk::volume_ratio(hk::wedge_power(f.form(a), n), s.metric());
            CHECK(ratio == doctest::Approx(fact).epsilon(1e-10));
        }
    }
}

TEST_CASE("unit structures square to minus one") {
    const hk::HyperKahlerSpace s = hk::random_space(2, 3);
    const auto id = Eigen::MatrixXd::Identity(8, 8);
    CHECK(hk::unit_structure(s, 1, 0, 0) == s.structure(Axis::I));
    const Eigen::MatrixXd mk = hk::unit_structure(s, 0, 0, -1);
    CHECK(mk == -s.structure(Axis::K));
    CHECK((mk * mk + id).norm() < 1e-9);
    const double t = 1.0 / std::sqrt(3.0);
    const Eigen::MatrixXd q = hk::unit_structure(s, t, t, t);
    CHECK((q * q + id).norm() / (hk::spectral_norm(q) * hk::spectral_norm(q)) < 1e-10);
    CHECK_THROWS_AS((void)hk::unit_structure(s, 1, 1, 0), hk::Error);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Vector3d u(normal(rng), normal(rng), normal(rng));
        u.normalize();
        const Eigen::MatrixXd r = hk::unit_structure(s, u(0), u(1), u(2));
        CHECK((r * r + id).norm() / (hk::spectral_norm(r) * hk::spectral_norm(r)) < 1e-10);
    }
}

TEST_CASE("quaternionic report") {
    const auto clean = hk::check_quaternionic(hk::standard_space(1), 1e-12);
    CHECK(clean.pass);
    CHECK(clean.relations.max() == 0.0);
    for (double c : clean.compatibility) CHECK(c == 0.0);

    const hk::HyperKahlerSpace s = hk::standard_space(1);
    Eigen::MatrixXd bad_i = s.structure(Axis::I);
    bad_i(0, 0) += 0.01;
    const hk::HyperKahlerSpace corrupt(1, s.gram(), bad_i, s.structure(Axis::J),
                                       s.structure(Axis::K));
    const auto rep = hk::check_quaternionic(corrupt, 1e-9);
    CHECK_FALSE(rep.pass);
    CHECK(rep.relations.i_squared > 5e-3);
    CHECK(rep.relations.i_squared < 5e-2);
}

TEST_CASE("musical isomorphisms") {
    const hk::HyperKahlerSpace id = hk::standard_space(1);
    CHECK(hk::musical_flat(Eigen::Vector4d(1, 0, 0, 0), id) == Eigen::Vector4d(1, 0, 0, 0));
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
    g(0, 0) = 2.0;
    const hk::HyperKahlerSpace d(1, g, id.structure(Axis::I), id.structure(Axis::J),
                                 id.structure(Axis::K));
    CHECK(hk::musical_flat(Eigen::Vector4d(1, 0, 0, 0), d).isApprox(Eigen::Vector4d(0.5, 0, 0, 0)));

    const hk::HyperKahlerSpace s = hk::random_space(1, 12);
    const hk::KahlerForms f = hk::kahler_forms(s);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd v(4), w(4);
        for (int i = 0; i < 4; ++i) {
            v(i) = normal(rng);
            w(i) = normal(rng);
        }
        const Eigen::VectorXd vf = hk::musical_flat(v, s);
        CHECK((hk::musical_sharp(vf, s) - v).norm() < 1e-10 * v.norm());
        // ω_I(v♭, w♭) = g*(v, I* w) with I* = Iᵀ on covectors.
        const double lhs = vf.dot(f.matrix(Axis::I) * hk::musical_flat(w, s));
        const double rhs = v.dot(s.gram().inverse() * (s.structure(Axis::I).transpose() * w));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(v.norm() * w.norm()));
    }
}

}

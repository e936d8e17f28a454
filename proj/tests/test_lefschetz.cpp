#include "helpers.hpp"

#include <hk/lefschetz.hpp>
#include <hk/random.hpp>

#include <doctest.h>

#include <random>

using hk::Axis;
using hk::KForm;
using testing::e;

namespace {

// ★^{-1} ∘ L^{n-1} on the covector basis, from the oracle wedge and star.
Eigen::MatrixXd star_inverse_lefschetz_oracle(const hk::HyperKahlerSpace& s, Axis axis) {
    const int dim = s.dim();
    const int n = dim / 2;
    const oracle::Form omega = testing::to_oracle(hk::kahler_forms(s).form(axis));
    // ★ maps Λ^1 → Λ^{2n-1}; its inverse is what we need on degree 2n-1.
    const Eigen::MatrixXd star1 = oracle::star_matrix(s.gram(), 1, s.orientation());
    const auto top = oracle::subsets(dim, dim - 1);
    Eigen::MatrixXd images(static_cast<Eigen::Index>(top.size()), dim);
    for (int j = 0; j < dim; ++j) {
        oracle::Form f{{{j}, 1.0}};
        for (int step = 0; step < n - 1; ++step) f = oracle::wedge(omega, f);
        for (std::size_t r = 0; r < top.size(); ++r) {
            const auto it = f.find(top[r]);
            images(static_cast<Eigen::Index>(r), j) = it == f.end() ? 0.0 : it->second;
        }
    }
    return star1.fullPivLu().solve(images);
}

}  // namespace

TEST_SUITE("lefschetz") {

TEST_CASE("single Lefschetz steps on the standard 4-space") {
    const hk::HyperKahlerSpace s = hk::standard_space(1);
    const hk::GradedMap l1 = hk::lefschetz_operator(s, Axis::I, 1);
    CHECK(testing::identical(l1.apply(e(4, {0})), e(4, {0, 2, 3})));
    const hk::GradedMap l0 = hk::lefschetz_operator(s, Axis::I, 0);
    CHECK(testing::identical(l0.apply(KForm::scalar(4, 1.0)), hk::kahler_forms(s).form(Axis::I)));
    const hk::GradedMap lj = hk::lefschetz_power(s, Axis::J, 1);
    CHECK(testing::identical(lj.apply(e(4, {0})), e(4, {0, 1, 3}, -1.0)));
    CHECK(hk::lefschetz_power(s, Axis::I, 1).matrix() == l1.matrix());
}

TEST_CASE("operator shapes and overflow") {
    const hk::HyperKahlerSpace s = hk::standard_space(2);
    const hk::GradedMap l = hk::lefschetz_operator(s, Axis::K, 1);
    CHECK(l.matrix().rows() == 56);
    CHECK(l.matrix().cols() == 8);
    const hk::GradedMap p = hk::lefschetz_power(s, Axis::I, 3);
    CHECK(p.target_degree() == 7);
    CHECK(p.matrix().rows() == 8);
    CHECK(p.matrix().cols() == 8);
    CHECK_THROWS_AS((void)hk::lefschetz_operator(s, Axis::I, 7), hk::Error);
    CHECK_THROWS_AS((void)hk::lefschetz_power(s, Axis::I, 4), hk::Error);
    CHECK_THROWS_AS((void)l.apply(e(8, {0, 1})), hk::Error);
    CHECK_THROWS_AS((void)l.then(l), hk::Error);
}

TEST_CASE("powers agree with iterated wedge and with composed single steps") {
    std::mt19937_64 rng(2);
    for (int k = 1; k <= 3; ++k) {
        const hk::HyperKahlerSpace s = hk::random_space(k, 70 + static_cast<std::uint64_t>(k));
        const KForm omega = hk::kahler_forms(s).form(Axis::J);
        const int e_max = s.half_dim() - 1;
        const hk::GradedMap power = hk::lefschetz_power(omega, e_max);
        hk::GradedMap composed = hk::lefschetz_operator(omega, 1);
        for (int step = 1; step < e_max; ++step) {
            composed = composed.then(hk::lefschetz_operator(omega, 1 + 2 * step));
        }
        CHECK((composed.matrix() - power.matrix()).norm() <= 1e-10 * power.matrix().norm());
        for (int trial = 0; trial < 5; ++trial) {
            const KForm tau = hk::random_form(s.dim(), 1, rng);
            KForm direct = tau;
            for (int step = 0; step < e_max; ++step) direct = hk::wedge(omega, direct);
            CHECK((power.apply(tau) - direct).norm() <= 1e-10 * direct.norm());
        }
    }
}

TEST_CASE("hard Lefschetz") {
    const hk::HyperKahlerSpace s = hk::standard_space(1);
    for (Axis a : hk::kAxes) {
        const auto r = hk::hard_lefschetz_check(s, a, 1e-12);
        CHECK(r.invertible);
        CHECK(r.sigma_min == doctest::Approx(r.sigma_max).epsilon(1e-14));
    }
    for (int k = 1; k <= 2; ++k) {
        for (Axis a : hk::kAxes) CHECK(hk::hard_lefschetz_check(hk::random_space(k, 5), a, 1e-12).invertible);
    }
    const auto zero = hk::hard_lefschetz_check(KForm(4, 2), 1e-12);
    CHECK_FALSE(zero.invertible);
    CHECK(zero.sigma_min == 0.0);
}

TEST_CASE("pairing matrices") {
    const hk::HyperKahlerSpace s = hk::standard_space(1);
    const Eigen::MatrixXd p = hk::pairing_matrix(s, Axis::I);
    CHECK(p(0, 1) == 1.0);
    for (int k = 1; k <= 2; ++k) {
        const hk::HyperKahlerSpace r = hk::random_space(k, 31);
        for (Axis a : hk::kAxes) {
            const Eigen::MatrixXd m = hk::pairing_matrix(r, a);
            CHECK((m + m.transpose()).norm() <= 1e-10 * m.norm());
            CHECK(std::abs(m.determinant()) > 0.0);
            // Scaling the gram by λ scales ω by λ and vol by λ^n, so ϖ by 1/λ.
            const Eigen::MatrixXd m2 = hk::pairing_matrix(r.with_scaled_gram(2.0), a);
            CHECK((m2 - 0.5 * m).norm() <= 1e-10 * m.norm());
        }
    }
}

TEST_CASE("pairing entries match the oracle wedge") {
    const hk::HyperKahlerSpace s = hk::random_space(2, 14);
    const oracle::Form omega = testing::to_oracle(hk::kahler_forms(s).form(Axis::K));
    const oracle::Form omega3 = oracle::wedge(omega, oracle::wedge(omega, omega));
    const Eigen::MatrixXd p = hk::pairing_matrix(s, Axis::K);
    const double vol = s.orientation() * std::sqrt(s.gram().determinant());
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const oracle::Form f = oracle::wedge(oracle::wedge({{{i}, 1.0}}, omega3), {{{j}, 1.0}});
            const double top = f.empty() ? 0.0 : f.begin()->second;
            CHECK(p(i, j) == doctest::Approx(top / vol).epsilon(1e-10).scale(p.norm()));
        }
    }
}

TEST_CASE("key identity constant is (n-1)!") {
    // Standard spaces use the integer-sign path and come out exact.
    for (int k = 1; k <= 2; ++k) {
        const hk::HyperKahlerSpace s = hk::standard_space(k);
        for (Axis a : hk::kAxes) {
            CHECK(hk::key_identity_residual(s, a, hk::IdentityScale::NMinusOneFactorial) == 0.0);
            const double n = s.half_dim();
            // The n!-scaled variant misses by exactly 1 - 1/n.
            CHECK(hk::key_identity_residual(s, a, hk::IdentityScale::NFactorial) ==
                  doctest::Approx(1.0 - 1.0 / n).epsilon(1e-15));
        }
    }
    for (int k = 1; k <= 2; ++k) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const hk::HyperKahlerSpace s = hk::random_space(k, seed);
            for (Axis a : hk::kAxes) {
                const Eigen::MatrixXd lib = hk::star_inverse_lefschetz(
                    hk::kahler_forms(s).form(a), s.metric());
                const Eigen::MatrixXd ref = star_inverse_lefschetz_oracle(s, a);
                CHECK((lib - ref).norm() <= 1e-8 * ref.norm());
                const Eigen::MatrixXd expected =
                    hk::factorial(s.half_dim() - 1) * s.structure(a).transpose();
                CHECK((ref - expected).norm() <= 1e-8 * expected.norm());
                CHECK(hk::fitted_identity_constant(s, a) ==
                      doctest::Approx(hk::factorial(s.half_dim() - 1)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("key identity is sensitive to a corrupted form") {
    const hk::HyperKahlerSpace s = hk::standard_space(1);
    Eigen::MatrixXd w = hk::kahler_forms(s).matrix(Axis::I);
    w(0, 1) += 0.05;
    w(1, 0) -= 0.05;
    const double r = hk::key_identity_residual(hk::two_form(w), s.structure(Axis::I), s.metric(),
                                               hk::IdentityScale::NMinusOneFactorial);
    CHECK(r > 1e-3);
}

TEST_CASE("composite identities") {
    const hk::HyperKahlerSpace s = hk::standard_space(1);
    const auto maps = hk::lefschetz_top_maps(s);
    const Eigen::VectorXd e0 = Eigen::Vector4d(1, 0, 0, 0);
    const Eigen::VectorXd q = maps[0].fullPivLu().solve(maps[1] * e0);
    CHECK(q.isApprox(Eigen::Vector4d(0, 0, 0, -1)));
    CHECK((s.structure(Axis::K).transpose() * e0).isApprox(Eigen::Vector4d(0, 0, 0, -1)));

    for (int k = 1; k <= 3; ++k) {
        const auto std_rep = hk::composite_identity_report(hk::standard_space(k), 1e-12);
        CHECK(std_rep.pass);
        CHECK(std_rep.max() < 1e-12);
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto rep = hk::composite_identity_report(hk::random_space(2, seed), 1e-8);
        CHECK(rep.pass);
    }
}

TEST_CASE("composite identities name a singular axis") {
    const hk::HyperKahlerSpace s = hk::standard_space(1);
    const hk::HyperKahlerSpace broken(1, s.gram(), Eigen::MatrixXd::Zero(4, 4),
                                      s.structure(Axis::J), s.structure(Axis::K));
    try {
        (void)hk::composite_identity_report(broken, 1e-8);
        FAIL("expected rejection");
    } catch (const hk::Error& err) {
        CHECK(std::string(err.what()).find("L_I") != std::string::npos);
    }
}

}

#pragma once

// Exterior algebra of the dual of an oriented inner-product space V of even
// dimension 2n <= 16.
//
// A blade e^{i_1 ... i_p} (i_1 < ... < i_p) is addressed by the bitmask with
// bits i_1..i_p set. Within one degree, blades are ordered by ascending mask
// value, which coincides with colex order on index sets; this order is the
// "canonical basis" used by every dense coefficient vector and every matrix
// built over Λ^p.

#include <hk/error.hpp>

#include <Eigen/Dense>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hk {

using Mask = std::uint32_t;

inline constexpr int kMaxDim = 16;

/// Throws unless dim is even and in [2, kMaxDim].
void require_valid_dim(int dim);

[[nodiscard]] std::size_t binomial(int n, int k);

/// Position of a blade among all blades of the same degree.
[[nodiscard]] std::size_t blade_rank(Mask bits);

/// All blades of the given degree on a 2n-dimensional space, ascending.
[[nodiscard]] std::span<const Mask> blades(int dim, int degree);

[[nodiscard]] inline int blade_degree(Mask bits) { return std::popcount(bits); }

[[nodiscard]] Mask top_blade(int dim);

/// Sign of e^a ∧ e^b relative to e^{a|b}; 0 when the blades share a covector.
[[nodiscard]] int merge_sign(Mask a, Mask b);

/// Canonicalizes an arbitrary index list: returns the blade mask and the sign
/// of the sorting permutation (0 if an index repeats). Throws for indices
/// outside [0, dim).
[[nodiscard]] std::pair<Mask, int> canonical_blade(std::span<const int> indices, int dim);

[[nodiscard]] std::vector<int> blade_indices(Mask bits);

/// Degree-p alternating form. Storage is a sorted sparse term list for low
/// fill and a dense vector over the canonical basis once more than a quarter
/// of the basis is populated.
class KForm {
public:
    KForm(int dim, int degree);

    static KForm blade(int dim, Mask bits, double coeff = 1.0);
    static KForm scalar(int dim, double value);
    static KForm from_dense(int dim, int degree, std::vector<double> coeffs);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] std::size_t basis_size() const { return binomial(dim_, degree_); }

    [[nodiscard]] double coeff(Mask bits) const;
    void add(Mask bits, double value);

    /// Visits stored terms with nonzero coefficient in ascending blade order.
    template <class F>
    void for_each(F&& f) const {
        if (dense_mode_) {
            const auto basis = blades(dim_, degree_);
            for (std::size_t r = 0; r < dense_.size(); ++r) {
                if (dense_[r] != 0.0) f(basis[r], dense_[r]);
            }
        } else {
            for (const auto& [bits, c] : sparse_) {
                if (c != 0.0) f(bits, c);
            }
        }
    }

    [[nodiscard]] std::vector<double> dense() const;
    [[nodiscard]] Eigen::VectorXd vector() const;
    [[nodiscard]] std::size_t term_count() const;
    [[nodiscard]] bool is_dense() const { return dense_mode_; }
    [[nodiscard]] bool is_zero() const { return term_count() == 0; }

    [[nodiscard]] double norm() const;
    [[nodiscard]] double max_abs() const;

    KForm& operator+=(const KForm& other);
    KForm& operator-=(const KForm& other);
    KForm& operator*=(double factor);

    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    friend KForm operator*(double s, KForm a) { return a *= s; }
    friend KForm operator*(KForm a, double s) { return a *= s; }
    friend KForm operator-(KForm a) { return a *= -1.0; }

private:
    void to_dense_storage();
    void require_same_shape(const KForm& other) const;

    int dim_;
    int degree_;
    bool dense_mode_ = false;
    std::vector<std::pair<Mask, double>> sparse_;
    std::vector<double> dense_;
};

/// Inner product g on V with an orientation sign. Construction enforces
/// symmetry and positive definiteness; the error names the offending
/// eigenvalue.
class Metric {
public:
    explicit Metric(Eigen::MatrixXd gram, int orientation = 1);
    static Metric euclidean(int dim, int orientation = 1);

    [[nodiscard]] int dim() const { return static_cast<int>(gram_.rows()); }
    [[nodiscard]] const Eigen::MatrixXd& gram() const { return gram_; }
    /// g* on covectors, the inverse Gram matrix.
    [[nodiscard]] const Eigen::MatrixXd& dual() const { return dual_; }
    /// Lower Cholesky factor L with gram = L Lᵀ. The covectors θ^a = Σ_i L(i,a) e^i
    /// form an orthonormal coframe.
    [[nodiscard]] const Eigen::MatrixXd& factor() const { return factor_; }
    [[nodiscard]] const Eigen::MatrixXd& factor_inverse() const { return factor_inverse_; }
    [[nodiscard]] int orientation() const { return orientation_; }
    /// Coefficient of vol on the top blade: orientation * sqrt(det gram).
    [[nodiscard]] double volume_coefficient() const { return volume_coefficient_; }
    [[nodiscard]] bool is_diagonal() const { return diagonal_; }
    [[nodiscard]] Metric with_orientation(int orientation) const;

private:
    Eigen::MatrixXd gram_;
    Eigen::MatrixXd dual_;
    Eigen::MatrixXd factor_;
    Eigen::MatrixXd factor_inverse_;
    int orientation_;
    double volume_coefficient_;
    bool diagonal_;
};

/// Exterior product. Returns the zero form of degree 2n when p + q > 2n;
/// callers that need the degree must check first. Operands are multiplied in
/// a canonical order, so a ∧ b and (-1)^{pq} b ∧ a agree bit for bit.
[[nodiscard]] KForm wedge(const KForm& a, const KForm& b);

/// a ∧ ... ∧ a (e factors); e = 0 gives the constant 1.
[[nodiscard]] KForm wedge_power(const KForm& a, int e);

/// Applies Λ^p(t) to a: each covector e^s is replaced by Σ_u t(u,s) e^u.
[[nodiscard]] KForm apply_linear(const KForm& a, const Eigen::MatrixXd& t);

/// Applies Λ^p(g*) to a: each covector e^s is replaced by Σ_u g*_{us} e^u.
/// The coefficient of e^U in the result is <e^U, a>.
[[nodiscard]] KForm apply_dual_metric(const KForm& a, const Metric& m);

[[nodiscard]] double inner_product(const KForm& a, const KForm& b, const Metric& m);

/// Gram-determinant pairing of two blades: det of the g* minor on rows S, cols T.
[[nodiscard]] double blade_inner_product(Mask s, Mask t, const Metric& m);

/// Matrix of the induced inner product on Λ^p over the canonical basis.
[[nodiscard]] Eigen::MatrixXd induced_gram(const Metric& m, int degree);

[[nodiscard]] KForm volume_form(const Metric& m);

/// Hodge star with the convention β ∧ ★α = <β, α> vol. Diagonal metrics use
/// g* directly; otherwise the form is moved to the Cholesky coframe, starred
/// there with integer signs, and moved back, which only costs cond(L).
[[nodiscard]] KForm hodge_star(const KForm& a, const Metric& m);

/// Inverse of hodge_star: on a form of degree q, ★^{-1} = (-1)^{q(2n-q)} ★.
[[nodiscard]] KForm star_inverse(const KForm& a, const Metric& m);

/// Coefficient of a top-degree form relative to vol.
[[nodiscard]] double volume_ratio(const KForm& top, const Metric& m);

/// Conversions between a 2-form and its skew matrix W with W(i,j) = ω(e_i, e_j).
[[nodiscard]] KForm two_form(const Eigen::MatrixXd& skew);
[[nodiscard]] Eigen::MatrixXd two_form_matrix(const KForm& omega);

/// Pfaffian of a skew matrix by pivoted skew elimination; the top coefficient
/// of ω^n equals n! * pfaffian(W).
[[nodiscard]] double pfaffian(Eigen::MatrixXd skew);

}  // namespace hk

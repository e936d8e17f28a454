#pragma once

// Lefschetz operators L_A = ω_A ∧ (·), their powers on degree-1 forms, the
// associated skew pairings on V*, and the operator identities relating them
// to the dual-pairing adjoints of the complex structures.

#include <hk/exterior.hpp>
#include <hk/quaternionic.hpp>

#include <Eigen/Dense>

#include <array>

namespace hk {

/// Linear map Λ^p → Λ^q as a C(2n,q) x C(2n,p) matrix over canonical bases.
class GradedMap {
public:
    GradedMap(int dim, int source_degree, int target_degree, Eigen::MatrixXd matrix);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int source_degree() const { return source_degree_; }
    [[nodiscard]] int target_degree() const { return target_degree_; }
    [[nodiscard]] const Eigen::MatrixXd& matrix() const { return matrix_; }

    [[nodiscard]] KForm apply(const KForm& f) const;
    /// next ∘ this.
    [[nodiscard]] GradedMap then(const GradedMap& next) const;

private:
    int dim_;
    int source_degree_;
    int target_degree_;
    Eigen::MatrixXd matrix_;
};

/// Λ^p → Λ^{p+2}, column j = ω ∧ (basis blade j).
[[nodiscard]] GradedMap lefschetz_operator(const KForm& omega, int p);
[[nodiscard]] GradedMap lefschetz_operator(const HyperKahlerSpace& space, Axis axis, int p);

/// L^e restricted to Λ¹ → Λ^{1+2e}, built by applying e single steps to each
/// basis covector.
[[nodiscard]] GradedMap lefschetz_power(const KForm& omega, int e);
[[nodiscard]] GradedMap lefschetz_power(const HyperKahlerSpace& space, Axis axis, int e);

struct HardLefschetzReport {
    bool invertible = false;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double condition_number = 0.0;
    double tolerance = 0.0;
};

/// SVD test of L^{n-1}: Λ¹ → Λ^{2n-1}; passes iff σ_min/σ_max > tol.
[[nodiscard]] HardLefschetzReport hard_lefschetz_check(const KForm& omega, double tol);
[[nodiscard]] HardLefschetzReport hard_lefschetz_check(const HyperKahlerSpace& space, Axis axis,
                                                       double tol);

/// Entry (i,j) is the coefficient of vol in e^i ∧ L^{n-1} e^j.
[[nodiscard]] Eigen::MatrixXd pairing_matrix(const KForm& omega, const Metric& metric);
[[nodiscard]] Eigen::MatrixXd pairing_matrix(const HyperKahlerSpace& space, Axis axis);

/// Matrix of ★^{-1} ∘ L^{n-1} as an endomorphism of Λ¹ = V*.
[[nodiscard]] Eigen::MatrixXd star_inverse_lefschetz(const KForm& omega, const Metric& metric);

/// Scalar multiplying A* in the identity ★^{-1} ∘ L_A^{n-1} = c · A*.
/// Direct expansion of v ∧ ω^{n-1} ∧ w gives (n-1)!; NFactorial is kept to
/// measure the n!-scaled variant, which is off by a factor n.
enum class IdentityScale { NFactorial, NMinusOneFactorial };

[[nodiscard]] double identity_constant(int n, IdentityScale scale);
[[nodiscard]] double factorial(int n);

/// ‖★^{-1} L^{n-1} − c·Aᵀ‖_F / ‖c·Aᵀ‖_F on Λ¹.
[[nodiscard]] double key_identity_residual(const KForm& omega, const Eigen::MatrixXd& structure,
                                           const Metric& metric, IdentityScale scale);
[[nodiscard]] double key_identity_residual(const HyperKahlerSpace& space, Axis axis,
                                           IdentityScale scale);

/// Least-squares c in ★^{-1} L_A^{n-1} ≈ c·A*.
[[nodiscard]] double fitted_identity_constant(const HyperKahlerSpace& space, Axis axis);

struct CompositeIdentityReport {
    /// (L_I)⁻¹L_J − K*, (L_J)⁻¹L_K − I*, (L_K)⁻¹L_I − J*  (relative Frobenius).
    std::array<double, 3> cyclic{};
    /// (L_I)⁻¹L_J + (L_J)⁻¹L_I, and the JK and KI analogues.
    std::array<double, 3> anticommutation{};
    double tolerance = 0.0;
    bool pass = false;

    [[nodiscard]] double max() const;
};

/// Throws naming the axis when some L_A^{n-1} fails hard Lefschetz at ratio 1e-12.
[[nodiscard]] CompositeIdentityReport composite_identity_report(const HyperKahlerSpace& space,
                                                                double tol);

/// The three power maps L_A^{n-1}: Λ¹ → Λ^{2n-1} as 2n x 2n matrices.
[[nodiscard]] std::array<Eigen::MatrixXd, 3> lefschetz_top_maps(const HyperKahlerSpace& space);

}  // namespace hk

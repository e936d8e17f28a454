#pragma once

// Metric and quaternionic structure recovered from three symplectic forms.
//
// A bilinear form b with matrix W (W(i,j) = b(e_i, e_j)) is identified with the
// map V → V*, v ↦ b(v, ·), whose matrix in the coordinate/dual bases is Wᵀ.
// Compositions such as g = ω_I ∘ ω_J⁻¹ ∘ ω_K are taken literally on these maps
// and the result is converted back to a bilinear-form matrix.

#include <hk/quaternionic.hpp>

#include <Eigen/Dense>

#include <array>
#include <string>

namespace hk {

struct SymplecticTriple {
    std::array<Eigen::MatrixXd, 3> forms;  // W_I, W_J, W_K

    [[nodiscard]] int dim() const { return static_cast<int>(forms[0].rows()); }
    [[nodiscard]] const Eigen::MatrixXd& form(Axis a) const { return forms[axis_index(a)]; }

    [[nodiscard]] static SymplecticTriple from(const KahlerForms& kahler);
};

/// Default gates: validation 1e-9 relative, symmetry 1e-8, definiteness margin
/// 1e-10·‖g‖, and W_J-style conditioning capped at 1e12.
inline constexpr double kValidationTolerance = 1e-9;
inline constexpr double kSymmetryTolerance = 1e-8;
inline constexpr double kDefinitenessMargin = 1e-10;
inline constexpr double kMaxFormCondition = 1e12;

struct TripleValidation {
    std::array<double, 3> skew_residuals{};
    std::array<double, 3> condition_numbers{};
    /// ‖W_I⁻¹W_J + W_J⁻¹W_I‖ / ‖W_I⁻¹W_J‖, then the JK and KI analogues.
    std::array<double, 3> relation_residuals{};
    double tolerance = 0.0;
    bool pass = false;
};

/// Throws on shape mismatch, or when a form's condition number exceeds
/// kMaxFormCondition (the message names the axis).
[[nodiscard]] TripleValidation validate_triple(const SymplecticTriple& t,
                                               double tol = kValidationTolerance);

/// g = ω_I ∘ ω_J⁻¹ ∘ ω_K under the form-as-map convention, returned as a
/// bilinear-form matrix. No validation gate.
[[nodiscard]] Eigen::MatrixXd compose_metric(const SymplecticTriple& t);

struct Signature {
    int positive = 0;
    int negative = 0;
    int zero = 0;

    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Eigenvalue signs of (g + gᵀ)/2, with |λ| <= 1e-12·‖g‖ counted as zero.
[[nodiscard]] Signature signature_of(const Eigen::MatrixXd& g);

struct MetricReconstruction {
    Eigen::MatrixXd g;
    double symmetric_residual = 0.0;  // ‖g − gᵀ‖ / ‖g‖
    Signature signature;
    TripleValidation validation;
};

/// Rejects (throws) unless validate_triple passes at tol.
[[nodiscard]] MetricReconstruction metric_from_triple(const SymplecticTriple& t,
                                                      double tol = kValidationTolerance);

struct StructureRecovery {
    std::array<Eigen::MatrixXd, 3> structures;  // I, J, K
    QuaternionicResiduals residuals;            // against IJK = −1
    double ijk_plus_residual = 0.0;             // ‖IJK − 1‖ for the opposite orientation

    [[nodiscard]] const Eigen::MatrixXd& structure(Axis a) const {
        return structures[axis_index(a)];
    }
};

/// Solves ω_A(v,w) = g(Av, w) for A. Throws when g is singular.
[[nodiscard]] StructureRecovery structures_from_triple(const SymplecticTriple& t,
                                                       const Eigen::MatrixXd& g);

struct DefinitenessReport {
    bool pass = false;
    double min_eigenvalue = 0.0;
};

/// Throws when g is asymmetric beyond kSymmetryTolerance.
[[nodiscard]] DefinitenessReport is_positive_definite(const Eigen::MatrixXd& g,
                                                      double tol = kDefinitenessMargin);

enum class Verdict { HyperKahler, PseudoHyperKahler, InvalidTriple };

[[nodiscard]] std::string verdict_text(Verdict v, const Signature& s);

struct ReconstructionResult {
    TripleValidation validation;
    Eigen::MatrixXd g;
    double symmetric_residual = 0.0;
    Signature signature;
    std::array<Eigen::MatrixXd, 3> structures;
    QuaternionicResiduals quaternionic_residuals;
    double ijk_plus_residual = 0.0;
    DefinitenessReport definiteness;
    bool quaternionic_pass = false;
    Verdict verdict = Verdict::InvalidTriple;
    std::string diagnostic;
};

/// Full pipeline. Validation failure yields verdict InvalidTriple with the
/// remaining fields left empty rather than an exception.
[[nodiscard]] ReconstructionResult reconstruct(const SymplecticTriple& t,
                                               double tol = kValidationTolerance);

}  // namespace hk

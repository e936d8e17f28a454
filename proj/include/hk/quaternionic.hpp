#pragma once

// Hyper-Kähler vector spaces (V, g, I, J, K) of real dimension 4k.
//
// Conventions used across the library:
//   * vectors and covectors are coefficient columns in the coordinate basis
//     e_i and the dual basis e^i;
//   * a bilinear form b is stored as the matrix W with W(i,j) = b(e_i, e_j);
//   * the Kähler form of a structure A is ω_A(v,w) = g(Av, w), so its matrix
//     is Aᵀ·gram;
//   * the dual-pairing adjoint A* acts on covector coefficients as Aᵀ.

#include <hk/exterior.hpp>

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string_view>

namespace hk {

enum class Axis { I = 0, J = 1, K = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::I, Axis::J, Axis::K};

[[nodiscard]] std::string_view axis_name(Axis axis);
[[nodiscard]] Axis parse_axis(std::string_view name);
[[nodiscard]] inline std::size_t axis_index(Axis axis) { return static_cast<std::size_t>(axis); }

inline constexpr int kMaxQuaternionicDim = 4;  // 4k <= 16

class HyperKahlerSpace {
public:
    /// Shape checks only; the quaternionic relations are checked by
    /// check_quaternionic. Orientation is fixed so that ω_I^{2k} = (2k)! vol.
    HyperKahlerSpace(int k, Eigen::MatrixXd gram, Eigen::MatrixXd i, Eigen::MatrixXd j,
                     Eigen::MatrixXd kk);

    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] int dim() const { return 4 * k_; }
    /// n with dim = 2n.
    [[nodiscard]] int half_dim() const { return 2 * k_; }
    [[nodiscard]] const Eigen::MatrixXd& gram() const { return gram_; }
    [[nodiscard]] const Eigen::MatrixXd& structure(Axis axis) const {
        return structures_[axis_index(axis)];
    }
    [[nodiscard]] const Metric& metric() const { return metric_; }
    [[nodiscard]] int orientation() const { return metric_.orientation(); }

    /// Same structures, gram multiplied by factor > 0.
    [[nodiscard]] HyperKahlerSpace with_scaled_gram(double factor) const;

private:
    int k_;
    Eigen::MatrixXd gram_;
    std::array<Eigen::MatrixXd, 3> structures_;
    Metric metric_;
};

/// Identity gram with the block quaternion action
///   I: e0→e1, e1→−e0, e2→e3, e3→−e2
///   J: e0→e2, e2→−e0, e1→−e3, e3→e1
///   K = I∘J
/// repeated on each 4-block.
[[nodiscard]] HyperKahlerSpace standard_space(int k);

/// gram = AᵀA and structures A⁻¹ X A for X in the standard model.
[[nodiscard]] HyperKahlerSpace conjugated_space(int k, const Eigen::MatrixXd& frame);

/// conjugated_space with a Gaussian frame, resampled while cond(A) > 1e4.
[[nodiscard]] HyperKahlerSpace random_space(int k, std::uint64_t seed);

inline constexpr double kRandomFrameConditionCap = 1e4;

struct KahlerForms {
    std::array<Eigen::MatrixXd, 3> matrices;
    std::array<KForm, 3> forms;

    [[nodiscard]] const Eigen::MatrixXd& matrix(Axis a) const { return matrices[axis_index(a)]; }
    [[nodiscard]] const KForm& form(Axis a) const { return forms[axis_index(a)]; }
};

[[nodiscard]] KahlerForms kahler_forms(const HyperKahlerSpace& space);

/// a·I + b·J + c·K for a unit imaginary quaternion (a, b, c).
[[nodiscard]] Eigen::MatrixXd unit_structure(const HyperKahlerSpace& space, double a, double b,
                                             double c);

/// Residuals of I² = J² = K² = IJK = −1, each ‖X + 1‖_F normalized by the
/// product of the factors' spectral norms.
struct QuaternionicResiduals {
    double i_squared = 0.0;
    double j_squared = 0.0;
    double k_squared = 0.0;
    double ijk = 0.0;

    [[nodiscard]] double max() const;
};

[[nodiscard]] QuaternionicResiduals quaternionic_residuals(const Eigen::MatrixXd& i,
                                                           const Eigen::MatrixXd& j,
                                                           const Eigen::MatrixXd& k);

struct QuaternionicReport {
    QuaternionicResiduals relations;
    /// ‖AᵀgA − g‖_F / (‖A‖₂² ‖g‖₂) per axis.
    std::array<double, 3> compatibility{};
    double tolerance = 0.0;
    bool pass = false;
};

[[nodiscard]] QuaternionicReport check_quaternionic(const HyperKahlerSpace& space, double tol);

/// v^♭ = gram⁻¹ v: the vector corresponding to a covector under g.
[[nodiscard]] Eigen::VectorXd musical_flat(const Eigen::VectorXd& covector,
                                           const HyperKahlerSpace& space);
/// Inverse of musical_flat: w ↦ gram·w.
[[nodiscard]] Eigen::VectorXd musical_sharp(const Eigen::VectorXd& vector,
                                            const HyperKahlerSpace& space);

[[nodiscard]] double spectral_norm(const Eigen::MatrixXd& m);
[[nodiscard]] double condition_number(const Eigen::MatrixXd& m);

}  // namespace hk

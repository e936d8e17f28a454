#include <hk/quaternionic.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace hk {

namespace {

void require_square(const Eigen::MatrixXd& m, int dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw Error(std::string(what) + " must be " + std::to_string(dim) + "x" + std::to_string(dim) +
                    ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_k(int k) {
    if (k < 1 || k > kMaxQuaternionicDim) {
        throw Error("quaternionic dimension k must be in [1, " + std::to_string(kMaxQuaternionicDim) +
                    "], got " + std::to_string(k));
    }
}

int orientation_from(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& i) {
    const Eigen::MatrixXd w = i.transpose() * gram;
    const double pf = pfaffian(0.5 * (w - w.transpose()));
    return pf < 0.0 ? -1 : 1;
}

}  // namespace

std::string_view axis_name(Axis axis) {
    switch (axis) {
        case Axis::I: return "I";
        case Axis::J: return "J";
        case Axis::K: return "K";
    }
    return "?";
}

Axis parse_axis(std::string_view name) {
    if (name == "I") return Axis::I;
    if (name == "J") return Axis::J;
    if (name == "K") return Axis::K;
    throw Error("unknown axis '" + std::string(name) + "' (expected I, J or K)");
}

HyperKahlerSpace::HyperKahlerSpace(int k, Eigen::MatrixXd gram, Eigen::MatrixXd i,
                                   Eigen::MatrixXd j, Eigen::MatrixXd kk)
    : k_(k),
      gram_((require_k(k), require_square(gram, 4 * k, "gram"), std::move(gram))),
      structures_{std::move(i), std::move(j), std::move(kk)},
      metric_(gram_, 1) {
    for (Axis a : kAxes) require_square(structures_[axis_index(a)], dim(), "structure matrix");
    gram_ = metric_.gram();
    if (orientation_from(gram_, structures_[0]) < 0) metric_ = metric_.with_orientation(-1);
}

HyperKahlerSpace HyperKahlerSpace::with_scaled_gram(double factor) const {
    if (!(factor > 0.0)) throw Error("gram scale factor must be positive");
    return {k_, factor * gram_, structures_[0], structures_[1], structures_[2]};
}

HyperKahlerSpace standard_space(int k) {
    require_k(k);
    const int dim = 4 * k;
    Eigen::MatrixXd i = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
    for (int b = 0; b < dim; b += 4) {
        // Column c holds the image of e_c.
        i(b + 1, b + 0) = 1;
        i(b + 0, b + 1) = -1;
        i(b + 3, b + 2) = 1;
        i(b + 2, b + 3) = -1;

        j(b + 2, b + 0) = 1;
        j(b + 0, b + 2) = -1;
        j(b + 3, b + 1) = -1;
        j(b + 1, b + 3) = 1;
    }
    Eigen::MatrixXd kk = i * j;
    return {k, Eigen::MatrixXd::Identity(dim, dim), std::move(i), std::move(j), std::move(kk)};
}

HyperKahlerSpace conjugated_space(int k, const Eigen::MatrixXd& frame) {
    const HyperKahlerSpace base = standard_space(k);
    require_square(frame, base.dim(), "frame");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(frame);
    if (!lu.isInvertible()) throw Error("conjugating frame is singular");
    const Eigen::MatrixXd inv = lu.inverse();
    Eigen::MatrixXd gram = frame.transpose() * frame;
    gram = 0.5 * (gram + gram.transpose()).eval();
    return {k, gram, inv * base.structure(Axis::I) * frame, inv * base.structure(Axis::J) * frame,
            inv * base.structure(Axis::K) * frame};
}

HyperKahlerSpace random_space(int k, std::uint64_t seed) {
    require_k(k);
    const int dim = 4 * k;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd frame(dim, dim);
    do {
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) frame(r, c) = normal(rng);
        }
    } while (!(condition_number(frame) <= kRandomFrameConditionCap));
    return conjugated_space(k, frame);
}

KahlerForms kahler_forms(const HyperKahlerSpace& space) {
    KahlerForms out{{}, {KForm(space.dim(), 2), KForm(space.dim(), 2), KForm(space.dim(), 2)}};
    for (Axis a : kAxes) {
        // ω_A(e_i, e_j) = g(A e_i, e_j) = (Aᵀ gram)(i, j).
        Eigen::MatrixXd w = space.structure(a).transpose() * space.gram();
        out.forms[axis_index(a)] = two_form(w);
        out.matrices[axis_index(a)] = std::move(w);
    }
    return out;
}

Eigen::MatrixXd unit_structure(const HyperKahlerSpace& space, double a, double b, double c) {
    const double norm2 = a * a + b * b + c * c;
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw Error("unit_structure needs a² + b² + c² = 1, got " + std::to_string(norm2));
    }
    return a * space.structure(Axis::I) + b * space.structure(Axis::J) +
           c * space.structure(Axis::K);
}

double QuaternionicResiduals::max() const {
    return std::max(std::max(i_squared, j_squared), std::max(k_squared, ijk));
}

QuaternionicResiduals quaternionic_residuals(const Eigen::MatrixXd& i, const Eigen::MatrixXd& j,
                                             const Eigen::MatrixXd& k) {
    const auto id = Eigen::MatrixXd::Identity(i.rows(), i.cols());
    const double ni = spectral_norm(i);
    const double nj = spectral_norm(j);
    const double nk = spectral_norm(k);
    const auto rel = [](const Eigen::MatrixXd& x, double scale) {
        return scale > 0.0 ? x.norm() / scale : x.norm();
    };
    QuaternionicResiduals r;
    r.i_squared = rel(i * i + id, ni * ni);
    r.j_squared = rel(j * j + id, nj * nj);
    r.k_squared = rel(k * k + id, nk * nk);
    r.ijk = rel(i * j * k + id, ni * nj * nk);
    return r;
}

QuaternionicReport check_quaternionic(const HyperKahlerSpace& space, double tol) {
    QuaternionicReport report;
    report.tolerance = tol;
    report.relations = quaternionic_residuals(space.structure(Axis::I), space.structure(Axis::J),
                                              space.structure(Axis::K));
    const double ng = spectral_norm(space.gram());
    double worst = report.relations.max();
    for (Axis a : kAxes) {
        const auto& s = space.structure(a);
        const double na = spectral_norm(s);
        const double r = (s.transpose() * space.gram() * s - space.gram()).norm() / (na * na * ng);
        report.compatibility[axis_index(a)] = r;
        worst = std::max(worst, r);
    }
    report.pass = worst < tol;
    return report;
}

Eigen::VectorXd musical_flat(const Eigen::VectorXd& covector, const HyperKahlerSpace& space) {
    if (covector.size() != space.dim()) throw Error("covector dimension mismatch");
    return space.metric().dual() * covector;
}

Eigen::VectorXd musical_sharp(const Eigen::VectorXd& vector, const HyperKahlerSpace& space) {
    if (vector.size() != space.dim()) throw Error("vector dimension mismatch");
    return space.gram() * vector;
}

double spectral_norm(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

double condition_number(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace hk

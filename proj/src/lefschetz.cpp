#include <hk/lefschetz.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace hk {

namespace {

Eigen::MatrixXd columns_from(const std::vector<KForm>& images, int dim, int degree) {
    const auto rows = static_cast<Eigen::Index>(binomial(dim, degree));
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(images.size()));
    for (std::size_t j = 0; j < images.size(); ++j) {
        images[j].for_each([&](Mask bits, double c) {
            m(static_cast<Eigen::Index>(blade_rank(bits)), static_cast<Eigen::Index>(j)) = c;
        });
    }
    return m;
}

double relative(const Eigen::MatrixXd& diff, const Eigen::MatrixXd& reference) {
    const double scale = reference.norm();
    return scale > 0.0 ? diff.norm() / scale : diff.norm();
}

KForm covector(int dim, int i) { return KForm::blade(dim, Mask{1} << i); }

}  // namespace

GradedMap::GradedMap(int dim, int source_degree, int target_degree, Eigen::MatrixXd matrix)
    : dim_(dim), source_degree_(source_degree), target_degree_(target_degree),
      matrix_(std::move(matrix)) {
    require_valid_dim(dim);
    if (matrix_.rows() != static_cast<Eigen::Index>(binomial(dim, target_degree)) ||
        matrix_.cols() != static_cast<Eigen::Index>(binomial(dim, source_degree))) {
        throw Error("graded map matrix has the wrong shape for degrees " +
                    std::to_string(source_degree) + " -> " + std::to_string(target_degree));
    }
}

KForm GradedMap::apply(const KForm& f) const {
    if (f.dim() != dim_ || f.degree() != source_degree_) {
        throw Error("graded map applied to a form of degree " + std::to_string(f.degree()) +
                    ", expected " + std::to_string(source_degree_));
    }
    const Eigen::VectorXd out = matrix_ * f.vector();
    return KForm::from_dense(dim_, target_degree_, std::vector<double>(out.data(), out.data() + out.size()));
}

GradedMap GradedMap::then(const GradedMap& next) const {
    if (next.dim_ != dim_ || next.source_degree_ != target_degree_) {
        throw Error("graded maps do not compose");
    }
    return {dim_, source_degree_, next.target_degree_, next.matrix_ * matrix_};
}

GradedMap lefschetz_operator(const KForm& omega, int p) {
    if (omega.degree() != 2) throw Error("Lefschetz operator needs a 2-form");
    const int dim = omega.dim();
    if (p < 0 || p + 2 > dim) {
        throw Error("Lefschetz operator on degree " + std::to_string(p) + " overflows dimension " +
                    std::to_string(dim));
    }
    std::vector<KForm> images;
    for (Mask b : blades(dim, p)) images.push_back(wedge(omega, KForm::blade(dim, b)));
    return {dim, p, p + 2, columns_from(images, dim, p + 2)};
}

GradedMap lefschetz_operator(const HyperKahlerSpace& space, Axis axis, int p) {
    return lefschetz_operator(kahler_forms(space).form(axis), p);
}

GradedMap lefschetz_power(const KForm& omega, int e) {
    if (omega.degree() != 2) throw Error("Lefschetz power needs a 2-form");
    const int dim = omega.dim();
    if (e < 0 || 1 + 2 * e > dim) {
        throw Error("Lefschetz power " + std::to_string(e) + " on degree 1 overflows dimension " +
                    std::to_string(dim));
    }
    std::vector<KForm> images;
    for (int j = 0; j < dim; ++j) {
        KForm f = covector(dim, j);
        for (int step = 0; step < e; ++step) f = wedge(omega, f);
        images.push_back(std::move(f));
    }
    return {dim, 1, 1 + 2 * e, columns_from(images, dim, 1 + 2 * e)};
}

GradedMap lefschetz_power(const HyperKahlerSpace& space, Axis axis, int e) {
    return lefschetz_power(kahler_forms(space).form(axis), e);
}

HardLefschetzReport hard_lefschetz_check(const KForm& omega, double tol) {
    const int n = omega.dim() / 2;
    const Eigen::MatrixXd m = lefschetz_power(omega, n - 1).matrix();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    HardLefschetzReport r;
    r.tolerance = tol;
    r.sigma_max = s(0);
    r.sigma_min = s(s.size() - 1);
    r.condition_number = r.sigma_min > 0.0 ? r.sigma_max / r.sigma_min
                                           : std::numeric_limits<double>::infinity();
    r.invertible = r.sigma_max > 0.0 && r.sigma_min / r.sigma_max > tol;
    return r;
}

HardLefschetzReport hard_lefschetz_check(const HyperKahlerSpace& space, Axis axis, double tol) {
    return hard_lefschetz_check(kahler_forms(space).form(axis), tol);
}

Eigen::MatrixXd pairing_matrix(const KForm& omega, const Metric& metric) {
    const int dim = omega.dim();
    if (metric.dim() != dim) throw Error("pairing: form and metric dimensions differ");
    const GradedMap power = lefschetz_power(omega, dim / 2 - 1);
    Eigen::MatrixXd p(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const KForm image = power.apply(covector(dim, j));
        for (int i = 0; i < dim; ++i) p(i, j) = volume_ratio(wedge(covector(dim, i), image), metric);
    }
    return p;
}

Eigen::MatrixXd pairing_matrix(const HyperKahlerSpace& space, Axis axis) {
    return pairing_matrix(kahler_forms(space).form(axis), space.metric());
}

Eigen::MatrixXd star_inverse_lefschetz(const KForm& omega, const Metric& metric) {
    const int dim = omega.dim();
    const GradedMap power = lefschetz_power(omega, dim / 2 - 1);
    std::vector<KForm> images;
    for (int j = 0; j < dim; ++j) images.push_back(star_inverse(power.apply(covector(dim, j)), metric));
    return columns_from(images, dim, 1);
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double identity_constant(int n, IdentityScale scale) {
    return scale == IdentityScale::NFactorial ? factorial(n) : factorial(n - 1);
}

double key_identity_residual(const KForm& omega, const Eigen::MatrixXd& structure,
                             const Metric& metric, IdentityScale scale) {
    const int n = omega.dim() / 2;
    const Eigen::MatrixXd target = identity_constant(n, scale) * structure.transpose();
    return relative(star_inverse_lefschetz(omega, metric) - target, target);
}

double key_identity_residual(const HyperKahlerSpace& space, Axis axis, IdentityScale scale) {
    return key_identity_residual(kahler_forms(space).form(axis), space.structure(axis),
                                 space.metric(), scale);
}

double fitted_identity_constant(const HyperKahlerSpace& space, Axis axis) {
    const Eigen::MatrixXd x =
        star_inverse_lefschetz(kahler_forms(space).form(axis), space.metric());
    const Eigen::MatrixXd adj = space.structure(axis).transpose();
    return (x.array() * adj.array()).sum() / adj.squaredNorm();
}

double CompositeIdentityReport::max() const {
    double m = 0.0;
    for (double r : cyclic) m = std::max(m, r);
    for (double r : anticommutation) m = std::max(m, r);
    return m;
}

std::array<Eigen::MatrixXd, 3> lefschetz_top_maps(const HyperKahlerSpace& space) {
    const KahlerForms forms = kahler_forms(space);
    std::array<Eigen::MatrixXd, 3> out;
    for (Axis a : kAxes) {
        out[axis_index(a)] = lefschetz_power(forms.form(a), space.half_dim() - 1).matrix();
    }
    return out;
}

CompositeIdentityReport composite_identity_report(const HyperKahlerSpace& space, double tol) {
    const KahlerForms forms = kahler_forms(space);
    std::array<Eigen::MatrixXd, 3> maps;
    std::array<Eigen::PartialPivLU<Eigen::MatrixXd>, 3> lus;
    for (Axis a : kAxes) {
        const auto check = hard_lefschetz_check(forms.form(a), 1e-12);
        if (!check.invertible) {
            throw Error(std::string("L_") + std::string(axis_name(a)) +
                        "^{n-1} is singular on degree 1 (sigma_min/sigma_max = " +
                        std::to_string(check.sigma_max > 0 ? check.sigma_min / check.sigma_max : 0.0) +
                        ")");
        }
        maps[axis_index(a)] = lefschetz_power(forms.form(a), space.half_dim() - 1).matrix();
        lus[axis_index(a)].compute(maps[axis_index(a)]);
    }
    // quotient(a, b) = (L_a)⁻¹ L_b, solved per use.
    const auto quotient = [&](Axis a, Axis b) -> Eigen::MatrixXd {
        return lus[axis_index(a)].solve(maps[axis_index(b)]);
    };
    const auto adjoint = [&](Axis a) -> Eigen::MatrixXd { return space.structure(a).transpose(); };

    CompositeIdentityReport r;
    r.tolerance = tol;
    const std::array<std::array<Axis, 3>, 3> cycle{{{Axis::I, Axis::J, Axis::K},
                                                    {Axis::J, Axis::K, Axis::I},
                                                    {Axis::K, Axis::I, Axis::J}}};
    for (std::size_t c = 0; c < 3; ++c) {
        const auto [a, b, third] = cycle[c];
        const Eigen::MatrixXd ab = quotient(a, b);
        const Eigen::MatrixXd ba = quotient(b, a);
        r.cyclic[c] = relative(ab - adjoint(third), adjoint(third));
        r.anticommutation[c] = relative(ab + ba, ab);
    }
    r.pass = r.max() < tol;
    return r;
}

}  // namespace hk

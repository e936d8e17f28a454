#include <hk/reconstruct.hpp>

#include <cmath>
#include <sstream>

namespace hk {

namespace {

double relative(const Eigen::MatrixXd& diff, const Eigen::MatrixXd& reference) {
    const double scale = reference.norm();
    return scale > 0.0 ? diff.norm() / scale : diff.norm();
}

void require_shapes(const SymplecticTriple& t) {
    const auto n = t.forms[0].rows();
    if (n == 0 || n % 2 != 0) throw Error("symplectic triple needs even, nonzero dimension");
    for (Axis a : kAxes) {
        const auto& w = t.form(a);
        if (w.rows() != n || w.cols() != n) {
            std::ostringstream msg;
            msg << "form W_" << axis_name(a) << " is " << w.rows() << "x" << w.cols() << ", expected "
                << n << "x" << n;
            throw Error(msg.str());
        }
    }
}

// Matrix of v ↦ b(v, ·) for the bilinear form with matrix w.
Eigen::MatrixXd as_map(const Eigen::MatrixXd& w) { return w.transpose(); }

}  // namespace

SymplecticTriple SymplecticTriple::from(const KahlerForms& kahler) {
    return {{kahler.matrix(Axis::I), kahler.matrix(Axis::J), kahler.matrix(Axis::K)}};
}

TripleValidation validate_triple(const SymplecticTriple& t, double tol) {
    require_shapes(t);
    TripleValidation v;
    v.tolerance = tol;
    std::array<Eigen::PartialPivLU<Eigen::MatrixXd>, 3> lus;
    for (Axis a : kAxes) {
        const auto& w = t.form(a);
        const std::size_t i = axis_index(a);
        v.skew_residuals[i] = relative(w + w.transpose(), w);
        v.condition_numbers[i] = condition_number(w);
        if (!(v.condition_numbers[i] <= kMaxFormCondition)) {
            std::ostringstream msg;
            msg << "form W_" << axis_name(a) << " is singular or nearly so (condition number "
                << v.condition_numbers[i] << ")";
            throw Error(msg.str());
        }
        lus[i].compute(w);
    }
    const std::array<std::pair<Axis, Axis>, 3> pairs{
        {{Axis::I, Axis::J}, {Axis::J, Axis::K}, {Axis::K, Axis::I}}};
    for (std::size_t c = 0; c < 3; ++c) {
        const auto [a, b] = pairs[c];
        const Eigen::MatrixXd ab = lus[axis_index(a)].solve(t.form(b));
        const Eigen::MatrixXd ba = lus[axis_index(b)].solve(t.form(a));
        v.relation_residuals[c] = relative(ab + ba, ab);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        worst = std::max({worst, v.skew_residuals[i], v.relation_residuals[i]});
    }
    v.pass = worst < tol;
    return v;
}

Eigen::MatrixXd compose_metric(const SymplecticTriple& t) {
    require_shapes(t);
    const Eigen::MatrixXd mi = as_map(t.form(Axis::I));
    const Eigen::MatrixXd mj = as_map(t.form(Axis::J));
    const Eigen::MatrixXd mk = as_map(t.form(Axis::K));
    const Eigen::MatrixXd g_map = mi * mj.partialPivLu().solve(mk);
    // g_map sends v to g(v, ·); its bilinear-form matrix is the transpose.
    return g_map.transpose();
}

Signature signature_of(const Eigen::MatrixXd& g) {
    const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    const double cut = 1e-12 * std::max(sym.norm(), std::numeric_limits<double>::min());
    Signature s;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double ev = eig.eigenvalues()(i);
        if (ev > cut) {
            ++s.positive;
        } else if (ev < -cut) {
            ++s.negative;
        } else {
            ++s.zero;
        }
    }
    return s;
}

MetricReconstruction metric_from_triple(const SymplecticTriple& t, double tol) {
    MetricReconstruction r;
    r.validation = validate_triple(t, tol);
    if (!r.validation.pass) {
        std::ostringstream msg;
        msg << "triple fails the anticommutation relations (residuals "
            << r.validation.relation_residuals[0] << ", " << r.validation.relation_residuals[1]
            << ", " << r.validation.relation_residuals[2] << "; tolerance " << tol << ")";
        throw Error(msg.str());
    }
    r.g = compose_metric(t);
    r.symmetric_residual = relative(r.g - r.g.transpose(), r.g);
    r.signature = signature_of(r.g);
    return r;
}

StructureRecovery structures_from_triple(const SymplecticTriple& t, const Eigen::MatrixXd& g) {
    require_shapes(t);
    if (g.rows() != t.dim() || g.cols() != t.dim()) throw Error("metric has the wrong shape");
    const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
    if (!(condition_number(sym) <= kMaxFormCondition)) {
        throw Error("metric is singular; cannot recover complex structures");
    }
    const auto lu = sym.partialPivLu();
    StructureRecovery out;
    for (Axis a : kAxes) {
        // ω_A = Aᵀ g  ⇒  A = g⁻¹ ω_Aᵀ.
        out.structures[axis_index(a)] = lu.solve(t.form(a).transpose());
    }
    const auto& i = out.structure(Axis::I);
    const auto& j = out.structure(Axis::J);
    const auto& k = out.structure(Axis::K);
    out.residuals = quaternionic_residuals(i, j, k);
    const auto id = Eigen::MatrixXd::Identity(i.rows(), i.cols());
    out.ijk_plus_residual =
        (i * j * k - id).norm() / (spectral_norm(i) * spectral_norm(j) * spectral_norm(k));
    return out;
}

DefinitenessReport is_positive_definite(const Eigen::MatrixXd& g, double tol) {
    if (g.rows() != g.cols() || g.rows() == 0) throw Error("definiteness test needs a square matrix");
    const double asym = relative(g - g.transpose(), g);
    if (asym > kSymmetryTolerance) {
        std::ostringstream msg;
        msg << "matrix is not symmetric (relative asymmetry " << asym << ")";
        throw Error(msg.str());
    }
    const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    DefinitenessReport r;
    r.min_eigenvalue = eig.eigenvalues()(0);
    r.pass = r.min_eigenvalue > tol * sym.norm();
    return r;
}

std::string verdict_text(Verdict v, const Signature& s) {
    switch (v) {
        case Verdict::HyperKahler: return "hyper-Kähler";
        case Verdict::PseudoHyperKahler:
            return "pseudo-hyper-Kähler (signature " + std::to_string(s.positive) + "," +
                   std::to_string(s.negative) + ")";
        case Verdict::InvalidTriple: return "invalid triple";
    }
    return "invalid triple";
}

ReconstructionResult reconstruct(const SymplecticTriple& t, double tol) {
    ReconstructionResult r;
    r.validation = validate_triple(t, tol);
    if (!r.validation.pass) {
        r.verdict = Verdict::InvalidTriple;
        r.diagnostic = "anticommutation relations or skewness fail at tolerance";
        return r;
    }
    const MetricReconstruction m = metric_from_triple(t, tol);
    r.g = m.g;
    r.symmetric_residual = m.symmetric_residual;
    r.signature = m.signature;
    if (r.symmetric_residual > kSymmetryTolerance) {
        r.verdict = Verdict::InvalidTriple;
        r.diagnostic = "composed metric is not symmetric";
        return r;
    }
    if (r.signature.zero > 0) {
        r.verdict = Verdict::InvalidTriple;
        r.diagnostic = "composed metric is degenerate";
        return r;
    }
    const StructureRecovery s = structures_from_triple(t, r.g);
    r.structures = s.structures;
    r.quaternionic_residuals = s.residuals;
    r.ijk_plus_residual = s.ijk_plus_residual;
    r.quaternionic_pass = s.residuals.max() < kSymmetryTolerance;
    r.definiteness = is_positive_definite(r.g);
    if (!r.quaternionic_pass) {
        r.verdict = Verdict::InvalidTriple;
        r.diagnostic = "recovered structures violate the quaternionic relations";
    } else {
        r.verdict = r.definiteness.pass ? Verdict::HyperKahler : Verdict::PseudoHyperKahler;
    }
    return r;
}

}  // namespace hk

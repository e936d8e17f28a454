#include <hk/spectral.hpp>

#include <hk/error.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace hk {

namespace {

constexpr Eigen::Index kDenseLimit = 400;

EigenResult dense_path(const SparseMatrix& a, int count, double bound) {
    const Eigen::MatrixXd dense = Eigen::MatrixXd(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
    EigenResult r;
    r.bound = bound;
    r.values = eig.eigenvalues().head(count);
    r.residuals.resize(count);
    for (int i = 0; i < count; ++i) {
        const auto v = eig.eigenvectors().col(i);
        r.residuals(i) = (dense * v - eig.eigenvalues()(i) * v).norm();
    }
    r.converged = true;
    return r;
}

// p(A)X for the degree-d Chebyshev polynomial mapped to [lo, hi]. Columns are
// rescaled jointly every step; only the span matters.
Eigen::MatrixXd chebyshev_filter(const SparseMatrix& a, const Eigen::MatrixXd& x, int degree,
                                 double lo, double hi) {
    const double half = (hi - lo) / 2.0;
    const double centre = (hi + lo) / 2.0;
    Eigen::MatrixXd prev = x;
    Eigen::MatrixXd cur = (a * x - centre * x) / half;
    for (int k = 2; k <= degree; ++k) {
        Eigen::MatrixXd next = 2.0 * (a * cur - centre * cur) / half - prev;
        prev = std::move(cur);
        cur = std::move(next);
        const double s = cur.cwiseAbs().maxCoeff();
        if (s > 1e100) {
            cur /= s;
            prev /= s;
        }
    }
    return cur;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace

double gershgorin_bound(const SparseMatrix& a) {
    double bound = 0.0;
    for (Eigen::Index row = 0; row < a.outerSize(); ++row) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(a, row); it; ++it) sum += std::abs(it.value());
        bound = std::max(bound, sum);
    }
    return bound;
}

EigenResult lowest_eigenvalues(const SparseMatrix& a, int count, const EigenOptions& options) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw Error("eigensolver needs a square matrix");
    if (count < 1 || count > n) {
        throw Error("eigensolver asked for " + std::to_string(count) + " eigenvalues of a " +
                    std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    const double bound = gershgorin_bound(a);
    if (n <= kDenseLimit) return dense_path(a, count, bound);

    const Eigen::Index block = std::min<Eigen::Index>(n, options.block > 0 ? options.block : count + 12);
    if (block < count) throw Error("eigensolver block is narrower than the requested count");
    if (options.degree < 1) throw Error("Chebyshev filter degree must be positive");

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(n, block);
    for (Eigen::Index j = 0; j < block; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
    }

    EigenResult r;
    r.bound = bound;
    if (!(bound > 0.0)) {
        r.values = Eigen::VectorXd::Zero(count);
        r.residuals = Eigen::VectorXd::Zero(count);
        r.converged = true;
        return r;
    }
    double lower = bound / 2.0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        r.iterations = it;
        x = orthonormal_basis(chebyshev_filter(a, x, options.degree, lower, bound));
        Eigen::MatrixXd ax = a * x;
        Eigen::MatrixXd h = x.transpose() * ax;
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
        x = x * eig.eigenvectors();
        ax = ax * eig.eigenvectors();
        const Eigen::VectorXd& theta = eig.eigenvalues();

        r.values = theta.head(count);
        r.residuals = (ax.leftCols(count) - x.leftCols(count) * r.values.asDiagonal())
                          .colwise()
                          .norm()
                          .transpose();
        if (r.residuals.maxCoeff() <= options.tol * bound) {
            r.converged = true;
            return r;
        }
        const double top = theta(block - 1);
        const double wanted = std::max(theta(count - 1), 0.0);
        lower = top > 1.05 * wanted ? top : std::min(2.0 * wanted, bound / 2.0);
        if (!(lower > 0.0) || lower >= bound) lower = bound / 2.0;
    }
    return r;
}

}  // namespace hk

#include <hk/exterior.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

namespace hk {

namespace {

struct BasisTables {
    std::array<std::array<std::size_t, kMaxDim + 1>, kMaxDim + 1> binom{};
    std::vector<std::uint16_t> rank;
    std::array<std::vector<Mask>, kMaxDim + 1> by_degree;

    BasisTables() : rank(std::size_t{1} << kMaxDim) {
        for (int n = 0; n <= kMaxDim; ++n) {
            binom[n][0] = 1;
            for (int k = 1; k <= n; ++k) {
                binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0);
            }
        }
        for (Mask m = 0; m < (Mask{1} << kMaxDim); ++m) {
            auto& list = by_degree[std::popcount(m)];
            rank[m] = static_cast<std::uint16_t>(list.size());
            list.push_back(m);
        }
    }
};

const BasisTables& tables() {
    static const BasisTables t;
    return t;
}

// Λ^p(g*) applied to a single blade: the wedge of the raised covectors.
enum class Triangle { Lower, Upper, None };

Triangle triangle_of(const Eigen::MatrixXd& t) {
    bool lower = true, upper = true;
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
            if (t(i, j) == 0.0) continue;
            if (i < j) lower = false;
            if (i > j) upper = false;
        }
    }
    if (lower) return Triangle::Lower;
    return upper ? Triangle::Upper : Triangle::None;
}

// Λ^p of the shear e^s ↦ e^s + c e^u, in place on a dense coefficient
// vector. Sources contain s but not u and targets contain u but not s, so no
// entry is both read and written.
void apply_shear(std::vector<double>& v, std::span<const Mask> basis, int s, int u, double c) {
    const Mask sb = Mask{1} << s;
    const Mask ub = Mask{1} << u;
    const Mask between = u > s ? ((ub - 1) & ~((sb << 1) - 1)) : ((sb - 1) & ~((ub << 1) - 1));
    for (std::size_t r = 0; r < basis.size(); ++r) {
        const Mask b = basis[r];
        if ((b & sb) == 0 || (b & ub) != 0 || v[r] == 0.0) continue;
        const double sign = (std::popcount(b & between) % 2 == 0) ? 1.0 : -1.0;
        v[blade_rank(b ^ sb ^ ub)] += sign * c * v[r];
    }
}

// Λ^p(t) for triangular t = M·D with M unit triangular: scale by D, then
// factor M into column shears. A unit lower M is M_0 M_1 ... M_{n-2} and a
// unit upper M is M_{n-1} ... M_1, where M_s carries column s; the shears
// within one column commute.
KForm apply_triangular(const KForm& a, const Eigen::MatrixXd& t, Triangle kind) {
    const int dim = a.dim();
    const auto basis = blades(dim, a.degree());
    std::vector<double> v = a.dense();
    for (std::size_t r = 0; r < basis.size(); ++r) {
        if (v[r] == 0.0) continue;
        for (Mask rest = basis[r]; rest != 0; rest &= rest - 1) {
            const int i = std::countr_zero(rest);
            v[r] *= t(i, i);
        }
    }
    const auto column = [&](int s) {
        if (t(s, s) == 0.0) throw Error("triangular map is singular");
        const int lo = kind == Triangle::Lower ? s + 1 : 0;
        const int hi = kind == Triangle::Lower ? dim : s;
        for (int u = lo; u < hi; ++u) {
            if (t(u, s) != 0.0) apply_shear(v, basis, s, u, t(u, s) / t(s, s));
        }
    };
    if (kind == Triangle::Lower) {
        for (int s = dim - 2; s >= 0; --s) column(s);
    } else {
        for (int s = 1; s < dim; ++s) column(s);
    }
    return KForm::from_dense(dim, a.degree(), std::move(v));
}

KForm raise_blade(Mask bits, const std::vector<KForm>& raised_covectors, int dim) {
    KForm acc = KForm::scalar(dim, 1.0);
    for (Mask rest = bits; rest != 0; rest &= rest - 1) {
        acc = wedge(acc, raised_covectors[std::countr_zero(rest)]);
    }
    return acc;
}

}  // namespace

void require_valid_dim(int dim) {
    if (dim < 2 || dim > kMaxDim || dim % 2 != 0) {
        throw Error("dimension must be even and in [2, " + std::to_string(kMaxDim) + "], got " +
                    std::to_string(dim));
    }
}

std::size_t binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n || n > kMaxDim) return 0;
    return tables().binom[n][k];
}

std::size_t blade_rank(Mask bits) { return tables().rank[bits]; }

std::span<const Mask> blades(int dim, int degree) {
    if (degree < 0 || degree > dim) return {};
    const auto& list = tables().by_degree[degree];
    return {list.data(), binomial(dim, degree)};
}

Mask top_blade(int dim) { return (Mask{1} << dim) - 1; }

int merge_sign(Mask a, Mask b) {
    if ((a & b) != 0) return 0;
    int swaps = 0;
    for (Mask rest = b; rest != 0; rest &= rest - 1) {
        const int t = std::countr_zero(rest);
        swaps += std::popcount(a >> (t + 1));
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

std::pair<Mask, int> canonical_blade(std::span<const int> indices, int dim) {
    std::vector<int> sorted(indices.begin(), indices.end());
    for (int i : sorted) {
        if (i < 0 || i >= dim) {
            throw Error("covector index " + std::to_string(i) + " outside [0, " + std::to_string(dim) +
                        ")");
        }
    }
    int sign = 1;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = 0; j + 1 < sorted.size() - i; ++j) {
            if (sorted[j] > sorted[j + 1]) {
                std::swap(sorted[j], sorted[j + 1]);
                sign = -sign;
            } else if (sorted[j] == sorted[j + 1]) {
                return {0, 0};
            }
        }
    }
    Mask bits = 0;
    for (int i : sorted) {
        if ((bits >> i) & 1U) return {0, 0};
        bits |= Mask{1} << i;
    }
    return {bits, sign};
}

std::vector<int> blade_indices(Mask bits) {
    std::vector<int> out;
    for (Mask rest = bits; rest != 0; rest &= rest - 1) out.push_back(std::countr_zero(rest));
    return out;
}

// ---------------------------------------------------------------------------
// KForm

KForm::KForm(int dim, int degree) : dim_(dim), degree_(degree) {
    require_valid_dim(dim);
    if (degree < 0 || degree > dim) {
        throw Error("form degree " + std::to_string(degree) + " outside [0, " + std::to_string(dim) +
                    "]");
    }
}

KForm KForm::blade(int dim, Mask bits, double coeff) {
    KForm f(dim, blade_degree(bits));
    if (bits >> dim != 0) throw Error("blade uses covectors beyond the space dimension");
    f.add(bits, coeff);
    return f;
}

KForm KForm::scalar(int dim, double value) { return blade(dim, 0, value); }

KForm KForm::from_dense(int dim, int degree, std::vector<double> coeffs) {
    KForm f(dim, degree);
    if (coeffs.size() != f.basis_size()) {
        throw Error("dense coefficient vector has " + std::to_string(coeffs.size()) +
                    " entries, expected " + std::to_string(f.basis_size()));
    }
    const auto nnz = static_cast<std::size_t>(
        std::count_if(coeffs.begin(), coeffs.end(), [](double c) { return c != 0.0; }));
    if (nnz * 4 > coeffs.size()) {
        f.dense_mode_ = true;
        f.dense_ = std::move(coeffs);
    } else {
        const auto basis = blades(dim, degree);
        f.sparse_.reserve(nnz);
        for (std::size_t r = 0; r < coeffs.size(); ++r) {
            if (coeffs[r] != 0.0) f.sparse_.emplace_back(basis[r], coeffs[r]);
        }
    }
    return f;
}

double KForm::coeff(Mask bits) const {
    if (blade_degree(bits) != degree_ || (bits >> dim_) != 0) return 0.0;
    if (dense_mode_) return dense_[blade_rank(bits)];
    const auto it = std::lower_bound(sparse_.begin(), sparse_.end(), bits,
                                     [](const auto& term, Mask b) { return term.first < b; });
    return (it != sparse_.end() && it->first == bits) ? it->second : 0.0;
}

void KForm::add(Mask bits, double value) {
    if (blade_degree(bits) != degree_ || (bits >> dim_) != 0) {
        throw Error("blade of degree " + std::to_string(blade_degree(bits)) +
                    " added to a form of degree " + std::to_string(degree_));
    }
    if (value == 0.0) return;
    if (dense_mode_) {
        dense_[blade_rank(bits)] += value;
        return;
    }
    auto it = std::lower_bound(sparse_.begin(), sparse_.end(), bits,
                               [](const auto& term, Mask b) { return term.first < b; });
    if (it != sparse_.end() && it->first == bits) {
        it->second += value;
        return;
    }
    sparse_.insert(it, {bits, value});
    if (sparse_.size() * 4 > basis_size()) to_dense_storage();
}

void KForm::to_dense_storage() {
    if (dense_mode_) return;
    dense_.assign(basis_size(), 0.0);
    for (const auto& [bits, c] : sparse_) dense_[blade_rank(bits)] = c;
    sparse_.clear();
    sparse_.shrink_to_fit();
    dense_mode_ = true;
}

std::vector<double> KForm::dense() const {
    if (dense_mode_) return dense_;
    std::vector<double> out(basis_size(), 0.0);
    for (const auto& [bits, c] : sparse_) out[blade_rank(bits)] = c;
    return out;
}

Eigen::VectorXd KForm::vector() const {
    const auto d = dense();
    return Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

std::size_t KForm::term_count() const {
    std::size_t n = 0;
    for_each([&](Mask, double) { ++n; });
    return n;
}

double KForm::norm() const {
    double s = 0.0;
    for_each([&](Mask, double c) { s += c * c; });
    return std::sqrt(s);
}

double KForm::max_abs() const {
    double m = 0.0;
    for_each([&](Mask, double c) { m = std::max(m, std::abs(c)); });
    return m;
}

void KForm::require_same_shape(const KForm& other) const {
    if (other.dim_ != dim_ || other.degree_ != degree_) {
        throw Error("form shape mismatch: (dim " + std::to_string(dim_) + ", degree " +
                    std::to_string(degree_) + ") vs (dim " + std::to_string(other.dim_) +
                    ", degree " + std::to_string(other.degree_) + ")");
    }
}

KForm& KForm::operator+=(const KForm& other) {
    require_same_shape(other);
    other.for_each([&](Mask bits, double c) { add(bits, c); });
    return *this;
}

KForm& KForm::operator-=(const KForm& other) {
    require_same_shape(other);
    other.for_each([&](Mask bits, double c) { add(bits, -c); });
    return *this;
}

KForm& KForm::operator*=(double factor) {
    for (auto& [bits, c] : sparse_) c *= factor;
    for (auto& c : dense_) c *= factor;
    return *this;
}

// ---------------------------------------------------------------------------
// Metric

Metric::Metric(Eigen::MatrixXd gram, int orientation) : orientation_(orientation) {
    if (gram.rows() != gram.cols()) throw Error("gram matrix must be square");
    require_valid_dim(static_cast<int>(gram.rows()));
    if (orientation != 1 && orientation != -1) throw Error("orientation must be +1 or -1");
    const double scale = std::max(gram.norm(), 1.0);
    const double asym = (gram - gram.transpose()).norm();
    if (asym > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "gram matrix is not symmetric (asymmetry " << asym << ")";
        throw Error(msg.str());
    }
    gram_ = 0.5 * (gram + gram.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (!(ev(i) > 0.0)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "gram matrix is not positive definite: eigenvalue " << i << " = " << ev(i);
            throw Error(msg.str());
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gram_);
    dual_ = llt.solve(Eigen::MatrixXd::Identity(gram_.rows(), gram_.cols()));
    factor_ = llt.matrixL();
    factor_inverse_ = llt.matrixL().solve(Eigen::MatrixXd::Identity(gram_.rows(), gram_.cols()));
    dual_ = 0.5 * (dual_ + dual_.transpose()).eval();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < gram_.rows(); ++i) logdet += std::log(llt.matrixLLT()(i, i));
    volume_coefficient_ = orientation_ * std::exp(logdet);
    diagonal_ = true;
    for (Eigen::Index i = 0; i < gram_.rows() && diagonal_; ++i) {
        for (Eigen::Index j = 0; j < gram_.cols(); ++j) {
            if (i != j && gram_(i, j) != 0.0) {
                diagonal_ = false;
                break;
            }
        }
    }
    if (diagonal_) {
        // Exact reciprocals keep the integer-sign path exact.
        dual_.setZero();
        factor_.setZero();
        factor_inverse_.setZero();
        for (Eigen::Index i = 0; i < gram_.rows(); ++i) {
            dual_(i, i) = 1.0 / gram_(i, i);
            factor_(i, i) = std::sqrt(gram_(i, i));
            factor_inverse_(i, i) = 1.0 / factor_(i, i);
        }
        double det = 1.0;
        for (Eigen::Index i = 0; i < gram_.rows(); ++i) det *= gram_(i, i);
        volume_coefficient_ = orientation_ * std::sqrt(det);
    }
}

Metric Metric::euclidean(int dim, int orientation) {
    require_valid_dim(dim);
    return Metric(Eigen::MatrixXd::Identity(dim, dim), orientation);
}

Metric Metric::with_orientation(int orientation) const { return Metric(gram_, orientation); }

// ---------------------------------------------------------------------------
// Products

namespace {

KForm wedge_ordered(const KForm& a, const KForm& b) {
    if (a.dim() != b.dim()) {
        throw Error("wedge of forms on different spaces (dim " + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()) + ")");
    }
    const int dim = a.dim();
    const int degree = a.degree() + b.degree();
    if (degree > dim) return KForm(dim, dim);

    std::vector<double> acc(binomial(dim, degree), 0.0);
    a.for_each([&](Mask sa, double ca) {
        b.for_each([&](Mask sb, double cb) {
            const int sign = merge_sign(sa, sb);
            if (sign != 0) acc[blade_rank(sa | sb)] += sign * ca * cb;
        });
    });
    return KForm::from_dense(dim, degree, std::move(acc));
}

// Total order used to pick which operand goes first in wedge.
bool wedge_order_swapped(const KForm& a, const KForm& b) {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    if (a.term_count() != b.term_count()) return a.term_count() > b.term_count();
    const std::vector<double> da = a.dense();
    const std::vector<double> db = b.dense();
    return std::lexicographical_compare(db.begin(), db.end(), da.begin(), da.end());
}

}  // namespace

KForm wedge(const KForm& a, const KForm& b) {
    if (a.dim() == b.dim() && wedge_order_swapped(a, b)) {
        KForm out = wedge_ordered(b, a);
        if ((a.degree() * b.degree()) % 2 != 0) out *= -1.0;
        return out;
    }
    return wedge_ordered(a, b);
}

KForm wedge_power(const KForm& a, int e) {
    if (e < 0) throw Error("negative wedge power");
    KForm acc = KForm::scalar(a.dim(), 1.0);
    for (int i = 0; i < e; ++i) acc = wedge(acc, a);
    return acc;
}

KForm apply_linear(const KForm& a, const Eigen::MatrixXd& t) {
    if (t.rows() != a.dim() || t.cols() != a.dim()) throw Error("linear map and form dimensions differ");
    const Triangle kind = triangle_of(t);
    if (kind != Triangle::None && !(t.diagonal().array() == 0.0).any()) return apply_triangular(a, t, kind);
    std::vector<KForm> images;
    images.reserve(static_cast<std::size_t>(a.dim()));
    for (int s = 0; s < a.dim(); ++s) {
        KForm v(a.dim(), 1);
        for (int u = 0; u < a.dim(); ++u) {
            if (t(u, s) != 0.0) v.add(Mask{1} << u, t(u, s));
        }
        images.push_back(std::move(v));
    }
    std::vector<double> acc(a.basis_size(), 0.0);
    a.for_each([&](Mask bits, double c) {
        raise_blade(bits, images, a.dim()).for_each([&](Mask u, double cu) {
            acc[blade_rank(u)] += c * cu;
        });
    });
    return KForm::from_dense(a.dim(), a.degree(), std::move(acc));
}

KForm apply_dual_metric(const KForm& a, const Metric& m) {
    if (a.dim() != m.dim()) throw Error("form and metric live on different spaces");
    const auto& dual = m.dual();
    if (m.is_diagonal()) {
        KForm out(a.dim(), a.degree());
        a.for_each([&](Mask bits, double c) {
            double f = c;
            for (Mask rest = bits; rest != 0; rest &= rest - 1) {
                const int i = std::countr_zero(rest);
                f *= dual(i, i);
            }
            out.add(bits, f);
        });
        return out;
    }
    // Λ(g*) = Λ(L⁻ᵀ) Λ(L⁻¹), both triangular.
    return apply_linear(apply_linear(a, m.factor_inverse()), m.factor_inverse().transpose());
}

double inner_product(const KForm& a, const KForm& b, const Metric& m) {
    if (a.dim() != b.dim() || a.degree() != b.degree()) {
        throw Error("inner product needs forms of equal dimension and degree (degree " +
                    std::to_string(a.degree()) + " vs " + std::to_string(b.degree()) + ")");
    }
    if (a.dim() != m.dim()) throw Error("form and metric live on different spaces");
    double s = 0.0;
    if (m.is_diagonal()) {
        const KForm raised = apply_dual_metric(a, m);
        b.for_each([&](Mask bits, double c) { s += raised.coeff(bits) * c; });
        return s;
    }
    const KForm ca = apply_linear(a, m.factor_inverse());
    const KForm cb = apply_linear(b, m.factor_inverse());
    cb.for_each([&](Mask bits, double c) { s += ca.coeff(bits) * c; });
    return s;
}

double blade_inner_product(Mask s, Mask t, const Metric& m) {
    const int p = blade_degree(s);
    if (blade_degree(t) != p) throw Error("blade inner product needs equal degrees");
    if (p == 0) return 1.0;
    const auto rows = blade_indices(s);
    const auto cols = blade_indices(t);
    Eigen::MatrixXd minor(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) minor(i, j) = m.dual()(rows[i], cols[j]);
    }
    return minor.fullPivLu().determinant();
}

Eigen::MatrixXd induced_gram(const Metric& m, int degree) {
    const auto basis = blades(m.dim(), degree);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            out(i, j) = blade_inner_product(basis[i], basis[j], m);
            out(j, i) = out(i, j);
        }
    }
    return out;
}

KForm volume_form(const Metric& m) {
    return KForm::blade(m.dim(), top_blade(m.dim()), m.volume_coefficient());
}

KForm hodge_star(const KForm& a, const Metric& m) {
    if (a.dim() != m.dim()) throw Error("form and metric live on different spaces");
    const Mask top = top_blade(a.dim());
    const bool diagonal = m.is_diagonal();
    const KForm source = diagonal ? apply_dual_metric(a, m) : apply_linear(a, m.factor_inverse());
    const double vol = diagonal ? m.volume_coefficient() : static_cast<double>(m.orientation());
    KForm out(a.dim(), a.dim() - a.degree());
    source.for_each([&](Mask bits, double c) {
        const Mask complement = top ^ bits;
        out.add(complement, merge_sign(bits, complement) * c * vol);
    });
    return diagonal ? out : apply_linear(out, m.factor());
}

KForm star_inverse(const KForm& a, const Metric& m) {
    const int q = a.degree();
    const int sign = ((q * (a.dim() - q)) % 2 == 0) ? 1 : -1;
    KForm out = hodge_star(a, m);
    if (sign < 0) out *= -1.0;
    return out;
}

double volume_ratio(const KForm& top, const Metric& m) {
    if (top.degree() != top.dim() || top.dim() != m.dim()) {
        throw Error("volume_ratio needs a top-degree form on the metric's space");
    }
    return top.coeff(top_blade(top.dim())) / m.volume_coefficient();
}

KForm two_form(const Eigen::MatrixXd& skew) {
    if (skew.rows() != skew.cols()) throw Error("2-form matrix must be square");
    const int dim = static_cast<int>(skew.rows());
    KForm out(dim, 2);
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            out.add((Mask{1} << i) | (Mask{1} << j), 0.5 * (skew(i, j) - skew(j, i)));
        }
    }
    return out;
}

Eigen::MatrixXd two_form_matrix(const KForm& omega) {
    if (omega.degree() != 2) throw Error("two_form_matrix needs a 2-form");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(omega.dim(), omega.dim());
    omega.for_each([&](Mask bits, double c) {
        const int i = std::countr_zero(bits);
        const int j = std::countr_zero(bits & (bits - 1));
        w(i, j) = c;
        w(j, i) = -c;
    });
    return w;
}

double pfaffian(Eigen::MatrixXd a) {
    if (a.rows() != a.cols() || a.rows() % 2 != 0) throw Error("pfaffian needs an even square matrix");
    const Eigen::Index n = a.rows();
    double pf = 1.0;
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index pivot = k + 1;
        a.row(k).segment(k + 1, n - k - 1).cwiseAbs().maxCoeff(&pivot);
        pivot += k + 1;
        if (pivot != k + 1) {
            a.row(k + 1).swap(a.row(pivot));
            a.col(k + 1).swap(a.col(pivot));
            pf = -pf;
        }
        if (a(k, k + 1) == 0.0) return 0.0;
        pf *= a(k, k + 1);
        if (k + 2 < n) {
            const Eigen::Index rest = n - k - 2;
            const Eigen::VectorXd tau = a.row(k).segment(k + 2, rest).transpose() / a(k, k + 1);
            const Eigen::VectorXd col = a.col(k + 1).segment(k + 2, rest);
            a.block(k + 2, k + 2, rest, rest) += tau * col.transpose() - col * tau.transpose();
        }
    }
    return pf;
}

}  // namespace hk

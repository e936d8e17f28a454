#include <hk/io.hpp>

#include <hk/lefschetz.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hk {

namespace {

const Json& require(const Json& obj, const char* key, const std::string& context) {
    if (!obj.is_object()) throw ParseError(context + ": expected a JSON object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(context + ": missing field '" + key + "'");
    return *it;
}

int require_int(const Json& obj, const char* key, const std::string& context) {
    const Json& v = require(obj, key, context);
    if (!v.is_number_integer()) throw ParseError(context + "." + key + ": expected an integer");
    return v.get<int>();
}

double as_double(const Json& v, const std::string& field) {
    if (!v.is_number()) throw ParseError(field + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(field + ": value is not finite");
    return d;
}

std::complex<double> as_complex(const Json& v, const std::string& field) {
    if (v.is_number()) return {as_double(v, field), 0.0};
    if (!v.is_array() || v.size() != 2) throw ParseError(field + ": expected a number or [re, im]");
    return {as_double(v[0], field + "[0]"), as_double(v[1], field + "[1]")};
}

Eigen::MatrixXcd complex_matrix_from_json(const Json& value, const std::string& field) {
    if (!value.is_array() || value.empty()) throw ParseError(field + ": expected a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(value.size());
    Eigen::MatrixXcd m;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = value[static_cast<std::size_t>(i)];
        const std::string where = field + "[" + std::to_string(i) + "]";
        if (!row.is_array()) throw ParseError(where + ": expected an array");
        if (i == 0) m.resize(rows, static_cast<Eigen::Index>(row.size()));
        if (static_cast<Eigen::Index>(row.size()) != m.cols()) throw ParseError(where + ": ragged row");
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = as_complex(row[static_cast<std::size_t>(j)], where + "[" + std::to_string(j) + "]");
        }
    }
    return m;
}

void dump(const Json& v, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(key).dump() + ": ";
                dump(item, out, depth + 1);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i > 0) out += ", ";
                    dump(v[i], out, depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i > 0) out += ",\n";
                out += pad;
                dump(v[i], out, depth + 1);
            }
            out += "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double d = v.get<double>();
            if (!std::isfinite(d)) {
                out += "null";
                return;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", d);
            out += buf;
            return;
        }
        default: out += v.dump(); return;
    }
}

Json residual_array(const std::array<double, 3>& r) { return Json::array({r[0], r[1], r[2]}); }

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Messages of the form "... at line L, column C: ...".
        throw ParseError(source + ": " + e.what());
    }
}

std::string canonical_dump(const Json& value) {
    std::string out;
    dump(value, out, 0);
    out += "\n";
    return out;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& value, const std::string& field) {
    const Eigen::MatrixXcd c = complex_matrix_from_json(value, field);
    if (c.imag().cwiseAbs().maxCoeff() != 0.0) throw ParseError(field + ": expected real entries");
    return c.real();
}

KForm kform_from_json(const Json& value) {
    const std::string ctx = "kform";
    const int dim = require_int(value, "dim", ctx);
    const int degree = require_int(value, "degree", ctx);
    if (dim < 1 || dim > kMaxDim) throw ParseError(ctx + ".dim: out of range [1, " + std::to_string(kMaxDim) + "]");
    if (degree < 0 || degree > dim) throw ParseError(ctx + ".degree: out of range [0, dim]");
    const Json& terms = require(value, "terms", ctx);
    if (!terms.is_array()) throw ParseError(ctx + ".terms: expected an array");
    KForm out(dim, degree);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string where = ctx + ".terms[" + std::to_string(t) + "]";
        const Json& idx = require(terms[t], "indices", where);
        if (!idx.is_array()) throw ParseError(where + ".indices: expected an array");
        std::vector<int> indices;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (!idx[i].is_number_integer()) throw ParseError(where + ".indices: expected integers");
            const int v = idx[i].get<int>();
            if (v < 0 || v >= dim) {
                throw ParseError(where + ".indices: index " + std::to_string(v) + " outside [0, " +
                                 std::to_string(dim) + ")");
            }
            indices.push_back(v);
        }
        if (static_cast<int>(indices.size()) != degree) {
            throw ParseError(where + ".indices: expected " + std::to_string(degree) + " indices");
        }
        const double coeff = as_double(require(terms[t], "coeff", where), where + ".coeff");
        const auto [bits, sign] = canonical_blade(indices, dim);
        if (sign != 0) out.add(bits, sign * coeff);
    }
    return out;
}

Json kform_to_json(const KForm& form) {
    Json terms = Json::array();
    form.for_each([&](Mask bits, double c) {
        terms.push_back(Json{{"indices", blade_indices(bits)}, {"coeff", c}});
    });
    return Json{{"dim", form.dim()}, {"degree", form.degree()}, {"terms", std::move(terms)}};
}

HyperKahlerSpace space_from_json(const Json& value, double tol) {
    const std::string ctx = "space";
    const int k = require_int(value, "k", ctx);
    if (k < 1 || k > kMaxQuaternionicDim) throw ParseError(ctx + ".k: out of range [1, 4]");
    try {
        HyperKahlerSpace s(k, matrix_from_json(require(value, "gram", ctx), ctx + ".gram"),
                           matrix_from_json(require(value, "I", ctx), ctx + ".I"),
                           matrix_from_json(require(value, "J", ctx), ctx + ".J"),
                           matrix_from_json(require(value, "K", ctx), ctx + ".K"));
        const QuaternionicReport rep = check_quaternionic(s, tol);
        if (!rep.pass) {
            std::ostringstream msg;
            msg << ctx << ": structures fail the quaternionic relations (max residual "
                << std::max({rep.relations.max(), rep.compatibility[0], rep.compatibility[1],
                             rep.compatibility[2]})
                << ", tolerance " << tol << ")";
            throw ParseError(msg.str());
        }
        return s;
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(ctx + ": " + e.what());
    }
}

Json space_to_json(const HyperKahlerSpace& space) {
    return Json{{"k", space.k()},
                {"gram", matrix_to_json(space.gram())},
                {"I", matrix_to_json(space.structure(Axis::I))},
                {"J", matrix_to_json(space.structure(Axis::J))},
                {"K", matrix_to_json(space.structure(Axis::K))}};
}

SymplecticTriple triple_from_json(const Json& value) {
    const std::string ctx = "triple";
    const int dim = require_int(value, "dim", ctx);
    if (dim < 2 || dim % 2 != 0) throw ParseError(ctx + ".dim: expected a positive even integer");
    SymplecticTriple t;
    const std::array<const char*, 3> keys{"W_I", "W_J", "W_K"};
    for (std::size_t a = 0; a < 3; ++a) {
        t.forms[a] = matrix_from_json(require(value, keys[a], ctx), ctx + "." + keys[a]);
        if (t.forms[a].rows() != dim || t.forms[a].cols() != dim) {
            throw ParseError(ctx + "." + keys[a] + ": expected " + std::to_string(dim) + "x" +
                             std::to_string(dim));
        }
    }
    return t;
}

Json triple_to_json(const SymplecticTriple& triple) {
    return Json{{"dim", triple.dim()},
                {"W_I", matrix_to_json(triple.form(Axis::I))},
                {"W_J", matrix_to_json(triple.form(Axis::J))},
                {"W_K", matrix_to_json(triple.form(Axis::K))}};
}

HolonomyTuple tuple_from_json(const Json& value) {
    const std::string ctx = "tuple";
    if (!value.is_object()) throw ParseError(ctx + ": expected a JSON object");
    try {
        if (value.contains("angles")) {
            const Json& group = require(value, "group", ctx);
            if (!group.is_string() || group.get<std::string>() != "su2") {
                throw ParseError(ctx + ".group: only \"su2\" accepts angles");
            }
            const Json& angles = value["angles"];
            if (!angles.is_array()) throw ParseError(ctx + ".angles: expected an array");
            std::vector<double> theta;
            for (std::size_t i = 0; i < angles.size(); ++i) {
                theta.push_back(as_double(angles[i], ctx + ".angles[" + std::to_string(i) + "]"));
            }
            return su2_holonomy_from_angles(theta);
        }
        const Json& gd = require(value, "group_data", ctx);
        const std::string gctx = ctx + ".group_data";
        CompactGroupData group;
        const Json& name = require(gd, "name", gctx);
        group.name = name.is_string() ? name.get<std::string>() : throw ParseError(gctx + ".name: expected a string");
        group.matrix_dim = require_int(gd, "matrix_dim", gctx);
        group.rank = require_int(gd, "rank", gctx);
        const Json& basis = require(gd, "basis", gctx);
        if (!basis.is_array()) throw ParseError(gctx + ".basis: expected an array of matrices");
        for (std::size_t i = 0; i < basis.size(); ++i) {
            group.basis.push_back(complex_matrix_from_json(basis[i], gctx + ".basis[" + std::to_string(i) + "]"));
        }
        group.inner_product = matrix_from_json(require(gd, "inner_product", gctx), gctx + ".inner_product");
        HolonomyTuple t{std::move(group), {}};
        const Json& gens = require(value, "generators", ctx);
        if (!gens.is_array()) throw ParseError(ctx + ".generators: expected an array of matrices");
        for (std::size_t i = 0; i < gens.size(); ++i) {
            t.generators.push_back(complex_matrix_from_json(gens[i], ctx + ".generators[" + std::to_string(i) + "]"));
        }
        validate_tuple(t);
        return t;
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(ctx + ": " + e.what());
    }
}

Json reconstruction_to_json(const ReconstructionResult& r) {
    Json out{{"verdict", verdict_text(r.verdict, r.signature)},
             {"diagnostic", r.diagnostic},
             {"validation",
              Json{{"skew_residuals", residual_array(r.validation.skew_residuals)},
                   {"condition_numbers", residual_array(r.validation.condition_numbers)},
                   {"relation_residuals", residual_array(r.validation.relation_residuals)},
                   {"tolerance", r.validation.tolerance},
                   {"pass", r.validation.pass}}}};
    if (r.verdict == Verdict::InvalidTriple && r.g.size() == 0) return out;
    out["g"] = matrix_to_json(r.g);
    out["symmetric_residual"] = r.symmetric_residual;
    out["signature"] = Json::array({r.signature.positive, r.signature.negative});
    if (r.structures[0].size() > 0) {
        out["I"] = matrix_to_json(r.structures[0]);
        out["J"] = matrix_to_json(r.structures[1]);
        out["K"] = matrix_to_json(r.structures[2]);
        const auto& q = r.quaternionic_residuals;
        out["quaternionic_residuals"] = Json{{"I2", q.i_squared}, {"J2", q.j_squared},
                                             {"K2", q.k_squared}, {"IJK", q.ijk}};
        out["ijk_plus_residual"] = r.ijk_plus_residual;
        out["min_eigenvalue"] = r.definiteness.min_eigenvalue;
        out["positive_definite"] = r.definiteness.pass;
    }
    return out;
}

Json oracle_to_json(const OracleResult& r) {
    return Json{{"N", r.grid},
                {"kernel_dim", r.kernel_dim},
                {"spectral_gap", r.spectral_gap},
                {"gap_ratio", r.gap_ratio},
                {"converged", r.converged},
                {"solver_iterations", r.solver_iterations},
                {"eigenvalues_head", r.eigenvalues_head}};
}

Json moduli_report_to_json(const ModuliReport& r) {
    return Json{{"model_dim", r.model_dim},
                {"rank", r.rank},
                {"generic", r.generic},
                {"label", r.label},
                {"verdict", r.verdict},
                {"lefschetz_constant", r.lefschetz_constant},
                {"fitted_ratio", r.fitted_ratio},
                {"l2_residual", r.l2_residual},
                {"quaternionic_residual", r.reconstruction.quaternionic_residuals.max()},
                {"tolerance", r.tolerance},
                {"pass", r.pass}};
}

Json lefschetz_report_json(const HyperKahlerSpace& space, const std::string& space_id, Axis axis,
                           double tol) {
    const HardLefschetzReport hl = hard_lefschetz_check(space, axis, 1e-12);
    const double key = key_identity_residual(space, axis, IdentityScale::NMinusOneFactorial);
    const double key_n = key_identity_residual(space, axis, IdentityScale::NFactorial);
    const CompositeIdentityReport comp = composite_identity_report(space, tol);
    const std::size_t a = axis_index(axis);
    const bool pass = hl.invertible && key < tol && comp.cyclic[a] < tol && comp.anticommutation[a] < tol;
    return Json{{"space_id", space_id},
                {"axis", std::string(axis_name(axis))},
                {"residuals",
                 Json{{"key_identity", key},
                      {"key_identity_n_factorial", key_n},
                      {"cyclic", comp.cyclic[a]},
                      {"anticommutation", comp.anticommutation[a]},
                      {"hard_lefschetz_condition", hl.condition_number}}},
                {"pass", pass},
                {"tolerances", Json{{"identity", tol}, {"hard_lefschetz", hl.tolerance}}}};
}

}  // namespace hk

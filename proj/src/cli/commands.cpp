#include <hk/cli/commands.hpp>

#include <hk/lattice_oracle.hpp>
#include <hk/reconstruct.hpp>
#include <hk/torus_moduli.hpp>

#include <cmath>

namespace hk::cli {

Report reconstruct_cmd(const std::string& input_path, double tol) {
    const SymplecticTriple triple = triple_from_json(read_json_file(input_path));
    const ReconstructionResult r = reconstruct(triple, tol);
    Report rep("reconstruct", Json{{"input", input_path}, {"tol", tol}});
    const auto& v = r.validation;
    rep.add("reconstruct.triple_relations", anchor::kTripleRelations,
            std::max({v.relation_residuals[0], v.relation_residuals[1], v.relation_residuals[2],
                      v.skew_residuals[0], v.skew_residuals[1], v.skew_residuals[2]}),
            tol);
    if (r.g.size() > 0) {
        rep.add("reconstruct.symmetry", anchor::kReconstruction, r.symmetric_residual,
                kSymmetryTolerance);
    }
    if (r.structures[0].size() > 0) {
        rep.add("reconstruct.quaternionic", anchor::kQuaternionic, r.quaternionic_residuals.max(),
                kSymmetryTolerance);
        rep.add_flag("reconstruct.positive_definite", anchor::kDefinite, r.definiteness.pass);
    }
    rep.set_detail("verdict", verdict_text(r.verdict, r.signature));
    rep.set_detail("result", reconstruction_to_json(r));
    return rep;
}

Report torus_cmd(const std::vector<double>& angles, double scale, std::optional<int> oracle_grid,
                 std::uint64_t seed) {
    if (angles.size() != 4) {
        throw Error("torus command works on T^4 and needs 4 angles, got " +
                    std::to_string(angles.size()));
    }
    const HolonomyTuple tuple = su2_holonomy_from_angles(angles);
    const TangentModel model = tangent_model(tuple, 1, scale);
    Json config{{"angles", angles}, {"scale", scale}};
    if (oracle_grid) config["oracle"] = *oracle_grid;
    Report rep("torus", config);

    Json summary{{"rank", model.rank()},
                 {"model_dim", model.dim()},
                 {"volume", model.volume},
                 {"generic", model.smoothness.generic},
                 {"label", model.smoothness.generic ? "theorem-backed" : "non-generic"}};
    if (model.rank() > 0) {
        const ModuliReport m = moduli_hyperkahler_check(model);
        rep.add("torus.l2_metric", anchor::kL2Metric, m.l2_residual, m.tolerance);
        rep.add("torus.quaternionic", anchor::kModuli, m.reconstruction.quaternionic_residuals.max(),
                kValidationTolerance);
        rep.add_flag("torus.verdict_hyperkahler", anchor::kModuli,
                     m.reconstruction.verdict == Verdict::HyperKahler);
        summary["verdict"] = m.verdict;
        rep.set_detail("moduli", moduli_report_to_json(m));
    } else {
        summary["verdict"] = "zero-dimensional model";
    }
    rep.set_detail("model", summary);
    if (oracle_grid) {
        const OracleResult o = lattice_harmonic_oracle(tuple, 1, *oracle_grid, seed);
        rep.add_exact("torus.lattice_kernel", anchor::kHodgeIso,
                      std::abs(o.kernel_dim - 4 * model.rank()));
        rep.set_detail("oracle", oracle_to_json(o));
    }
    return rep;
}

}  // namespace hk::cli

#pragma once

// JSON loaders and writers. Loaders throw ParseError naming the offending
// field; writers produce nlohmann::ordered_json so key order is stable.

#include <hk/exterior.hpp>
#include <hk/lattice_oracle.hpp>
#include <hk/quaternionic.hpp>
#include <hk/reconstruct.hpp>
#include <hk/torus_moduli.hpp>

#include <json.hpp>

#include <Eigen/Dense>

#include <string>

namespace hk {

using Json = nlohmann::ordered_json;

/// Parses a file; syntax errors carry line and column.
[[nodiscard]] Json read_json_file(const std::string& path);
[[nodiscard]] Json parse_json_text(const std::string& text, const std::string& source = "input");

/// Floats rendered with 17 significant digits, non-finite values as null,
/// two-space indentation, trailing newline.
[[nodiscard]] std::string canonical_dump(const Json& value);

[[nodiscard]] Json matrix_to_json(const Eigen::MatrixXd& m);
/// Row-major nested array; `field` names the value in diagnostics.
[[nodiscard]] Eigen::MatrixXd matrix_from_json(const Json& value, const std::string& field);

/// {dim, degree, terms: [{indices, coeff}]}. Index lists need not be sorted;
/// they are normalized with the permutation sign, repeated indices give zero
/// and duplicate blades accumulate.
[[nodiscard]] KForm kform_from_json(const Json& value);
[[nodiscard]] Json kform_to_json(const KForm& form);

/// {k, gram, I, J, K}. Rejects spaces whose quaternionic or compatibility
/// residuals exceed tol.
[[nodiscard]] HyperKahlerSpace space_from_json(const Json& value, double tol = 1e-9);
[[nodiscard]] Json space_to_json(const HyperKahlerSpace& space);

/// {dim, W_I, W_J, W_K}.
[[nodiscard]] SymplecticTriple triple_from_json(const Json& value);
[[nodiscard]] Json triple_to_json(const SymplecticTriple& triple);

/// {group: "su2", angles: [...]} or {group_data: {...}, generators: [...]}
/// with complex entries written as [re, im].
[[nodiscard]] HolonomyTuple tuple_from_json(const Json& value);

[[nodiscard]] Json reconstruction_to_json(const ReconstructionResult& result);
[[nodiscard]] Json oracle_to_json(const OracleResult& result);
[[nodiscard]] Json moduli_report_to_json(const ModuliReport& report);

/// {space_id, axis, residuals: {...}, pass, tolerances: {...}} for one axis.
[[nodiscard]] Json lefschetz_report_json(const HyperKahlerSpace& space, const std::string& space_id,
                                         Axis axis, double tol = 1e-9);

}  // namespace hk

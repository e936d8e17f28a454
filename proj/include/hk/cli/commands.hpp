#pragma once

#include <hk/cli/report.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hk::cli {

/// Loads a triple JSON file and runs the reconstruction pipeline. The verdict
/// text goes to details.verdict. Throws ParseError on malformed input.
[[nodiscard]] Report reconstruct_cmd(const std::string& input_path, double tol);

/// k = 1 path: exactly four angles. The oracle runs when a grid is given;
/// guard rejections propagate unchanged.
[[nodiscard]] Report torus_cmd(const std::vector<double>& angles, double scale,
                               std::optional<int> oracle_grid, std::uint64_t seed);

}  // namespace hk::cli

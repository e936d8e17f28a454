#pragma once

#include <hk/cli/report.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hk::cli {

inline const std::vector<std::string> kSuiteNames{
    "exterior-laws", "quaternionic", "lefschetz-identities", "reconstruct-roundtrip",
    "torus-theorem", "all"};

struct Tolerances {
    double validation = 1e-9;
    double symmetry = 1e-8;
    double identity = 1e-9;
};

struct SuiteConfig {
    std::string suite = "all";
    std::vector<int> ks{1};
    std::uint64_t seed = 0;
    int trials = 10;
    Tolerances tolerances;
    /// Grid for the single lattice oracle run in torus-theorem; 0 skips it.
    int oracle_grid = 6;

    /// Echoed into the report; excludes anything that does not affect results.
    [[nodiscard]] Json to_json() const;
};

/// Throws Error on an unknown suite, k outside [1, 3] or trials < 1.
void validate_config(const SuiteConfig& config);

/// Trials draw from trial_seed(config.seed, trial); each check record holds
/// the worst residual over trials for one (check, k) pair.
[[nodiscard]] Report run_suite(const SuiteConfig& config);

}  // namespace hk::cli

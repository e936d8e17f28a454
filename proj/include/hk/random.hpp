#pragma once

// Seed splitting and random test data.

#include <hk/exterior.hpp>

#include <cstdint>
#include <random>

namespace hk {

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream seed for trial `index` of a run seeded with `seed`.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// Standard normal coefficients on `terms` distinct random blades; terms = 0
/// fills every blade.
[[nodiscard]] KForm random_form(int dim, int degree, std::mt19937_64& rng, std::size_t terms = 0);

}  // namespace hk

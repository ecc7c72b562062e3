#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "framekit/constructions.hpp"
#include "framekit/io.hpp"
#include "framekit/rng.hpp"

namespace framekit::verify {

/// Additive slack on every bound comparison made by the suites.
inline constexpr double kBoundSlack = 1e-8;

struct SuiteOptions {
    std::size_t trials = 0;  // 0 selects the suite default
    std::uint64_t seed = 0;
    TolerancePolicy tol;
};

struct SuiteReport {
    std::string suite;
    bool passed = true;
    std::size_t cases = 0;
    std::size_t failures = 0;
    io::Json report;  // self-describing: suite, seed, trials, tolerances, per-check worst witnesses
};

const std::vector<std::string>& suite_names();
std::size_t default_trials(std::string_view suite);

/// Throws invalid_input for unknown suite names.
SuiteReport run_suite(std::string_view suite, const SuiteOptions& options);

SuiteReport complements(const SuiteOptions& options);
SuiteReport projected_supports(const SuiteOptions& options);
SuiteReport block_bounds(const SuiteOptions& options);
SuiteReport subframe_recipe(const SuiteOptions& options);
SuiteReport projection_order(const SuiteOptions& options);

// Corpus generators shared with the tests.

Matrix gaussian_matrix(RngStream& rng, std::size_t rows, std::size_t cols);
/// Orthogonal dim x dim matrix from Gram-Schmidt on a Gaussian matrix.
Matrix random_orthogonal(RngStream& rng, std::size_t dim);

/// Feasible block_riesz spec with A <= B <= 1 and family size <= max_size.
constructions::ConstructionSpec random_block_spec(RngStream& rng, std::size_t max_dim = 10, std::size_t max_size = 14);

/// Feasible subframe_recipe spec with the given number of full-support vectors.
constructions::ConstructionSpec random_recipe_spec(RngStream& rng, std::size_t n_k, std::size_t max_dim = 12);

/// Reordering that puts the k vectors first, then g, then h.
projection::Permutation k_first_order(const subframe::SubframeDecomposition& d, std::size_t size);

/// Exhaustive search up to 14 vectors, otherwise 4096 seeded samples.
subframe::SubsetSearch search_for(std::size_t family_size, std::uint64_t seed);

}  // namespace framekit::verify

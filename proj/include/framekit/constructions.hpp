#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "framekit/frame.hpp"
#include "framekit/subframe.hpp"

namespace framekit::constructions {

enum class ConstructionKind { onb, block_riesz, subframe_recipe, failing_family };

std::string_view to_string(ConstructionKind kind) noexcept;
ConstructionKind construction_kind_from_string(std::string_view name);

/// Parameters for every generator. Fields a generator does not use are ignored.
struct ConstructionSpec {
    ConstructionKind kind = ConstructionKind::onb;
    std::size_t dim = 1;
    std::size_t k = 1;          // nesting levels of block vectors
    std::size_t K = 1;          // max support size of a block vector
    double A = 1.0;             // squared coordinate magnitudes lie in [A, B]
    double B = 1.0;
    std::size_t n_h = 1;        // level-1 block vectors
    std::size_t n_k = 0;        // full-support vectors (subframe_recipe)
    double h2_decay = 0.5;      // ||h_t^2|| = h2_decay^(t+1)
    double tail_decay = 0.5;    // coordinate decay ratio of full-support vectors
    std::size_t m = 0;          // dim G (subframe_recipe); designated column count (failing_family, 0 = dim/2)
    std::uint64_t seed = 0;

    /// Throws invalid_input on violated field invariants.
    void validate() const;
};

/// Riesz frame bounds guaranteed for ONB-plus-k-level block families:
/// lower = 1 / (D^k 8^k prod_{i=1..k} (1 + iD)), upper = 1 + kD, D = K B / A.
struct GuaranteedBounds {
    double D = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

GuaranteedBounds guaranteed_bounds(std::size_t k, std::size_t K, double A, double B);

struct DesignedFailure {
    IndexSet subset;                                  // subfamily meant to have a tiny lower bound
    double bound_ceiling = 0.0;                       // 1 / (number of designated columns)
    std::vector<std::size_t> designated_coordinates;  // j_1 < j_2 < ...
    std::vector<double> column_sums;                  // sum_n |k_n(j_m)|^2 per designated column
    double measured_lower = 0.0;                      // frame-sequence lower bound of `subset`
};

struct ConstructedFrame {
    ConstructionSpec spec;
    FrameFamily family;
    subframe::SubframeDecomposition ground_truth;
    std::optional<GuaranteedBounds> guaranteed;
    std::optional<DesignedFailure> designed_failure;
};

ConstructedFrame make_onb(std::size_t dim);

/// Standard basis followed by k levels of block vectors. Level-1 vectors sit
/// on disjoint runs of s = floor(K / 2^(k-1)) coordinates, right-aligned in
/// n_h equal slots; each higher level pairs consecutive vectors of the level
/// below with +-1 coefficients (an unpaired vector is carried up alone).
ConstructedFrame make_block_riesz(const ConstructionSpec& spec);

/// Block Riesz frame on coordinates [m, dim), each h perturbed inside
/// G = span(e_0..e_{m-1}), followed by n_k full-support vectors.
ConstructedFrame make_subframe_frame(const ConstructionSpec& spec);

/// Standard basis plus floor(dim/2) full-support vectors whose designated
/// columns have l2 mass 0.9/m, so the subfamily without the designated basis
/// vectors has lower frame bound below 1/m_max.
ConstructedFrame make_failing_family(const ConstructionSpec& spec);

/// Dispatches on spec.kind.
ConstructedFrame construct(const ConstructionSpec& spec);

/// Concatenation of a family inside range(p) with one inside range(I - p).
FrameFamily union_on_complements(const FrameFamily& f1, const FrameFamily& f2, const OrthoProjector& p);

}  // namespace framekit::constructions

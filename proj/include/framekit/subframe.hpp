#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "framekit/frame.hpp"

namespace framekit::subframe {

/// Frame-sequence bounds of one subfamily, with the subset that produced them.
struct SubsetCertificate {
    IndexSet subset;
    double lower = 0.0;
    double upper = 0.0;
};

struct RieszFrameReport {
    double riesz_lower = 0.0;
    double riesz_upper = 0.0;
    SubsetCertificate worst;
    bool exhaustive = true;
    std::size_t subsets_examined = 0;  // nonempty subsets with at least one nonzero vector
    std::size_t subsets_skipped = 0;   // nonempty all-zero subsets
};

struct SubsetSearch {
    enum class Mode { exhaustive, sampled };
    Mode mode = Mode::exhaustive;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;

    static SubsetSearch exhaustive() { return {}; }
    static SubsetSearch sampled(std::size_t n_samples, std::uint64_t seed) {
        return {Mode::sampled, n_samples, seed};
    }
};

/// Largest family size accepted by exhaustive subset enumeration.
inline constexpr std::size_t kExhaustiveLimit = 22;

/// Basis expansion tolerance separating designed zeros from rounding noise.
inline constexpr double kDefaultCoordTol = 1e-8;

/// Fraction of the ambient dimension above which a support counts as "infinite".
inline constexpr double kDefaultSupportFraction = 0.9;

/// Role split of a family against a chosen Riesz basis (g), finitely
/// supported extras (h) and full-support extras (k).
struct SubframeDecomposition {
    IndexSet g;
    IndexSet h;
    IndexSet k;
    std::size_t m0 = 0;                                  // G = span of the first m0 basis vectors
    std::vector<IndexSet> h_supports;                    // basis-coordinate support of each h, in h order
    std::vector<std::pair<Vector, Vector>> h_split;      // (h^1 in G^perp, h^2 in G), in h order
    double h2_energy = 0.0;                              // sum ||h^2||^2
};

std::pair<bool, FrameBounds> is_frame_sequence(const FrameFamily& f, double threshold,
                                               const TolerancePolicy& tol = {});

/// Minimum / maximum frame-sequence bounds over nonempty subsets. Ties on the
/// lower bound resolve to the lexicographically smallest index list. The
/// exhaustive sweep is split across worker threads; the reduction is order
/// independent, so the report does not depend on the thread count.
RieszFrameReport riesz_frame_bound(const FrameFamily& f, const SubsetSearch& mode = SubsetSearch::exhaustive(),
                                   const TolerancePolicy& tol = {}, unsigned threads = 0);

struct RieszBasis {
    IndexSet indices;
    FrameBounds constants;  // riesz-constants kind
};

/// Greedy maximal linearly independent subfamily, ascending index order.
RieszBasis extract_riesz_basis(const FrameFamily& f, const TolerancePolicy& tol = {});

/// Coefficients of every vector of f in the (square, invertible) basis; column i
/// holds the expansion of f_i.
Matrix basis_coordinates(const FrameFamily& f, const FrameFamily& basis, const TolerancePolicy& tol = {});

IndexSet support_of(const Vector& coordinates, double coord_tol = kDefaultCoordTol);

/// Greedy first-fit grouping into pairwise disjointly supported groups.
std::vector<IndexSet> partition_disjoint_support(const FrameFamily& f, const FrameFamily& basis,
                                                 double coord_tol = kDefaultCoordTol);

/// Upper bound on the first-fit group count for families whose supports have
/// at most `max_support` entries with magnitude >= `min_coordinate`, inside a
/// family with upper frame bound `upper_bound`. Each coordinate can be shared
/// by at most floor(upper_bound / min_coordinate^2) vectors.
std::size_t pigeonhole_group_bound(std::size_t max_support, double min_coordinate, double upper_bound);

struct ClassifyOptions {
    double support_fraction = kDefaultSupportFraction;
    double coord_tol = kDefaultCoordTol;
    /// Forces m0; when unset, m0 is the smallest prefix p such that the h
    /// supports restricted to coordinates >= p form a laminar family (any two
    /// are disjoint or nested), which is the support pattern of block Riesz frames.
    std::optional<std::size_t> g_prefix;
};

SubframeDecomposition classify_supports(const FrameFamily& f, const IndexSet& basis_indices,
                                        const ClassifyOptions& options = {}, const TolerancePolicy& tol = {});

struct ProjectedSupportReport {
    double empirical_a0 = 0.0;          // min lower bound of (P_Delta h_i)_{i in Gamma_1} over samples
    std::size_t samples_used = 0;       // samples with at least one nonzero projected vector
    std::size_t samples_skipped = 0;
    IndexSet worst_delta;
    IndexSet worst_gamma;
    std::size_t max_support = 0;        // largest |Delta_i| over the h vectors
    double coefficient_min = 0.0;       // smallest nonzero |h_i(j)| in basis coordinates
    double coefficient_max = 0.0;       // largest |h_i(j)|
};

/// Frame-sequence lower bound of (P_Delta h_i)_{i in gamma1}, P_Delta the
/// natural projection keeping basis coordinates in delta. Returns 0 when every
/// projected vector vanishes. gamma1 indexes the family (must be h indices).
double projected_h_lower_bound(const FrameFamily& f, const SubframeDecomposition& decomposition,
                               const IndexSet& delta, const IndexSet& gamma1, const TolerancePolicy& tol = {});

/// Samples random coordinate sets Delta and h-subsets Gamma_1. With no h
/// vectors the reported A0 is the frame-sequence lower bound of the g part.
ProjectedSupportReport sample_projected_supports(const FrameFamily& f,
                                                 const SubframeDecomposition& decomposition,
                                                 std::size_t n_projector_samples, std::uint64_t seed,
                                                 const TolerancePolicy& tol = {});

/// Coefficient window check lower <= |h_i(j)|^2 <= upper against the Riesz
/// frame bounds (frame-bound scale) of a family whose g part is orthonormal.
bool coefficient_window_holds(const ProjectedSupportReport& report, const FrameBounds& riesz_bounds);

}  // namespace framekit::subframe

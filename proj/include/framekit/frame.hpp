#pragma once

#include <string_view>
#include <vector>

#include "framekit/family.hpp"
#include "framekit/linalg.hpp"

namespace framekit {

using linalg::TolerancePolicy;

enum class BoundsKind { frame_for_space, frame_sequence, riesz_constants };

std::string_view to_string(BoundsKind kind) noexcept;
BoundsKind bounds_kind_from_string(std::string_view name);

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
    BoundsKind kind = BoundsKind::frame_for_space;
};

/// Orthogonal projector, stored as an orthonormal basis of its range.
class OrthoProjector {
public:
    OrthoProjector() = default;

    /// Projector onto span(vectors); the basis is built by orthonormalize.
    static OrthoProjector onto_span(const FrameFamily& vectors, const TolerancePolicy& tol = {});
    /// Projector onto span{e_i : i in coords} in R^dim.
    static OrthoProjector coordinate(std::size_t dim, const IndexSet& coords);
    /// Projector onto the orthogonal complement of this projector's range.
    OrthoProjector complement() const;

    std::size_t dim() const noexcept { return dim_; }
    std::size_t rank() const noexcept { return basis_.size(); }
    const FrameFamily& basis() const noexcept { return basis_; }

    Vector apply(const Vector& v) const;
    Matrix matrix() const;

private:
    OrthoProjector(std::size_t dim, FrameFamily basis) : dim_(dim), basis_(std::move(basis)) {}

    std::size_t dim_ = 0;
    FrameFamily basis_;
};

enum class ProjectionSide { onto, complement };

/// S = sum_i f_i f_i^T, the dim x dim frame operator.
Matrix frame_operator(const FrameFamily& f);

/// Frame-sequence bounds: squared extreme nonzero singular values of the
/// synthesis matrix (= extreme nonzero eigenvalues of the Gram matrix and of S).
/// Also reports the numerical rank used for the "nonzero" cut.
struct SpectralBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t rank = 0;
};
SpectralBounds frame_sequence_spectrum(const FrameFamily& f, const TolerancePolicy& tol = {});

/// Optimal bounds of the requested kind. frame_for_space reports lower = 0
/// when the family does not span R^dim; riesz_constants throws
/// not_linearly_independent when rank < size.
FrameBounds optimal_bounds(const FrameFamily& f, BoundsKind kind, const TolerancePolicy& tol = {});

/// (S^{-1} f_i) with the original labels; S^{-1} applied by a Cholesky solve.
FrameFamily dual_frame(const FrameFamily& f, const TolerancePolicy& tol = {});

/// c_i = <v, S^{-1} f_i>.
std::vector<double> frame_coefficients(const FrameFamily& f, const Vector& v, const TolerancePolicy& tol = {});

/// sum_i c_i f_i.
Vector synthesize(const FrameFamily& f, const std::vector<double>& coefficients);

/// Replaces each f_i by P f_i (onto) or (I - P) f_i (complement). Zero
/// vectors are kept so indices stay aligned with the input.
FrameFamily project_family(const FrameFamily& f, const OrthoProjector& p, ProjectionSide side);

/// Guaranteed lower bound A1*A2/(8B) for a family split into a frame part and
/// a projected-complement frame-sequence part sharing upper bound B.
FrameBounds combine_bounds(const FrameBounds& a1, const FrameBounds& a2, double shared_upper);

/// sum_i ||P f_i||^2.
double projected_energy(const FrameFamily& f, const OrthoProjector& p);

}  // namespace framekit

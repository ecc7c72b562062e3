#include "framekit/frame.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Cholesky>

#include "framekit/error.hpp"

namespace framekit {

std::string_view to_string(BoundsKind kind) noexcept {
    switch (kind) {
        case BoundsKind::frame_for_space: return "frame-for-space";
        case BoundsKind::frame_sequence: return "frame-sequence";
        case BoundsKind::riesz_constants: return "riesz-constants";
    }
    return "unknown";
}

BoundsKind bounds_kind_from_string(std::string_view name) {
    if (name == "frame-for-space") return BoundsKind::frame_for_space;
    if (name == "frame-sequence") return BoundsKind::frame_sequence;
    if (name == "riesz-constants") return BoundsKind::riesz_constants;
    throw Error(ErrorCode::invalid_input, "unknown bounds kind '" + std::string(name) + "'");
}

OrthoProjector OrthoProjector::onto_span(const FrameFamily& vectors, const TolerancePolicy& tol) {
    if (vectors.empty()) return OrthoProjector(vectors.dim(), FrameFamily(Matrix(vectors.dim(), 0)));
    return OrthoProjector(vectors.dim(), linalg::orthonormalize(vectors, tol).basis);
}

OrthoProjector OrthoProjector::coordinate(std::size_t dim, const IndexSet& coords) {
    coords.check_bound(dim);
    Matrix basis = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(coords.size()));
    std::vector<std::string> labels;
    Eigen::Index col = 0;
    for (std::size_t c : coords) {
        basis(static_cast<Eigen::Index>(c), col++) = 1.0;
        labels.push_back("e:" + std::to_string(c));
    }
    return OrthoProjector(dim, FrameFamily(std::move(basis), std::move(labels)));
}

OrthoProjector OrthoProjector::complement() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    // Orthonormalize [Q | I]; the sweep keeps Q first and then picks the
    // identity columns that extend the span, which span range(Q)^perp after
    // dropping the leading rank() columns.
    Matrix stacked(n, static_cast<Eigen::Index>(rank()) + n);
    stacked << basis_.matrix(), Matrix::Identity(n, n);
    const auto full = linalg::orthonormalize(FrameFamily(std::move(stacked)));
    const auto r = static_cast<Eigen::Index>(rank());
    Matrix rest = full.basis.matrix().rightCols(full.basis.matrix().cols() - r);
    return OrthoProjector(dim_, FrameFamily(std::move(rest)));
}

Vector OrthoProjector::apply(const Vector& v) const {
    if (static_cast<std::size_t>(v.size()) != dim_)
        throw Error(ErrorCode::dimension_mismatch, "vector of length " + std::to_string(v.size()) +
                                                       " against projector in dimension " + std::to_string(dim_));
    const Matrix& q = basis_.matrix();
    return q * (q.transpose() * v);
}

Matrix OrthoProjector::matrix() const {
    const Matrix& q = basis_.matrix();
    return q * q.transpose();
}

Matrix frame_operator(const FrameFamily& f) {
    if (f.empty()) throw Error(ErrorCode::invalid_input, "frame operator of an empty family");
    const Matrix& m = f.matrix();
    Matrix s = m * m.transpose();
    return (0.5 * (s + s.transpose())).eval();
}

SpectralBounds frame_sequence_spectrum(const FrameFamily& f, const TolerancePolicy& tol) {
    if (f.empty()) throw Error(ErrorCode::invalid_input, "bounds of an empty family");
    if (!f.has_nonzero()) throw Error(ErrorCode::degenerate_input, "family has no nonzero vector");
    const auto sv = linalg::singular_values(f.matrix());
    const std::size_t rank = linalg::numerical_rank(sv, tol);
    const double smallest = sv[rank - 1];
    return {smallest * smallest, sv.front() * sv.front(), rank};
}

FrameBounds optimal_bounds(const FrameFamily& f, BoundsKind kind, const TolerancePolicy& tol) {
    const SpectralBounds spectrum = frame_sequence_spectrum(f, tol);
    switch (kind) {
        case BoundsKind::frame_for_space: {
            const auto eig = linalg::sym_eigenvalues(frame_operator(f));
            const double lower = spectrum.rank < f.dim() ? 0.0 : std::max(0.0, eig.front());
            return {lower, eig.back(), kind};
        }
        case BoundsKind::frame_sequence:
            return {spectrum.lower, spectrum.upper, kind};
        case BoundsKind::riesz_constants:
            if (spectrum.rank < f.size())
                throw Error(ErrorCode::not_linearly_independent,
                            "family of " + std::to_string(f.size()) + " vectors has numerical rank " +
                                std::to_string(spectrum.rank));
            return {std::sqrt(spectrum.lower), std::sqrt(spectrum.upper), kind};
    }
    return {};
}

namespace {

Eigen::LLT<Matrix> factor_frame_operator(const FrameFamily& f, const TolerancePolicy& tol) {
    const SpectralBounds spectrum = frame_sequence_spectrum(f, tol);
    if (spectrum.rank < f.dim())
        throw Error(ErrorCode::not_a_frame, "frame operator is rank deficient by " +
                                                std::to_string(f.dim() - spectrum.rank) + " of " +
                                                std::to_string(f.dim()) + " dimensions");
    Eigen::LLT<Matrix> llt(frame_operator(f));
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::not_a_frame, "frame operator is not numerically positive definite");
    return llt;
}

}  // namespace

FrameFamily dual_frame(const FrameFamily& f, const TolerancePolicy& tol) {
    const auto llt = factor_frame_operator(f, tol);
    return FrameFamily(llt.solve(f.matrix()), f.labels());
}

std::vector<double> frame_coefficients(const FrameFamily& f, const Vector& v, const TolerancePolicy& tol) {
    if (static_cast<std::size_t>(v.size()) != f.dim())
        throw Error(ErrorCode::dimension_mismatch, "vector of length " + std::to_string(v.size()) +
                                                       " against family in dimension " + std::to_string(f.dim()));
    const auto llt = factor_frame_operator(f, tol);
    const Vector c = f.matrix().transpose() * llt.solve(v);
    return {c.data(), c.data() + c.size()};
}

Vector synthesize(const FrameFamily& f, const std::vector<double>& coefficients) {
    if (coefficients.size() != f.size())
        throw Error(ErrorCode::dimension_mismatch, std::to_string(coefficients.size()) +
                                                       " coefficients for a family of " + std::to_string(f.size()));
    const Eigen::Map<const Vector> c(coefficients.data(), static_cast<Eigen::Index>(coefficients.size()));
    return f.matrix() * c;
}

FrameFamily project_family(const FrameFamily& f, const OrthoProjector& p, ProjectionSide side) {
    if (p.dim() != f.dim())
        throw Error(ErrorCode::dimension_mismatch, "projector dimension " + std::to_string(p.dim()) +
                                                       " differs from family dimension " + std::to_string(f.dim()));
    const Matrix& q = p.basis().matrix();
    Matrix onto = q * (q.transpose() * f.matrix());
    if (side == ProjectionSide::onto) return FrameFamily(std::move(onto), f.labels());
    return FrameFamily(f.matrix() - onto, f.labels());
}

FrameBounds combine_bounds(const FrameBounds& a1, const FrameBounds& a2, double shared_upper) {
    if (!(a1.lower > 0.0 && a2.lower > 0.0 && shared_upper > 0.0))
        throw Error(ErrorCode::invalid_input, "combine_bounds needs positive lower bounds and upper bound");
    if (shared_upper < a1.upper || shared_upper < a2.upper)
        throw Error(ErrorCode::invalid_input, "shared upper bound is below a component upper bound");
    return {a1.lower * a2.lower / (8.0 * shared_upper), shared_upper, BoundsKind::frame_for_space};
}

double projected_energy(const FrameFamily& f, const OrthoProjector& p) {
    if (p.dim() != f.dim())
        throw Error(ErrorCode::dimension_mismatch, "projector dimension " + std::to_string(p.dim()) +
                                                       " differs from family dimension " + std::to_string(f.dim()));
    return (p.basis().matrix().transpose() * f.matrix()).squaredNorm();
}

}  // namespace framekit

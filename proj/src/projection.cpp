#include "framekit/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "framekit/error.hpp"
#include "framekit/rng.hpp"

namespace framekit::projection {

Vector TruncatedOperator::solve(const Vector& v) const {
    const Matrix& q = span_basis.basis().matrix();
    return q * factor.solve(q.transpose() * v);
}

TruncatedOperator truncated_operator(const FrameFamily& f, std::size_t n, const TolerancePolicy& tol) {
    if (n == 0 || n > f.size())
        throw Error(ErrorCode::invalid_input,
                    "truncation level " + std::to_string(n) + " outside [1, " + std::to_string(f.size()) + "]");
    const FrameFamily prefix(f.matrix().leftCols(static_cast<Eigen::Index>(n)));
    if (!prefix.has_nonzero())
        throw Error(ErrorCode::degenerate_input, "first " + std::to_string(n) + " vectors are all zero");

    TruncatedOperator op;
    op.n = n;
    op.span_basis = OrthoProjector::onto_span(prefix, tol);
    op.coordinates = op.span_basis.basis().matrix().transpose() * prefix.matrix();
    op.s_n = op.coordinates * op.coordinates.transpose();
    op.s_n = (0.5 * (op.s_n + op.s_n.transpose())).eval();
    op.factor.compute(op.s_n);
    if (op.factor.info() != Eigen::Success)
        throw Error(ErrorCode::degenerate_input,
                    "truncated operator at level " + std::to_string(n) + " is not positive definite on its span");
    return op;
}

namespace {

void check_vector(const FrameFamily& f, const Vector& v) {
    if (static_cast<std::size_t>(v.size()) != f.dim())
        throw Error(ErrorCode::dimension_mismatch, "vector of length " + std::to_string(v.size()) +
                                                       " against family in dimension " + std::to_string(f.dim()));
    if (!v.allFinite()) throw Error(ErrorCode::invalid_input, "vector has non-finite entries");
}

std::vector<double> coefficients_of(const TruncatedOperator& op, const Vector& v) {
    const Vector c = op.coordinates.transpose() * op.factor.solve(op.span_basis.basis().matrix().transpose() * v);
    return {c.data(), c.data() + c.size()};
}

}  // namespace

std::vector<double> approx_coefficients(const FrameFamily& f, const Vector& v, std::size_t n,
                                        const TolerancePolicy& tol) {
    check_vector(f, v);
    return coefficients_of(truncated_operator(f, n, tol), v);
}

double log_slope(const std::vector<std::size_t>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    std::vector<double> ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        ly[i] = std::log(std::max(y[i], 1e-30));
        mx += static_cast<double>(x[i]);
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(x[i]) - mx;
        sxy += dx * (ly[i] - my);
        sxx += dx * dx;
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

ProjectionDiagnostics diagnostics(const FrameFamily& f, const Vector& v, std::vector<std::size_t> levels,
                                  IndexSet tracked, const TolerancePolicy& tol) {
    check_vector(f, v);
    if (levels.empty()) throw Error(ErrorCode::invalid_input, "no truncation levels requested");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] == 0 || levels[i] > f.size())
            throw Error(ErrorCode::invalid_input, "level " + std::to_string(levels[i]) + " outside [1, " +
                                                      std::to_string(f.size()) + "]");
        if (i > 0 && levels[i] <= levels[i - 1])
            throw Error(ErrorCode::invalid_input, "levels must be strictly increasing");
    }
    if (tracked.empty()) tracked = IndexSet::range(0, levels.front());
    if (!tracked.empty() && tracked.values().back() >= levels.front())
        throw Error(ErrorCode::invalid_input, "tracked index " + std::to_string(tracked.values().back()) +
                                                  " is not below the smallest level " +
                                                  std::to_string(levels.front()));

    ProjectionDiagnostics out;
    out.tracked = tracked;
    // The canonical dual of the whole family is computed on the ambient space,
    // independently of the truncation path, so the last level is a genuine
    // consistency check. Families that do not span fall back to level N.
    try {
        out.reference = frame_coefficients(f, v, tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::not_a_frame) throw;
        out.reference = coefficients_of(truncated_operator(f, f.size(), tol), v);
    }

    for (std::size_t n : levels) {
        TruncatedOperator op;
        try {
            op = truncated_operator(f, n, tol);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::degenerate_input) throw;
            out.skipped_levels.push_back(n);
            continue;
        }
        const auto approx = coefficients_of(op, v);
        double l2 = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double diff = i < n ? approx[i] - out.reference[i] : out.reference[i];
            l2 += diff * diff;
        }
        std::vector<double> coord;
        double worst_coord = 0.0, worst_dual = 0.0;
        for (std::size_t i : tracked) {
            coord.push_back(std::abs(approx[i] - out.reference[i]));
            worst_coord = std::max(worst_coord, coord.back());
            worst_dual = std::max(worst_dual, op.factor.solve(op.coordinates.col(static_cast<Eigen::Index>(i))).norm());
        }
        out.levels.push_back(n);
        out.l2_errors.push_back(l2);
        out.coord_errors.push_back(std::move(coord));
        out.max_coord_errors.push_back(worst_coord);
        out.dual_norms.push_back(worst_dual);
    }
    out.trend.l2_error = log_slope(out.levels, out.l2_errors);
    out.trend.max_coord_error = log_slope(out.levels, out.max_coord_errors);
    out.trend.max_dual_norm = log_slope(out.levels, out.dual_norms);
    return out;
}

Permutation::Permutation(std::vector<std::size_t> order) : order_(std::move(order)) {
    std::vector<bool> seen(order_.size(), false);
    for (std::size_t i : order_) {
        if (i >= order_.size())
            throw Error(ErrorCode::invalid_permutation,
                        "entry " + std::to_string(i) + " out of range for size " + std::to_string(order_.size()));
        if (seen[i]) throw Error(ErrorCode::invalid_permutation, "entry " + std::to_string(i) + " repeats");
        seen[i] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return Permutation(std::move(order));
}

Permutation Permutation::reversal(std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.rbegin(), order.rend(), std::size_t{0});
    return Permutation(std::move(order));
}

Permutation Permutation::random(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const CounterRng rng = CounterRng(seed).split(0x9e4a);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i, i)]);
    return Permutation(std::move(order));
}

FrameFamily permute(const FrameFamily& f, const Permutation& p) {
    if (p.size() != f.size())
        throw Error(ErrorCode::invalid_permutation, "permutation of size " + std::to_string(p.size()) +
                                                        " for a family of " + std::to_string(f.size()));
    Matrix columns(f.matrix().rows(), f.matrix().cols());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < p.size(); ++i) {
        columns.col(static_cast<Eigen::Index>(i)) = f.matrix().col(static_cast<Eigen::Index>(p[i]));
        labels.push_back(f.label(p[i]));
    }
    return FrameFamily(std::move(columns), std::move(labels));
}

std::pair<FrameFamily, IndexSet> trim_for_strong_method(const FrameFamily& f,
                                                        const subframe::SubframeDecomposition& decomposition) {
    decomposition.k.check_bound(f.size());
    return {f.subfamily(decomposition.k.complement(f.size())), decomposition.k};
}

}  // namespace framekit::projection

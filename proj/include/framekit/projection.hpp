#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "framekit/frame.hpp"
#include "framekit/subframe.hpp"

namespace framekit::projection {

/// Frame operator of the first n vectors, represented on an orthonormal
/// basis of their span H_n.
struct TruncatedOperator {
    std::size_t n = 0;
    OrthoProjector span_basis;
    Matrix s_n;          // rank(H_n) x rank(H_n)
    Matrix coordinates;  // span coordinates of f_1..f_n, one column each
    Eigen::LLT<Matrix> factor;

    /// S_n^{-1} applied to a vector of the ambient space, after projecting onto H_n.
    Vector solve(const Vector& v) const;
};

TruncatedOperator truncated_operator(const FrameFamily& f, std::size_t n, const TolerancePolicy& tol = {});

/// <v, S_n^{-1} f_i> for i < n.
std::vector<double> approx_coefficients(const FrameFamily& f, const Vector& v, std::size_t n,
                                        const TolerancePolicy& tol = {});

struct Trend {
    double l2_error = 0.0;
    double max_coord_error = 0.0;
    double max_dual_norm = 0.0;
};

struct ProjectionDiagnostics {
    std::vector<std::size_t> levels;
    std::vector<std::vector<double>> coord_errors;  // per level, per tracked index
    std::vector<double> l2_errors;                  // sum_{i<=n} |a_i - c_i|^2 + sum_{i>n} |c_i|^2
    std::vector<double> max_coord_errors;
    std::vector<double> dual_norms;                 // max over tracked of ||S_n^{-1} f_i||
    IndexSet tracked;
    std::vector<std::size_t> skipped_levels;        // degenerate truncations
    std::vector<double> reference;                  // full-family coefficients
    Trend trend;                                    // least-squares slope of log(series) against level
};

/// Least-squares slope of ln(max(y, 1e-30)) against x. Zero with fewer than two points.
double log_slope(const std::vector<std::size_t>& x, const std::vector<double>& y);

/// Error series against the coefficients of the whole family. An empty
/// `tracked` means every index below the smallest level.
ProjectionDiagnostics diagnostics(const FrameFamily& f, const Vector& v, std::vector<std::size_t> levels,
                                  IndexSet tracked = {}, const TolerancePolicy& tol = {});

class Permutation {
public:
    Permutation() = default;
    /// Throws invalid_permutation unless `order` is a bijection on {0..N-1}.
    explicit Permutation(std::vector<std::size_t> order);

    static Permutation identity(std::size_t n);
    static Permutation reversal(std::size_t n);
    /// Fisher-Yates shuffle driven by the seed.
    static Permutation random(std::size_t n, std::uint64_t seed);

    std::size_t size() const noexcept { return order_.size(); }
    std::size_t operator[](std::size_t i) const { return order_[i]; }
    const std::vector<std::size_t>& order() const noexcept { return order_; }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> order_;
};

/// Position i of the result holds f[p[i]].
FrameFamily permute(const FrameFamily& f, const Permutation& p);

/// Drops the k-classified vectors.
std::pair<FrameFamily, IndexSet> trim_for_strong_method(const FrameFamily& f,
                                                        const subframe::SubframeDecomposition& decomposition);

}  // namespace framekit::projection

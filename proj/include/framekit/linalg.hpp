#pragma once

#include <cstddef>
#include <vector>

#include "framekit/family.hpp"

namespace framekit::linalg {

/// Tolerances shared by every rank and eigenvalue decision in the toolkit.
///
/// `rank_tol_rel` is applied at the *norm* scale: a Gram-Schmidt residual or a
/// singular value counts as zero when it is at most rank_tol_rel times the
/// largest input norm (resp. largest singular value). Eigenvalues of Gram
/// matrices are squared quantities, so the equivalent eigenvalue cutoff is
/// rank_tol_rel^2 * lambda_max.
struct TolerancePolicy {
    double rank_tol_rel = 1e-10;
    double eig_tol = 1e-12;

    /// Throws invalid_input unless 0 < eig_tol <= rank_tol_rel < 1.
    void validate() const;
};

/// G[i][j] = <f_i, f_j>.
Matrix gram(const FrameFamily& vectors);

/// Throws invalid_input unless m is square and |m_ij - m_ji| <= 1e-12 * max(1, max|m|).
void require_symmetric(const Matrix& m);

/// Full real spectrum of a symmetric matrix, ascending.
std::vector<double> sym_eigenvalues(const Matrix& m);

/// Singular values of an arbitrary matrix, descending.
std::vector<double> singular_values(const Matrix& m);

/// Number of singular values strictly above rank_tol_rel * sigma_max.
std::size_t numerical_rank(const std::vector<double>& singular_values_desc,
                           const TolerancePolicy& tol = {});

struct Orthonormalized {
    FrameFamily basis;                  // orthonormal, labels copied from the selected inputs
    std::vector<std::size_t> selected;  // input indices that extended the span
};

/// Rank-revealing Gram-Schmidt sweep in ascending index order (modified
/// Gram-Schmidt with one re-orthogonalization pass). A vector is selected when
/// its residual against the running span exceeds rank_tol_rel * max input norm.
/// An all-zero family yields an empty basis.
Orthonormalized orthonormalize(const FrameFamily& vectors, const TolerancePolicy& tol = {});

}  // namespace framekit::linalg
